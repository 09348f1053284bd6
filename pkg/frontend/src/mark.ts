import { FetchLike, postScore, ScoreResponse } from "./api";
import { BADGE_ID, MARK_CLASS } from "./config";
import { PageComment, toPacketComments } from "./collect";

export function applyMarks(comments: PageComment[], response: ScoreResponse): number {
  const byId = new Map(comments.map((c) => [c.id, c.element]));
  let marked = 0;
  for (const entry of response.scored) {
    if (!entry.troll_flag) continue;
    const element = byId.get(entry.id);
    if (element) {
      element.classList.add(MARK_CLASS); // classList.add keeps re-runs idempotent
      marked += 1;
    }
  }
  return marked;
}

export function showErrorBadge(doc: Document, message: string): void {
  let badge = doc.getElementById(BADGE_ID);
  if (!badge) {
    badge = doc.createElement("div");
    badge.id = BADGE_ID;
    doc.body.appendChild(badge);
  }
  badge.textContent = `troll detection unavailable: ${message}`;
}

export function clearErrorBadge(doc: Document): void {
  doc.getElementById(BADGE_ID)?.remove();
}

/** POST the visible comments and mark the flagged ones.
 *
 * Returns the number of comments marked.  On any service failure the
 * DOM is left untouched except for the error badge.
 */
export async function scoreAndMark(
  comments: PageComment[],
  originalText: string,
  endpoint: string,
  fetchFn: FetchLike = fetch,
): Promise<number> {
  if (comments.length === 0) return 0;
  const doc = comments[0].element.ownerDocument;
  let response: ScoreResponse;
  try {
    response = await postScore(
      endpoint,
      { original_text: originalText, comments: toPacketComments(comments) },
      fetchFn,
    );
  } catch (error) {
    showErrorBadge(doc, error instanceof Error ? error.message : String(error));
    return 0;
  }
  clearErrorBadge(doc);
  return applyMarks(comments, response);
}
