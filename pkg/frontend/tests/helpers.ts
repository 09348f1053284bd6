import { ScoreResponse } from "../src/api";

export function renderComments(texts: string[], ids?: string[]): void {
  document.body.innerHTML = `
    <div class="comments-container">
      ${texts
        .map(
          (text, i) => `
        <div class="comment-item" data-cid="${ids ? ids[i] : `c${i}`}"
             data-user-id="u${i}" data-followers="${100 + i}" data-following="${50 + i}"
             data-posts="10" data-urank="5">
          <span class="comment-text">${text}</span>
        </div>`,
        )
        .join("")}
    </div>`;
}

export function markedElements(): Element[] {
  return Array.from(document.querySelectorAll(".trolldetect-flagged"));
}

export function responseFlagging(ids: string[], flagged: string[]): ScoreResponse {
  return {
    model_versions: { troll: "test/1" },
    original_sentiment: 0.5,
    scored: ids.map((id) => ({
      id,
      sentiment: 0.4,
      emotion: "happiness",
      troll_probability: flagged.includes(id) ? 0.9 : 0.1,
      troll_flag: flagged.includes(id),
    })),
    rejected: [],
  };
}

export function fetchReturning(response: ScoreResponse): typeof fetch {
  return (async () =>
    new Response(JSON.stringify(response), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    })) as typeof fetch;
}

export function fetchFailing(status?: number): typeof fetch {
  return (async () => {
    if (status === undefined) {
      throw new TypeError("NetworkError: connection refused");
    }
    return new Response(JSON.stringify({ error: "down" }), { status });
  }) as typeof fetch;
}
