import { DEFAULT_SELECTORS, Selectors } from "./config";
import { PacketComment, PacketUser } from "./api";

export interface PageComment {
  /** anchor for later style changes */
  element: Element;
  /** stable client-side id */
  id: string;
  text: string;
  user?: PacketUser;
}

function readInt(element: Element, attribute: string): number | undefined {
  const raw = element.getAttribute(attribute);
  if (raw === null) return undefined;
  const value = Number.parseInt(raw, 10);
  return Number.isNaN(value) ? undefined : value;
}

function readUser(element: Element): PacketUser | undefined {
  // user fields ride on data attributes when the page embeds them;
  // without them the server cannot score the comment and will list it
  // as rejected
  const uid = element.getAttribute("data-user-id");
  const followers = readInt(element, "data-followers");
  const following = readInt(element, "data-following");
  if (uid === null || followers === undefined || following === undefined) {
    return undefined;
  }
  return {
    id: uid,
    screen_name: element.getAttribute("data-screen-name") ?? "",
    followers_count: followers,
    follow_count: following,
    statuses_count: readInt(element, "data-posts") ?? 0,
    urank: readInt(element, "data-urank") ?? 0,
    verified: element.getAttribute("data-verified") === "1",
    description: element.getAttribute("data-description") ?? "",
  };
}

export function collectVisibleComments(
  root: ParentNode,
  selectors: Selectors = DEFAULT_SELECTORS,
): PageComment[] {
  const nodes = root.querySelectorAll(selectors.comment);
  if (nodes.length === 0) {
    console.warn(
      `trolldetect: no comments matched selector ${JSON.stringify(selectors.comment)}`,
    );
    return [];
  }
  const seen = new Set<string>();
  const comments: PageComment[] = [];
  nodes.forEach((element, index) => {
    const id =
      element.getAttribute(selectors.idAttribute) ?? (element.id || `index-${index}`);
    if (seen.has(id)) return; // duplicate render of the same comment
    seen.add(id);
    const textNode = element.querySelector(selectors.text);
    comments.push({
      element,
      id,
      text: (textNode?.textContent ?? element.textContent ?? "").trim(),
      user: readUser(element),
    });
  });
  return comments;
}

export function toPacketComments(comments: PageComment[]): PacketComment[] {
  return comments.map((comment, index) => ({
    id: comment.id,
    text: comment.text,
    like_count: 0,
    floor_number: index + 1,
    user: comment.user,
  }));
}
