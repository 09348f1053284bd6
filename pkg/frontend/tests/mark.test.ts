import { afterEach, describe, expect, it } from "vitest";

import { collectVisibleComments } from "../src/collect";
import { BADGE_ID, MARK_CLASS } from "../src/config";
import { scoreAndMark } from "../src/mark";
import {
  fetchFailing,
  fetchReturning,
  markedElements,
  renderComments,
  responseFlagging,
} from "./helpers";

afterEach(() => {
  document.body.innerHTML = "";
});

const FIVE = ["评论一", "评论二", "评论三", "评论四", "评论五"];
const IDS = ["c0", "c1", "c2", "c3", "c4"];

describe("scoreAndMark", () => {
  it("marks exactly the flagged comments", async () => {
    renderComments(FIVE);
    const comments = collectVisibleComments(document);
    const fetchFn = fetchReturning(responseFlagging(IDS, ["c1", "c3"]));
    const marked = await scoreAndMark(comments, "原文", "http://service", fetchFn);
    expect(marked).toBe(2);
    const flagged = markedElements();
    expect(flagged).toHaveLength(2);
    expect(flagged.map((e) => e.getAttribute("data-cid"))).toEqual(["c1", "c3"]);
  });

  it("is idempotent across re-runs", async () => {
    renderComments(FIVE);
    const comments = collectVisibleComments(document);
    const fetchFn = fetchReturning(responseFlagging(IDS, ["c1", "c3"]));
    await scoreAndMark(comments, "原文", "http://service", fetchFn);
    const snapshot = document.body.innerHTML;
    const markedAgain = await scoreAndMark(comments, "原文", "http://service", fetchFn);
    expect(markedAgain).toBe(2);
    expect(document.body.innerHTML).toBe(snapshot);
    for (const element of markedElements()) {
      const occurrences = element.className.split(/\s+/).filter((c) => c === MARK_CLASS);
      expect(occurrences).toHaveLength(1);
    }
  });

  it("leaves the DOM alone when nothing is flagged", async () => {
    renderComments(FIVE);
    const before = document.body.innerHTML;
    const comments = collectVisibleComments(document);
    const marked = await scoreAndMark(
      comments,
      "原文",
      "http://service",
      fetchReturning(responseFlagging(IDS, [])),
    );
    expect(marked).toBe(0);
    expect(document.body.innerHTML).toBe(before);
  });

  it("mutates nothing and shows the badge when the service is down", async () => {
    renderComments(FIVE);
    const comments = collectVisibleComments(document);
    const before = document.body.innerHTML;
    const marked = await scoreAndMark(comments, "原文", "http://service", fetchFailing(503));
    expect(marked).toBe(0);
    expect(markedElements()).toHaveLength(0);
    const badge = document.getElementById(BADGE_ID);
    expect(badge).not.toBeNull();
    expect(badge!.textContent).toContain("503");
    badge!.remove();
    expect(document.body.innerHTML).toBe(before);
  });

  it("mutates nothing on a network failure", async () => {
    renderComments(FIVE);
    const comments = collectVisibleComments(document);
    const marked = await scoreAndMark(comments, "原文", "http://service", fetchFailing());
    expect(marked).toBe(0);
    expect(markedElements()).toHaveLength(0);
    expect(document.getElementById(BADGE_ID)).not.toBeNull();
  });

  it("clears the badge once the service recovers", async () => {
    renderComments(FIVE);
    const comments = collectVisibleComments(document);
    await scoreAndMark(comments, "原文", "http://service", fetchFailing());
    expect(document.getElementById(BADGE_ID)).not.toBeNull();
    await scoreAndMark(
      comments,
      "原文",
      "http://service",
      fetchReturning(responseFlagging(IDS, ["c0"])),
    );
    expect(document.getElementById(BADGE_ID)).toBeNull();
    expect(markedElements()).toHaveLength(1);
  });
});
