// Content script: watch the comment list, score what is visible, and
// keep at most one scoring request in flight; triggers arriving during
// a request coalesce into a single follow-up run.

import { FetchLike } from "./api";
import { collectVisibleComments } from "./collect";
import { DEFAULT_SELECTORS, Selectors, loadEndpoint } from "./config";
import { scoreAndMark } from "./mark";

export interface ScannerDeps {
  selectors?: Selectors;
  fetchFn?: FetchLike;
  originalText?: () => string;
}

export class CommentScanner {
  private inFlight = false;
  private queued = false;
  readonly selectors: Selectors;
  private readonly fetchFn: FetchLike | undefined;
  private readonly originalText: () => string;

  constructor(private readonly doc: Document, deps: ScannerDeps = {}) {
    this.selectors = deps.selectors ?? DEFAULT_SELECTORS;
    this.fetchFn = deps.fetchFn;
    this.originalText = deps.originalText ?? (() => extractOriginalText(this.doc));
  }

  /** Score the currently visible comments once. */
  async runOnce(): Promise<number> {
    const comments = collectVisibleComments(this.doc, this.selectors);
    if (comments.length === 0) return 0;
    const endpoint = await loadEndpoint();
    return scoreAndMark(comments, this.originalText(), endpoint, this.fetchFn ?? fetch);
  }

  /** Coalescing trigger used by observers and user actions. */
  async trigger(): Promise<void> {
    if (this.inFlight) {
      this.queued = true;
      return;
    }
    this.inFlight = true;
    try {
      await this.runOnce();
    } finally {
      this.inFlight = false;
      if (this.queued) {
        this.queued = false;
        void this.trigger();
      }
    }
  }

  observe(): MutationObserver | null {
    const container = this.doc.querySelector(this.selectors.container);
    if (!container) return null;
    const observer = new MutationObserver(() => void this.trigger());
    observer.observe(container, { childList: true, subtree: true });
    return observer;
  }
}

export function extractOriginalText(doc: Document): string {
  return doc.querySelector(".weibo-text, .main-text")?.textContent?.trim() ?? "";
}

// only auto-start inside a real page context, not under the test runner
declare const process: unknown;
if (typeof document !== "undefined" && typeof process === "undefined") {
  const scanner = new CommentScanner(document);
  scanner.observe();
  void scanner.trigger();
}
