// Selector configuration ships as data so page-markup drift only needs
// a config change, not a code change.

export interface Selectors {
  /** container watched for newly rendered comments */
  container: string;
  /** one match per rendered comment */
  comment: string;
  /** comment text inside a comment element */
  text: string;
  /** attribute carrying the stable comment id */
  idAttribute: string;
}

export const DEFAULT_SELECTORS: Selectors = {
  container: ".comments-container, .lite-page-wrap",
  comment: ".comment-item",
  text: ".comment-text",
  idAttribute: "data-cid",
};

export const DEFAULT_ENDPOINT = "http://127.0.0.1:8650";

export const MARK_CLASS = "trolldetect-flagged";
export const BADGE_ID = "trolldetect-error-badge";

declare const chrome: any;

function hasChromeStorage(): boolean {
  return typeof chrome !== "undefined" && !!chrome?.storage?.sync;
}

export async function loadEndpoint(): Promise<string> {
  if (hasChromeStorage()) {
    return new Promise((resolve) => {
      chrome.storage.sync.get(["endpoint"], (items: { endpoint?: string }) => {
        resolve(items.endpoint || DEFAULT_ENDPOINT);
      });
    });
  }
  try {
    return localStorage.getItem("trolldetect-endpoint") || DEFAULT_ENDPOINT;
  } catch {
    return DEFAULT_ENDPOINT;
  }
}

export async function saveEndpoint(endpoint: string): Promise<void> {
  if (hasChromeStorage()) {
    return new Promise((resolve) => {
      chrome.storage.sync.set({ endpoint }, () => resolve());
    });
  }
  try {
    localStorage.setItem("trolldetect-endpoint", endpoint);
  } catch {
    // storage unavailable: stay on the default
  }
}
