// Wire types mirroring the scoring service's JSON bodies.

export interface PacketUser {
  id: number | string;
  screen_name: string;
  followers_count: number;
  follow_count: number;
  statuses_count: number;
  urank: number;
  verified: boolean;
  description: string;
}

export interface PacketComment {
  id: string;
  text: string;
  like_count: number;
  floor_number: number;
  user?: PacketUser;
}

export interface ScoreRequest {
  original_text: string;
  comments: PacketComment[];
}

export interface ScoredEntry {
  id: string;
  sentiment: number;
  emotion: string;
  troll_probability: number;
  troll_flag: boolean;
}

export interface RejectedEntry {
  id: string;
  reason: string;
}

export interface ScoreResponse {
  model_versions: Record<string, string>;
  original_sentiment: number;
  scored: ScoredEntry[];
  rejected: RejectedEntry[];
}

export type FetchLike = typeof fetch;

export async function postScore(
  endpoint: string,
  request: ScoreRequest,
  fetchFn: FetchLike = fetch,
): Promise<ScoreResponse> {
  const response = await fetchFn(`${endpoint}/score`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  if (!response.ok) {
    throw new Error(`score request failed: HTTP ${response.status}`);
  }
  return (await response.json()) as ScoreResponse;
}

export async function getHealth(
  endpoint: string,
  fetchFn: FetchLike = fetch,
): Promise<{ ready: boolean; model_versions: Record<string, string> }> {
  const response = await fetchFn(`${endpoint}/health`);
  if (!response.ok) {
    throw new Error(`health check failed: HTTP ${response.status}`);
  }
  return await response.json();
}
