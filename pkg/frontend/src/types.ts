// Wire contract types, mirroring the server's snake_case JSON exactly.
// The client never derives facts of its own; these shapes are the truth.

export interface NumericAttr {
  value: number;
  unit: string;
}

export interface NodePayload {
  id: string;
  label: string;
  kind: string; // recipe | ingredient | nutrient | condition | cuisine | method | benefit
  numeric_attrs: Record<string, NumericAttr>;
  categorical_attrs: Record<string, string>;
}

export interface EdgePayload {
  subject: string;
  relation: string;
  object: string;
  provenance: string;
  version: number;
}

export type DiffMark = "kept" | "added" | "removed-fading";

export interface SubgraphPayload {
  nodes: NodePayload[];
  edges: EdgePayload[];
  detail_level: number;
  diff: Record<string, DiffMark>;
  highlights: string[];
}

export interface MatchResultPayload {
  recipe: string;
  status: "full" | "borderline";
  satisfied: string[];
  violated_or_unknown: { ref: string; reason: string }[];
  score: number;
  substitutions: Record<string, string>;
}

export interface RecommendationPayload {
  results: MatchResultPayload[];
  summary_payload: { dishes: Record<string, unknown>[] };
  query_version: number;
  no_candidates: Record<string, unknown> | null;
}

export interface PendingClarification {
  term: string;
  candidates: string[];
}

export interface ConflictPayload {
  pair_id: string;
  a_ref: string;
  b_ref: string;
  reason: string;
  status: string;
  winner: string | null;
}

export interface ChatResponse {
  turn_id: number;
  intent: { category: string; confidence: number; rationale: string };
  reply_text: string;
  recommendation: RecommendationPayload | null;
  subgraph: SubgraphPayload | null;
  pending_clarifications: PendingClarification[];
  conflicts: ConflictPayload[];
  learned_proposals: Record<string, unknown>[];
  no_candidates: Record<string, unknown> | null;
  query_version: number;
}

export interface ActionRecord {
  action_id: number;
  kind: string; // include_node | exclude_node | apply | undo | text_query | clarification_answer
  target: string | number | null;
  timestamp: number;
  status: "staged" | "applied" | "undone";
}

export interface SessionInfo {
  token: string;
  created_at: number;
  snapshot_version: number;
  query_version: number;
}

export interface StageResponse {
  action: ActionRecord;
  staged: ActionRecord[];
  conflicts_preview: ConflictPayload[];
  query_version: number;
}

export interface ApplyResponse {
  recommendation: RecommendationPayload | null;
  subgraph_with_diff: SubgraphPayload | null;
  profile: Record<string, unknown>;
  learned_proposals?: Record<string, unknown>[];
  query_version: number;
}

export interface GraphResponse {
  subgraph: SubgraphPayload;
  detail: number;
  clamped: boolean; // derived from the x-detail-clamped response header
  query_version: number;
}

export interface HistoryResponse {
  actions: ActionRecord[];
  query_version: number;
}

export interface SuggestionsResponse {
  suggestions: string[];
  query_version: number;
}

export interface ErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
