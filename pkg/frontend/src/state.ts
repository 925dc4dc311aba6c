// ViewState: a pure projection of server responses plus unsent local
// staging. No filtering or ranking happens here.

import type {
  ActionRecord,
  ChatResponse,
  ConflictPayload,
  PendingClarification,
  RecommendationPayload,
  SubgraphPayload,
} from "./types";

export interface TranscriptEntry {
  role: "user" | "system";
  text: string;
}

export interface ViewState {
  token: string | null;
  transcript: TranscriptEntry[];
  subgraph: SubgraphPayload | null;
  recommendation: RecommendationPayload | null;
  record: ActionRecord[];
  pending: PendingClarification[];
  conflicts: ConflictPayload[];
  sliderPosition: number;
  sliderClamped: boolean;
  suggestions: string[];
  draft: string; // the chat input, pre-fillable from a suggestion
  queryVersion: number;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    token: null,
    transcript: [],
    subgraph: null,
    recommendation: null,
    record: [],
    pending: [],
    conflicts: [],
    sliderPosition: 2,
    sliderClamped: false,
    suggestions: [],
    draft: "",
    queryVersion: 0,
    error: null,
  };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  absorbChat(message: string, response: ChatResponse): void {
    const patch: Partial<ViewState> = {
      transcript: [
        ...this.state.transcript,
        { role: "user", text: message },
        { role: "system", text: response.reply_text },
      ],
      pending: response.pending_clarifications,
      conflicts: response.conflicts,
      queryVersion: response.query_version,
      error: null,
    };
    if (response.recommendation) {
      patch.recommendation = response.recommendation;
    }
    if (response.subgraph) {
      patch.subgraph = response.subgraph;
    }
    this.update(patch);
  }

  absorbRecord(actions: ActionRecord[]): void {
    this.update({ record: actions });
  }

  stagedActions(): ActionRecord[] {
    return this.state.record.filter((a) => a.status === "staged");
  }
}
