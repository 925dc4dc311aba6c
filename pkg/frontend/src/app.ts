// Wires the panels to the API client and the store. One in-flight
// mutating request at a time; every server response is re-projected into
// ViewState and re-rendered.

import { ApiClient } from "./api";
import { describeError } from "./errors";
import { GraphView } from "./graph";
import {
  ChatPanel,
  ConflictPanel,
  RecordPanel,
  SliderPanel,
  StatusBar,
  SuggestionsPanel,
} from "./panels";
import { Store } from "./state";

export interface AppRoots {
  chat: HTMLElement;
  suggestions: HTMLElement;
  graph: HTMLElement;
  slider: HTMLElement;
  record: HTMLElement;
  status: HTMLElement;
  conflicts: HTMLElement;
}

export const MAX_DETAIL = 4;

export class App {
  readonly store = new Store();
  readonly graph: GraphView;
  readonly chat: ChatPanel;
  readonly suggestions: SuggestionsPanel;
  readonly slider: SliderPanel;
  readonly record: RecordPanel;
  readonly status: StatusBar;
  readonly conflicts: ConflictPanel;
  private busy = false;

  constructor(private readonly api: ApiClient, roots: AppRoots) {
    this.chat = new ChatPanel(roots.chat, (message) => void this.send(message));
    this.suggestions = new SuggestionsPanel(roots.suggestions, (text) => {
      this.chat.input.value = text;
      this.chat.input.focus();
      this.store.update({ draft: text });
    });
    this.graph = new GraphView(roots.graph, (kind, nodeId) => void this.stage(kind, nodeId));
    this.slider = new SliderPanel(roots.slider, MAX_DETAIL, (position) => void this.reDetail(position));
    this.record = new RecordPanel(roots.record,
      (actionId) => void this.undo(actionId),
      () => void this.apply());
    this.status = new StatusBar(roots.status);
    this.conflicts = new ConflictPanel(roots.conflicts,
      (pairId, winnerRef) => void this.resolve(pairId, winnerRef));

    this.store.subscribe((state) => {
      this.chat.render(state.transcript, state.draft);
      this.suggestions.render(state.suggestions);
      this.graph.render(state.subgraph);
      this.slider.render(state.sliderPosition, state.sliderClamped);
      this.record.render(state.record);
      this.status.render(state.error);
      this.conflicts.render(state.conflicts, state.pending);
    });
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
    if (this.busy) return undefined;
    this.busy = true;
    try {
      const result = await work();
      return result;
    } catch (error) {
      this.store.update({ error: describeError(error) });
      return undefined;
    } finally {
      this.busy = false;
    }
  }

  async start(): Promise<void> {
    await this.guarded(async () => {
      const session = await this.api.createSession();
      this.store.update({ token: session.token, queryVersion: session.query_version });
      await this.refreshSuggestions();
      await this.refreshRecord();
    });
  }

  private token(): string {
    const token = this.store.get().token;
    if (!token) throw new Error("session not started");
    return token;
  }

  async send(message: string): Promise<void> {
    await this.guarded(async () => {
      const response = await this.api.chat(this.token(), message);
      this.store.absorbChat(message, response);
      this.store.update({ draft: "" });
      await this.refreshRecord();
      await this.refreshSuggestions();
    });
  }

  async stage(kind: "include" | "exclude", nodeId: string): Promise<void> {
    await this.guarded(async () => {
      await this.api.stage(this.token(), kind, nodeId);
      this.store.update({ error: null });
      await this.refreshRecord();
    });
  }

  async apply(): Promise<void> {
    await this.guarded(async () => {
      const response = await this.api.apply(this.token(), this.store.get().queryVersion);
      this.store.update({
        recommendation: response.recommendation,
        subgraph: response.subgraph_with_diff,
        queryVersion: response.query_version,
        error: null,
      });
      await this.refreshRecord();
    });
  }

  async undo(actionId: number): Promise<void> {
    await this.guarded(async () => {
      const response = await this.api.undo(this.token(), actionId);
      this.store.update({
        recommendation: response.recommendation,
        subgraph: response.subgraph_with_diff,
        queryVersion: response.query_version,
        error: null,
      });
      await this.refreshRecord();
    });
  }

  async reDetail(position: number): Promise<void> {
    await this.guarded(async () => {
      const response = await this.api.graph(this.token(), position);
      this.store.update({
        subgraph: response.subgraph,
        sliderPosition: response.detail,
        sliderClamped: response.clamped,
        error: null,
      });
    });
  }

  async resolve(pairId: string, winnerRef: string): Promise<void> {
    await this.guarded(async () => {
      await this.api.resolveConflict(this.token(), pairId, winnerRef);
      this.store.update({
        conflicts: this.store.get().conflicts.filter((c) => c.pair_id !== pairId),
        error: null,
      });
      await this.refreshRecord();
    });
  }

  private async refreshRecord(): Promise<void> {
    const history = await this.api.history(this.token());
    this.store.absorbRecord(history.actions);
  }

  private async refreshSuggestions(): Promise<void> {
    const response = await this.api.suggestions(this.token());
    this.store.update({ suggestions: response.suggestions });
  }

  /** One long-poll round; refreshes the view when the server moved on
   * (another tab applied, for instance). Returns whether it changed. */
  async pollUpdatesOnce(timeoutMs = 10000): Promise<boolean> {
    const token = this.store.get().token;
    if (!token) return false;
    const update = await this.api.updates(token, this.store.get().queryVersion, timeoutMs);
    if (!update.changed) return false;
    const detail = this.store.get().sliderPosition;
    const view = await this.api.graph(token, detail);
    this.store.update({
      subgraph: view.subgraph,
      queryVersion: update.query_version,
    });
    await this.refreshRecord();
    return true;
  }

  startUpdateLoop(timeoutMs = 10000): () => void {
    let active = true;
    const loop = async () => {
      while (active) {
        try {
          await this.pollUpdatesOnce(timeoutMs);
        } catch {
          await new Promise((resolve) => setTimeout(resolve, timeoutMs));
        }
      }
    };
    void loop();
    return () => {
      active = false;
    };
  }
}
