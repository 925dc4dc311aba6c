// The four non-graph panels: chat (A), query suggestions (B), detail
// slider (D), and the undoable interaction record (E). Presentation only;
// every fact rendered came off the wire.

import type { ActionRecord, PendingClarification } from "./types";
import type { TranscriptEntry } from "./state";

export class ChatPanel {
  readonly input: HTMLInputElement;
  readonly sendButton: HTMLButtonElement;
  private readonly log: HTMLElement;

  constructor(root: HTMLElement, onSend: (message: string) => void) {
    root.classList.add("chat-panel");
    this.log = document.createElement("ol");
    this.log.className = "transcript";
    this.log.setAttribute("aria-live", "polite");
    root.appendChild(this.log);

    const form = document.createElement("form");
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "Ask for a recipe or set a dietary goal";
    this.input.setAttribute("aria-label", "chat message");
    this.sendButton = document.createElement("button");
    this.sendButton.type = "submit";
    this.sendButton.textContent = "Send";
    form.append(this.input, this.sendButton);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const message = this.input.value.trim();
      if (message) {
        this.input.value = "";
        onSend(message);
      }
    });
    root.appendChild(form);
  }

  render(transcript: TranscriptEntry[], draft: string): void {
    this.log.textContent = "";
    for (const entry of transcript) {
      const li = document.createElement("li");
      li.className = `turn turn-${entry.role}`;
      li.textContent = entry.text;
      this.log.appendChild(li);
    }
    if (draft && !this.input.value) {
      this.input.value = draft;
    }
  }
}

export class SuggestionsPanel {
  private readonly list: HTMLElement;

  constructor(root: HTMLElement, onPick: (text: string) => void) {
    root.classList.add("suggestions-panel");
    const heading = document.createElement("h2");
    heading.textContent = "Query ideas";
    root.appendChild(heading);
    this.list = document.createElement("div");
    root.appendChild(this.list);
    this.list.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.matches("button.suggestion")) {
        onPick(target.textContent ?? "");
      }
    });
  }

  render(suggestions: string[]): void {
    this.list.textContent = "";
    for (const text of suggestions) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "suggestion";
      button.textContent = text;
      this.list.appendChild(button);
    }
  }
}

export class SliderPanel {
  readonly slider: HTMLInputElement;
  private readonly warning: HTMLElement;

  constructor(root: HTMLElement, max: number, onChange: (position: number) => void) {
    root.classList.add("slider-panel");
    const label = document.createElement("label");
    label.textContent = "Detail";
    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.min = "1";
    this.slider.max = String(max);
    this.slider.step = "1";
    this.slider.value = "2";
    this.slider.setAttribute("aria-label", "graph detail level");
    label.appendChild(this.slider);
    root.appendChild(label);
    this.warning = document.createElement("p");
    this.warning.className = "slider-warning";
    this.warning.hidden = true;
    root.appendChild(this.warning);
    this.slider.addEventListener("change", () => onChange(Number(this.slider.value)));
  }

  render(position: number, clamped: boolean): void {
    this.slider.value = String(position);
    this.warning.hidden = !clamped;
    this.warning.textContent = clamped
      ? "Requested detail exceeds the server budget; showing the maximum."
      : "";
  }
}

const UNDOABLE = new Set(["include_node", "exclude_node", "text_query", "clarification_answer"]);

export class RecordPanel {
  private readonly list: HTMLElement;
  readonly applyButton: HTMLButtonElement;

  constructor(root: HTMLElement, onUndo: (actionId: number) => void, onApply: () => void) {
    root.classList.add("record-panel");
    const heading = document.createElement("h2");
    heading.textContent = "Interaction record";
    root.appendChild(heading);
    this.list = document.createElement("ol");
    root.appendChild(this.list);
    this.applyButton = document.createElement("button");
    this.applyButton.type = "button";
    this.applyButton.className = "apply-button";
    this.applyButton.textContent = "Apply";
    this.applyButton.disabled = true;
    this.applyButton.addEventListener("click", onApply);
    root.appendChild(this.applyButton);
    this.list.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.matches("button.undo")) {
        onUndo(Number(target.dataset.actionId));
      }
    });
  }

  render(record: ActionRecord[]): void {
    this.list.textContent = "";
    for (const action of record) {
      const li = document.createElement("li");
      li.className = `record-entry status-${action.status} kind-${action.kind}`;
      li.dataset.actionId = String(action.action_id);
      const text = document.createElement("span");
      text.textContent = `#${action.action_id} ${describeAction(action)} [${action.status}]`;
      li.appendChild(text);
      if (action.status === "applied" && UNDOABLE.has(action.kind)) {
        const undo = document.createElement("button");
        undo.type = "button";
        undo.className = "undo";
        undo.dataset.actionId = String(action.action_id);
        undo.textContent = "Undo";
        li.appendChild(undo);
      }
      this.list.appendChild(li);
    }
    this.applyButton.disabled = !record.some((a) => a.status === "staged");
  }
}

function describeAction(action: ActionRecord): string {
  switch (action.kind) {
    case "include_node":
      return `include ${action.target}`;
    case "exclude_node":
      return `exclude ${action.target}`;
    case "text_query":
      return `query "${action.target}"`;
    case "apply":
      return "apply staged choices";
    case "undo":
      return `undo #${action.target}`;
    case "clarification_answer":
      return `clarified ${action.target}`;
    default:
      return action.kind;
  }
}

export class StatusBar {
  private readonly root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("status-bar");
    this.root.setAttribute("role", "status");
  }

  render(error: string | null): void {
    this.root.textContent = error ?? "";
    this.root.classList.toggle("has-error", error !== null);
  }
}

export class ConflictPanel {
  private readonly root: HTMLElement;

  constructor(root: HTMLElement, private readonly onResolve: (pairId: string, winnerRef: string) => void) {
    this.root = root;
    this.root.classList.add("conflict-panel");
  }

  render(conflicts: { pair_id: string; a_ref: string; b_ref: string; reason: string; status: string }[],
         pending: PendingClarification[]): void {
    this.root.textContent = "";
    for (const conflict of conflicts.filter((c) => c.status === "unresolved")) {
      const row = document.createElement("div");
      row.className = "conflict";
      const text = document.createElement("span");
      text.textContent = `Conflict (${conflict.reason}): keep which?`;
      row.appendChild(text);
      for (const ref of [conflict.a_ref, conflict.b_ref]) {
        const button = document.createElement("button");
        button.type = "button";
        button.className = "resolve";
        button.textContent = ref;
        button.addEventListener("click", () => this.onResolve(conflict.pair_id, ref));
        row.appendChild(button);
      }
      this.root.appendChild(row);
    }
    for (const clarification of pending) {
      const row = document.createElement("div");
      row.className = "clarification";
      row.textContent = clarification.candidates.length
        ? `Clarify "${clarification.term}": ${clarification.candidates.join(", ")}?`
        : `Could not resolve "${clarification.term}".`;
      this.root.appendChild(row);
    }
  }
}
