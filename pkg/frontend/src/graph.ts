// Interactive node-link scene (panel C). SVG so component tests can audit
// the DOM against the wire payload element for element.
//
// Behaviors: nodes colored by kind, hover/focus opens the attribute panel,
// click/Enter opens the Include/Exclude chooser, highlights ring the
// current answers, and removed-fading nodes fade for FADE_MS before they
// leave the scene.

import { layout } from "./layout";
import type { NodePayload, SubgraphPayload } from "./types";

export const FADE_MS = 900;

const SVG_NS = "http://www.w3.org/2000/svg";

export type NodeActionHandler = (kind: "include" | "exclude", nodeId: string) => void;

export class GraphView {
  private readonly root: HTMLElement;
  private readonly onAction: NodeActionHandler;
  private view: SubgraphPayload | null = null;
  private fadeTimers: number[] = [];
  readonly width = 760;
  readonly height = 520;

  constructor(root: HTMLElement, onAction: NodeActionHandler) {
    this.root = root;
    this.onAction = onAction;
    this.root.classList.add("graph-root");
  }

  render(view: SubgraphPayload | null): void {
    for (const timer of this.fadeTimers) {
      clearTimeout(timer);
    }
    this.fadeTimers = [];
    this.view = view;
    this.root.textContent = "";

    if (view === null || view.nodes.length === 0) {
      const empty = document.createElement("p");
      empty.className = "graph-empty";
      empty.textContent = "Nothing to show yet. Ask for a recommendation to see the graph.";
      this.root.appendChild(empty);
      return;
    }

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    svg.setAttribute("role", "group");
    svg.setAttribute("aria-label", "recipe knowledge graph");
    svg.classList.add("graph-svg");

    const positions = layout(view, this.width, this.height);
    const highlights = new Set(view.highlights);

    for (const edge of view.edges) {
      const a = positions.get(edge.subject);
      const b = positions.get(edge.object);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.classList.add("edge", `relation-${edge.relation}`);
      line.dataset.subject = edge.subject;
      line.dataset.relation = edge.relation;
      line.dataset.object = edge.object;
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${edge.subject} ${edge.relation} ${edge.object}`;
      line.appendChild(title);
      svg.appendChild(line);
    }

    for (const node of view.nodes) {
      const p = positions.get(node.id)!;
      const g = document.createElementNS(SVG_NS, "g");
      g.classList.add("node", `kind-${node.kind}`);
      const mark = view.diff[node.id];
      if (mark) {
        g.classList.add(`diff-${mark}`);
      }
      if (mark === "removed-fading") {
        g.classList.add("fading");
        const timer = window.setTimeout(() => g.remove(), FADE_MS);
        this.fadeTimers.push(timer);
      }
      if (highlights.has(node.id)) {
        g.classList.add("highlight");
      }
      g.dataset.nodeId = node.id;
      g.setAttribute("tabindex", "0");
      g.setAttribute("role", "button");
      g.setAttribute("aria-label", `${node.label} (${node.kind})`);
      g.setAttribute("transform", `translate(${p.x},${p.y})`);

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("r", node.kind === "recipe" ? "16" : "10");
      g.appendChild(circle);

      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("dy", node.kind === "recipe" ? "28" : "22");
      text.classList.add("node-label");
      text.textContent = node.label;
      g.appendChild(text);

      g.addEventListener("mouseenter", () => this.showAttributePanel(node, p.x, p.y));
      g.addEventListener("focus", () => this.showAttributePanel(node, p.x, p.y));
      g.addEventListener("mouseleave", () => this.hideAttributePanel());
      const open = (event: Event) => {
        event.preventDefault();
        this.openActionChooser(node, p.x, p.y);
      };
      g.addEventListener("click", open);
      g.addEventListener("keydown", (event) => {
        if ((event as KeyboardEvent).key === "Enter" || (event as KeyboardEvent).key === " ") {
          open(event);
        }
      });

      svg.appendChild(g);
    }

    this.root.appendChild(svg);
  }

  private panel(className: string): HTMLDivElement {
    this.hideAttributePanel();
    this.closeActionChooser();
    const div = document.createElement("div");
    div.className = className;
    this.root.appendChild(div);
    return div;
  }

  showAttributePanel(node: NodePayload, x: number, y: number): void {
    const panel = this.panel("attr-panel");
    panel.style.left = `${x}px`;
    panel.style.top = `${y}px`;
    const title = document.createElement("strong");
    title.textContent = `${node.label} — ${node.kind}`;
    panel.appendChild(title);
    const list = document.createElement("ul");
    for (const [attr, spec] of Object.entries(node.numeric_attrs)) {
      const li = document.createElement("li");
      const unit = spec.unit === "none" ? "" : ` ${spec.unit}`;
      li.textContent = `${attr}: ${spec.value}${unit}`;
      list.appendChild(li);
    }
    for (const [attr, value] of Object.entries(node.categorical_attrs)) {
      const li = document.createElement("li");
      li.textContent = `${attr}: ${value}`;
      list.appendChild(li);
    }
    panel.appendChild(list);
  }

  hideAttributePanel(): void {
    this.root.querySelectorAll(".attr-panel").forEach((el) => el.remove());
  }

  openActionChooser(node: NodePayload, x: number, y: number): void {
    const chooser = this.panel("action-chooser");
    chooser.style.left = `${x}px`;
    chooser.style.top = `${y}px`;
    const label = document.createElement("span");
    label.textContent = node.label;
    chooser.appendChild(label);
    for (const kind of ["include", "exclude"] as const) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = `chooser-${kind}`;
      button.textContent = kind === "include" ? "Include" : "Exclude";
      button.addEventListener("click", () => {
        this.closeActionChooser();
        this.onAction(kind, node.id);
      });
      chooser.appendChild(button);
    }
  }

  closeActionChooser(): void {
    this.root.querySelectorAll(".action-chooser").forEach((el) => el.remove());
  }

  renderedNodeIds(): string[] {
    return Array.from(this.root.querySelectorAll<SVGGElement>("g.node"))
      .map((g) => g.dataset.nodeId!)
      .sort();
  }

  renderedEdgeTriples(): string[] {
    return Array.from(this.root.querySelectorAll<SVGLineElement>("line.edge"))
      .map((l) => `${l.dataset.subject}|${l.dataset.relation}|${l.dataset.object}`)
      .sort();
  }

  currentView(): SubgraphPayload | null {
    return this.view;
  }
}
