// Secondary acceptance: after an exclusion apply, removed nodes render in
// the faded style for a fixed duration before leaving the scene.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { FADE_MS } from "../src/graph";
import { bootApp } from "./helpers";

const OPENING = "I plan to reduce protein and salt intake, please recommend some related recipes.";

describe("fading diff", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("renders removed nodes with the fading class, then removes them", async () => {
    const { app } = await bootApp();
    await app.send(OPENING);
    await app.stage("exclude", "BlackPepper");
    await app.apply();

    const faded = document.querySelector<SVGGElement>('g.node[data-node-id="BlackPepper"]');
    expect(faded).not.toBeNull();
    expect(faded!.classList.contains("fading")).toBe(true);
    expect(faded!.classList.contains("diff-removed-fading")).toBe(true);

    // still present just before the fade deadline...
    vi.advanceTimersByTime(FADE_MS - 1);
    expect(document.querySelector('g.node[data-node-id="BlackPepper"]')).not.toBeNull();

    // ...gone right after it
    vi.advanceTimersByTime(2);
    expect(document.querySelector('g.node[data-node-id="BlackPepper"]')).toBeNull();
  });

  it("kept and added nodes never carry the fading class", async () => {
    const { app } = await bootApp();
    await app.send(OPENING);
    await app.stage("exclude", "BlackPepper");
    await app.apply();
    for (const g of Array.from(document.querySelectorAll<SVGGElement>("g.node"))) {
      const mark = app.store.get().subgraph!.diff[g.dataset.nodeId!];
      if (mark !== "removed-fading") {
        expect(g.classList.contains("fading")).toBe(false);
      }
    }
  });

  it("a re-render cancels pending removal timers", async () => {
    const { app } = await bootApp();
    await app.send(OPENING);
    await app.stage("exclude", "BlackPepper");
    await app.apply();
    // undo triggers a re-render before the fade completes
    const undoTarget = app.store.get().record.find((a) => a.kind === "exclude_node")!;
    await app.undo(undoTarget.action_id);
    vi.advanceTimersByTime(FADE_MS * 3);
    // the fresh (post-undo) view is intact; no stale timer ripped nodes out
    const payloadIds = app.store.get().subgraph!.nodes.map((n) => n.id).sort();
    expect(app.graph.renderedNodeIds()).toEqual(payloadIds);
  });
});
