// Deterministic force-directed layout. The PRNG is seeded from a hash of
// the subgraph's node ids, so re-rendering the same view always lands
// nodes in the same places.

import type { SubgraphPayload } from "./types";

export interface Point {
  x: number;
  y: number;
}

export function subgraphHash(view: SubgraphPayload): number {
  const ids = view.nodes.map((n) => n.id).sort().join("|");
  let h = 2166136261 >>> 0; // FNV-1a
  for (let i = 0; i < ids.length; i++) {
    h ^= ids.charCodeAt(i);
    h = Math.imul(h, 16777619) >>> 0;
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ITERATIONS = 120;
const REPULSION = 2600;
const SPRING = 0.02;
const SPRING_LENGTH = 90;
const CENTERING = 0.015;

export function layout(view: SubgraphPayload, width: number, height: number): Map<string, Point> {
  const rand = mulberry32(subgraphHash(view));
  const ids = view.nodes.map((n) => n.id);
  const pos = new Map<string, Point>();
  const vel = new Map<string, Point>();
  for (const id of ids) {
    pos.set(id, {
      x: width / 2 + (rand() - 0.5) * width * 0.8,
      y: height / 2 + (rand() - 0.5) * height * 0.8,
    });
    vel.set(id, { x: 0, y: 0 });
  }
  const springs = view.edges
    .filter((e) => pos.has(e.subject) && pos.has(e.object))
    .map((e) => [e.subject, e.object] as const);

  for (let step = 0; step < ITERATIONS; step++) {
    for (const a of ids) {
      const pa = pos.get(a)!;
      const va = vel.get(a)!;
      let fx = (width / 2 - pa.x) * CENTERING;
      let fy = (height / 2 - pa.y) * CENTERING;
      for (const b of ids) {
        if (a === b) continue;
        const pb = pos.get(b)!;
        const dx = pa.x - pb.x;
        const dy = pa.y - pb.y;
        const d2 = Math.max(64, dx * dx + dy * dy);
        const f = REPULSION / d2;
        const d = Math.sqrt(d2);
        fx += (dx / d) * f;
        fy += (dy / d) * f;
      }
      va.x = (va.x + fx) * 0.55;
      va.y = (va.y + fy) * 0.55;
    }
    for (const [a, b] of springs) {
      const pa = pos.get(a)!;
      const pb = pos.get(b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const d = Math.max(1, Math.sqrt(dx * dx + dy * dy));
      const f = SPRING * (d - SPRING_LENGTH);
      const ux = (dx / d) * f;
      const uy = (dy / d) * f;
      vel.get(a)!.x += ux;
      vel.get(a)!.y += uy;
      vel.get(b)!.x -= ux;
      vel.get(b)!.y -= uy;
    }
    for (const id of ids) {
      const p = pos.get(id)!;
      const v = vel.get(id)!;
      p.x = Math.min(width - 24, Math.max(24, p.x + v.x));
      p.y = Math.min(height - 24, Math.max(24, p.y + v.y));
    }
  }
  return pos;
}
