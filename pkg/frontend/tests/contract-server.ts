// In-process stand-in for the engine's HTTP contract, stateful enough to
// script the full query -> stage -> apply -> undo loop. Payload shapes
// mirror the real wire format byte for byte; matching logic is a canned
// miniature (three tomato dishes, one with black pepper).

import type {
  ActionRecord,
  EdgePayload,
  NodePayload,
  SubgraphPayload,
} from "../src/types";

const NODES: Record<string, NodePayload> = {};
const CONTAINS: Record<string, string[]> = {
  GardenMinestrone: ["CrushedTomato", "Carrot", "Pasta"],
  TomatoBasilPasta: ["CrushedTomato", "Basil", "Pasta"],
  SpicyChickpeaStew: ["CrushedTomato", "Chickpeas", "BlackPepper"],
  RoastedVeggiePlatter: ["TomatoPaste", "Zucchini"],
};

function addNode(id: string, kind: string, numeric: Record<string, { value: number; unit: string }> = {},
                 categorical: Record<string, string> = {}): void {
  NODES[id] = {
    id,
    label: id.replace(/([a-z])([A-Z])/g, "$1 $2"),
    kind,
    numeric_attrs: numeric,
    categorical_attrs: categorical,
  };
}

addNode("GardenMinestrone", "recipe",
  { calories: { value: 280, unit: "kcal" }, protein: { value: 9, unit: "g" } });
addNode("TomatoBasilPasta", "recipe",
  { calories: { value: 410, unit: "kcal" }, protein: { value: 11, unit: "g" } });
addNode("SpicyChickpeaStew", "recipe",
  { calories: { value: 380, unit: "kcal" }, protein: { value: 14, unit: "g" } });
addNode("RoastedVeggiePlatter", "recipe",
  { calories: { value: 240, unit: "kcal" }, protein: { value: 5, unit: "g" } });
addNode("GrilledTofuWrap", "recipe",
  { calories: { value: 320, unit: "kcal" }, protein: { value: 12, unit: "g" } });
for (const ingredient of ["CrushedTomato", "Carrot", "Pasta", "Basil", "Chickpeas",
                          "BlackPepper", "TomatoPaste", "Zucchini", "Tofu"]) {
  addNode(ingredient, "ingredient", {}, { origin: "plantDerived" });
}
CONTAINS["GrilledTofuWrap"] = ["Tofu", "BlackPepper"];
const SUBSTITUTABLE: Record<string, string> = { CrushedTomato: "TomatoPaste" };

function subgraphFor(recipes: string[], detail: number,
                     diff: Record<string, string> = {}): SubgraphPayload {
  const nodeIds = new Set<string>(recipes);
  if (detail >= 2) {
    for (const r of recipes) for (const i of CONTAINS[r] ?? []) nodeIds.add(i);
  }
  const edges: EdgePayload[] = [];
  for (const r of recipes) {
    for (const i of CONTAINS[r] ?? []) {
      if (nodeIds.has(i)) {
        edges.push({ subject: r, relation: "contains", object: i,
                     provenance: "curated", version: 1 });
      }
    }
  }
  for (const ghost of Object.keys(diff).filter((n) => diff[n] === "removed-fading")) {
    nodeIds.add(ghost);
  }
  return {
    nodes: Array.from(nodeIds).sort().map((id) => NODES[id]),
    edges,
    detail_level: detail,
    diff: diff as SubgraphPayload["diff"],
    highlights: recipes,
  };
}

interface SessionState {
  actions: ActionRecord[];
  nextId: number;
  queryVersion: number;
  excluded: Set<string>;
  included: Set<string>;
  recipes: string[];
  hasRecommendation: boolean;
}

export class ContractServer {
  private sessions = new Map<string, SessionState>();
  private counter = 0;
  failNextApplyWith: string | null = null;

  readonly fetchFn = (url: string, init?: RequestInit): Promise<Response> =>
    Promise.resolve(this.dispatch(url, init));

  private json(status: number, body: unknown, headers: Record<string, string> = {}): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json", ...headers },
    });
  }

  private error(status: number, code: string, message: string): Response {
    return this.json(status, { code, message, details: {} });
  }

  private matchRecipes(state: SessionState): string[] {
    return Object.keys(CONTAINS).filter((recipe) => {
      const closure = CONTAINS[recipe];
      for (const ex of state.excluded) {
        if (closure.includes(ex)) return false;
      }
      for (const inc of state.included) {
        const direct = closure.includes(inc);
        const sub = SUBSTITUTABLE[inc] !== undefined && closure.includes(SUBSTITUTABLE[inc]);
        if (!direct && !sub) return false;
      }
      return true;
    }).sort();
  }

  private record(state: SessionState, kind: string, target: string | number | null,
                 status: string): ActionRecord {
    const action: ActionRecord = {
      action_id: state.nextId++,
      kind,
      target,
      timestamp: state.nextId * 10,
      status: status as ActionRecord["status"],
    };
    state.actions.push(action);
    return action;
  }

  private recommendationBody(state: SessionState, diff: Record<string, string> = {}) {
    const recipes = state.recipes;
    return {
      results: recipes.map((recipe) => ({
        recipe,
        status: "full",
        satisfied: [],
        violated_or_unknown: [],
        score: 1 - recipes.indexOf(recipe) * 0.05,
        substitutions: {},
      })),
      summary_payload: { dishes: recipes.map((r) => ({ name: NODES[r].label })) },
      query_version: state.queryVersion,
      no_candidates: null,
      subgraph: subgraphFor(recipes, 2, diff),
    };
  }

  private dispatch(url: string, init?: RequestInit): Response {
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://double.test");
    const parts = parsed.pathname.split("/").filter(Boolean);
    const body = init?.body ? JSON.parse(String(init.body)) : {};

    if (parts[0] !== "sessions") return this.error(404, "not_found", "no route");
    if (parts.length === 1 && method === "POST") {
      const token = `double-${++this.counter}`;
      this.sessions.set(token, {
        actions: [], nextId: 1, queryVersion: 0,
        excluded: new Set(), included: new Set(), recipes: [],
        hasRecommendation: false,
      });
      return this.json(200, { token, created_at: 0, snapshot_version: 1, query_version: 0 });
    }

    const state = this.sessions.get(parts[1]);
    if (!state) return this.error(404, "unknown_session", "no session");
    const route = parts[2];

    if (route === "chat" && method === "POST") {
      const message = String(body.message ?? "");
      if (!message.trim()) return this.error(422, "empty_message", "message is empty");
      this.record(state, "text_query", message, "applied");
      state.queryVersion += 1;
      state.recipes = this.matchRecipes(state);
      state.hasRecommendation = true;
      const rec = this.recommendationBody(state);
      const { subgraph, ...recommendation } = rec;
      return this.json(200, {
        turn_id: state.actions[state.actions.length - 1].action_id,
        intent: { category: "recipe_search", confidence: 0.9, rationale: "double" },
        reply_text: `Here are ${"dishes"} for: ${message}`,
        recommendation,
        subgraph,
        pending_clarifications: [],
        conflicts: [],
        learned_proposals: [],
        no_candidates: null,
        query_version: state.queryVersion,
      });
    }

    if (route === "interactions" && method === "POST") {
      const nodeId = String(body.node_id);
      if (!NODES[nodeId]) return this.error(404, "unknown_node", `unknown node ${nodeId}`);
      const kind = body.kind === "include" ? "include_node" : "exclude_node";
      const dup = state.actions.some(
        (a) => a.status === "staged" && a.kind === kind && a.target === nodeId);
      if (dup) return this.error(409, "duplicate_stage", "already staged");
      const action = this.record(state, kind, nodeId, "staged");
      return this.json(200, {
        action,
        staged: state.actions.filter((a) => a.status === "staged"),
        conflicts_preview: [],
        query_version: state.queryVersion,
      });
    }

    if (route === "apply" && method === "POST") {
      if (this.failNextApplyWith) {
        const code = this.failNextApplyWith;
        this.failNextApplyWith = null;
        return this.error(409, code, "injected failure");
      }
      const staged = state.actions.filter((a) => a.status === "staged");
      if (staged.length === 0) return this.error(409, "no_staged_actions", "nothing staged");
      const before = new Set(subgraphFor(state.recipes, 2).nodes.map((n) => n.id));
      for (const action of staged) {
        action.status = "applied";
        const target = String(action.target);
        if (action.kind === "exclude_node") state.excluded.add(target);
        else state.included.add(target);
      }
      this.record(state, "apply", null, "applied");
      state.queryVersion += 1;
      state.recipes = this.matchRecipes(state);
      const after = new Set(subgraphFor(state.recipes, 2).nodes.map((n) => n.id));
      const diff: Record<string, string> = {};
      for (const id of after) diff[id] = before.has(id) ? "kept" : "added";
      for (const id of before) if (!after.has(id)) diff[id] = "removed-fading";
      for (const ex of state.excluded) if (!after.has(ex)) diff[ex] = "removed-fading";
      const rec = this.recommendationBody(state, diff);
      const { subgraph, ...recommendation } = rec;
      return this.json(200, {
        recommendation,
        subgraph_with_diff: subgraph,
        profile: {},
        learned_proposals: [],
        query_version: state.queryVersion,
      });
    }

    if (route === "undo" && method === "POST") {
      const action = state.actions.find((a) => a.action_id === body.action_id);
      if (!action) return this.error(404, "unknown_action", "no action");
      if (action.status === "undone") return this.error(409, "already_undone", "already undone");
      action.status = "undone";
      const target = String(action.target);
      if (action.kind === "exclude_node") state.excluded.delete(target);
      if (action.kind === "include_node") state.included.delete(target);
      this.record(state, "undo", action.action_id, "applied");
      state.queryVersion += 1;
      state.recipes = this.matchRecipes(state);
      const rec = this.recommendationBody(state);
      const { subgraph, ...recommendation } = rec;
      return this.json(200, {
        recommendation,
        subgraph_with_diff: subgraph,
        profile: {},
        query_version: state.queryVersion,
      });
    }

    if (route === "graph" && method === "GET") {
      if (!state.hasRecommendation) {
        return this.error(409, "no_recommendation_yet", "nothing to view");
      }
      const requested = Number(parsed.searchParams.get("detail") ?? "1");
      const clamped = requested > 4 || requested < 1;
      const detail = Math.max(1, Math.min(4, requested));
      const headers = clamped ? { "x-detail-clamped": "true" } : {};
      return this.json(200, {
        subgraph: subgraphFor(state.recipes, detail),
        detail,
        query_version: state.queryVersion,
      }, headers);
    }

    if (route === "suggested-queries" && method === "GET") {
      return this.json(200, {
        suggestions: [
          "Find me a vegan lunch under 400 kcal",
          "Recommend a low-sodium dinner",
          "What are the nutritional values of spinach?",
        ],
        query_version: state.queryVersion,
      });
    }

    if (route === "history" && method === "GET") {
      return this.json(200, { actions: state.actions, query_version: state.queryVersion });
    }

    if (route === "updates" && method === "GET") {
      const since = Number(parsed.searchParams.get("since") ?? "0");
      return this.json(200, {
        changed: state.queryVersion > since,
        query_version: state.queryVersion,
      });
    }

    if (route === "conflicts" && method === "POST") {
      this.record(state, "clarification_answer",
        `conflict:${body.pair_id}:${body.winner_ref}`, "applied");
      return this.json(200, { profile: {}, query_version: state.queryVersion });
    }

    return this.error(404, "not_found", `no route ${parsed.pathname}`);
  }

  historyOf(token: string): ActionRecord[] {
    return this.sessions.get(token)?.actions ?? [];
  }
}
