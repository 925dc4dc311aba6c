"""Acceptance suite: one test per release criterion, pinned tolerances.

Every criterion prints its own PASS line (visible regardless of capture) so
a run reads as a checklist. Oracles here are independent of the engine
code paths they audit: closures by raw edge scan, retrieval by per-recipe
first-principles evaluation, numerals by a local regex walker.
"""
import json
import random
import re
import sys
import time

import pytest
from fastapi.testclient import TestClient

from healthgenie.api import create_app
from healthgenie.bootstrap import build_context
from healthgenie.errors import GenieError, NoCandidates
from healthgenie.gateway import GatewayService
from healthgenie.kg import NodeKind, Unit
from healthgenie.query import Bound, Constraint, ConstraintKind, ConstraintSet, Origin
from healthgenie.session import ActionKind, STATUS_APPLIED

from test_matcher import make_set, oracle_closure, oracle_retrieval

CAROLINE = "I plan to reduce protein and salt intake, please recommend some related recipes."


@pytest.fixture()
def report(capsys):
    """Prints one [PASS] line per criterion, visible under default capture."""
    def announce(name: str, detail: str = "") -> None:
        line = f"[PASS] {name}" + (f" -- {detail}" if detail else "")
        with capsys.disabled():
            print(f"\n{line}", flush=True)
    return announce


@pytest.fixture(scope="module")
def actx():
    return build_context(clock=lambda: 0.0)


# --- criterion 1: oracle equivalence ------------------------------------------------

FLAG_POOL = ["isVegan", "isVegetarian", "isGlutenFree"]
BOUND_POOL = [("calories", [250.0, 300.0, 400.0, 500.0], Unit.KCAL),
              ("protein", [8.0, 15.0, 25.0], Unit.G),
              ("sodium", [0.3, 0.5, 0.9], Unit.G),
              ("fiber", [3.0, 5.0, 8.0], Unit.G),
              ("sugar", [5.0, 10.0, 20.0], Unit.G)]
ENTITY_POOL = ["Tofu", "Cheese", "Shrimp", "Rice", "BlackPepper", "SoySauce",
               "CrushedTomato", "Milk", "Honey", "Garlic", "Lemon", "Pasta",
               "Spinach", "Egg", "OliveOil", "Broccoli"]


def random_constraint_set(rng: random.Random) -> ConstraintSet:
    specs = []
    for _ in range(rng.randint(0, 4)):
        roll = rng.random()
        if roll < 0.2:
            specs.append((ConstraintKind.FLAG, rng.choice(FLAG_POOL), True))
        elif roll < 0.5:
            attr, values, unit = rng.choice(BOUND_POOL)
            comparator = rng.choice(["<", "<=", ">", ">="])
            specs.append((ConstraintKind.BOUND, attr,
                          Bound(comparator, rng.choice(values), unit)))
        elif roll < 0.6:
            specs.append((ConstraintKind.METHOD_FLAG, "highRetainNutrients", True))
        elif roll < 0.8:
            specs.append((ConstraintKind.INCLUDE_ENTITY, rng.choice(ENTITY_POOL), None))
        else:
            specs.append((ConstraintKind.EXCLUDE_ENTITY, rng.choice(ENTITY_POOL), None))
    return make_set(*[(k, key, v if v is not None else key) for k, key, v in specs])


def test_criterion_oracle_equivalence(actx, report):
    snap = actx.snapshot
    recipes = [n for n in snap.node_index.values() if n.kind is NodeKind.RECIPE]
    ingredients = [n for n in snap.node_index.values() if n.kind is NodeKind.INGREDIENT]
    relations = {r for (_, r, _) in snap.edge_index}
    assert len(recipes) >= 20 and len(ingredients) >= 60 and len(relations) >= 6

    rng = random.Random(20240801)
    start = time.perf_counter()
    agreements = 0
    for _ in range(200):
        cs = random_constraint_set(rng)
        got = actx.matcher.candidate_retrieval(cs, snap)
        expected = oracle_retrieval(snap, actx.entailments,
                                    actx.matcher.effective_constraints(cs))
        assert got == expected
        agreements += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    report("oracle equivalence", f"200/200 constraint sets agree in {elapsed:.2f}s")


# --- criterion 2: exclusion soundness sweep -------------------------------------------

def test_criterion_exclusion_soundness_sweep(actx, report):
    snap = actx.snapshot
    ingredients = sorted(n.id for n in snap.node_index.values()
                         if n.kind is NodeKind.INGREDIENT)
    start = time.perf_counter()
    checked = 0
    for ingredient in ingredients:
        cs = make_set((ConstraintKind.EXCLUDE_ENTITY, ingredient, ingredient))
        try:
            rec = actx.matcher.recommend(cs, snap, detail_level=2)
            results = rec.results
        except NoCandidates:
            results = []
        for result in results:
            assert ingredient not in oracle_closure(snap, result.recipe), \
                f"{result.recipe} reaches excluded {ingredient}"
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    report("exclusion soundness sweep",
           f"{checked} ingredients swept exhaustively in {elapsed:.2f}s")


# --- criterion 8: ingestion scale ----------------------------------------------------------

def test_criterion_ingestion_scale(report):
    sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent.parent / "scripts"))
    from bench_ingest_scale import run_benchmark

    stats = run_benchmark()
    assert stats["nodes"] >= 100_000
    assert stats["triples"] >= 300_000
    assert stats["rejected"] == 0
    assert stats["total_seconds"] < 5.0, f"{stats['total_seconds']:.2f}s exceeds budget"
    report("ingestion scale",
           f"{stats['nodes']} nodes / {stats['triples']} triples, "
           f"ingest+hop2 in {stats['total_seconds']:.2f}s")


# --- criteria 3 & 4: replay determinism and undo inverse --------------------------------

LOG_MESSAGES = [
    CAROLINE,
    "Find me a vegan lunch under 400 kcal",
    "Recommend a low-sodium dinner",
    "I want more fiber",
    "Show me something with tofu",
    "less than 10 grams of sugar please",
]
LOG_NODES = ["Tofu", "Rice", "BlackPepper", "SoySauce", "CrushedTomato",
             "Garlic", "Lemon", "Broccoli", "Basil", "Mushroom"]


def generate_log(ctx, rng: random.Random) -> list[dict]:
    session = ctx.new_session(deterministic_token=True)
    for _ in range(rng.randint(3, 8)):
        roll = rng.random()
        try:
            if roll < 0.3:
                session.route_turn(rng.choice(LOG_MESSAGES))
            elif roll < 0.6:
                session.stage_action(rng.choice(["include", "exclude"]),
                                     rng.choice(LOG_NODES))
            elif roll < 0.8:
                session.apply()
            else:
                applied = [a for a in session.actions
                           if a.status == STATUS_APPLIED
                           and a.kind in (ActionKind.TEXT_QUERY, ActionKind.INCLUDE_NODE,
                                          ActionKind.EXCLUDE_NODE)]
                if applied:
                    session.undo(rng.choice(applied).id)
        except GenieError:
            continue
    return session.records()


@pytest.fixture(scope="module")
def fifty_logs(actx):
    rng = random.Random(905)
    return [generate_log(actx, rng) for _ in range(50)]


def final_state(ctx, records):
    session = ctx.replay_session(records)
    profile = session.profile.canonical_json()
    rec = session.last_recommendation
    rec_json = json.dumps(rec.to_dict() if rec else None, sort_keys=True)
    return session, profile, rec_json


def test_criterion_replay_determinism(actx, fifty_logs, report):
    assert len(fifty_logs) == 50
    for i, records in enumerate(fifty_logs):
        _, profile1, rec1 = final_state(actx, records)
        _, profile2, rec2 = final_state(actx, records)
        assert profile1 == profile2, f"log {i}: profiles diverge"
        assert rec1 == rec2, f"log {i}: recommendations diverge"
    report("replay determinism", "50 logs replayed twice, byte-identical")


def test_criterion_undo_inverse(actx, fifty_logs, report):
    contributing = (ActionKind.TEXT_QUERY, ActionKind.INCLUDE_NODE,
                    ActionKind.EXCLUDE_NODE, ActionKind.CLARIFICATION_ANSWER)
    total = 0
    for records in fifty_logs:
        session = actx.replay_session(records)
        eligible = [a for a in session.actions
                    if a.status == STATUS_APPLIED and a.kind in contributing]
        for action in eligible:
            fork = actx.replay_session(records)
            fork.undo(action.id)
            reduced = [r for r in records if r["action_id"] != action.id]
            oracle = actx.replay_session(reduced)
            assert json.dumps(fork.profile.comparable_state(), sort_keys=True) == \
                json.dumps(oracle.profile.comparable_state(), sort_keys=True), \
                f"undo({action.id}) diverges from replay-without"
            total += 1
    assert total > 0
    report("undo inverse", f"{total}/{total} applied actions undo to the prior profile")


# --- criterion 5: subgraph soundness + detail monotonicity --------------------------------

SCENARIO_SETS = [
    ConstraintSet(),
    make_set((ConstraintKind.FLAG, "isVegan", True),
             (ConstraintKind.BOUND, "calories", Bound("<", 400.0, Unit.KCAL))),
    make_set((ConstraintKind.BOUND, "protein", Bound("<", 15.0, Unit.G)),
             (ConstraintKind.BOUND, "sodium", Bound("<", 0.5, Unit.G))),
    make_set((ConstraintKind.METHOD_FLAG, "highRetainNutrients", True)),
    make_set((ConstraintKind.INCLUDE_ENTITY, "CrushedTomato", "CrushedTomato")),
    make_set((ConstraintKind.EXCLUDE_ENTITY, "BlackPepper", "BlackPepper")),
    make_set((ConstraintKind.EXCLUDE_ENTITY, "Rice", "Rice"),
             (ConstraintKind.INCLUDE_ENTITY, "Lemon", "Lemon")),
    make_set((ConstraintKind.FLAG, "isGlutenFree", True)),
]


def view_is_sound(view, snap, hop_budget):
    for edge in view.edges:
        assert edge.subject in view.nodes and edge.object in view.nodes
    adjacency = {}
    for e in view.edges:
        adjacency.setdefault(e.subject, set()).add(e.object)
        adjacency.setdefault(e.object, set()).add(e.subject)
    seeds = set(view.highlights)
    reached = set(seeds)
    frontier = set(seeds)
    for _ in range(hop_budget):
        frontier = {n for f in frontier for n in adjacency.get(f, ())
                    if n not in reached}
        reached |= frontier
    assert reached == set(view.nodes), "node unreachable within hop budget"


def test_criterion_subgraph_soundness_and_detail_monotonicity(actx, report):
    checks = 0
    for cs in SCENARIO_SETS:
        rec = actx.matcher.recommend(cs, actx.snapshot, detail_level=2)
        previous = None
        for k in (1, 2, 3, 4):
            view = actx.matcher.review(rec, actx.snapshot, k)
            hop_budget, _ = actx.config.recommend.budgets(k)
            view_is_sound(view, actx.snapshot, hop_budget)
            nodes = set(view.nodes)
            if previous is not None:
                assert previous <= nodes, f"detail {k} lost nodes"
            previous = nodes
            checks += 1
    report("subgraph soundness + detail monotonicity",
           f"{checks} views over {len(SCENARIO_SETS)} recommendations, k in 1..4")


# --- criterion 6: Caroline scenario end to end ---------------------------------------------

def run_caroline_api() -> list:
    context = build_context(clock=lambda: 0.0)
    client = TestClient(create_app(context))
    transcript = []
    token = client.post("/sessions").json()["token"]

    chat = client.post(f"/sessions/{token}/chat", json={"message": CAROLINE}).json()
    transcript.append(chat)
    snap = context.snapshot
    full = [r for r in chat["recommendation"]["results"] if r["status"] == "full"]
    assert full, "no full matches for the opening query"
    for r in full:
        attrs = snap.node(r["recipe"]).numeric_attrs
        assert attrs["protein"][0] < 15.0
        assert attrs["sodium"][0] < 0.5

    transcript.append(client.post(f"/sessions/{token}/interactions",
                                  json={"kind": "exclude", "node_id": "BlackPepper"}).json())
    transcript.append(client.post(f"/sessions/{token}/interactions",
                                  json={"kind": "include", "node_id": "CrushedTomato"}).json())
    applied = client.post(f"/sessions/{token}/apply", json={}).json()
    transcript.append(applied)

    results = applied["recommendation"]["results"]
    assert results, "apply produced no recipes"
    for r in results:
        closure = oracle_closure(snap, r["recipe"])
        assert "BlackPepper" not in closure
        assert "CrushedTomato" in closure or r["substitutions"]
    assert applied["subgraph_with_diff"]["diff"]["BlackPepper"] == "removed-fading"
    return transcript


def test_criterion_caroline_scenario(actx, report):
    first = json.dumps(run_caroline_api(), sort_keys=True)
    second = json.dumps(run_caroline_api(), sort_keys=True)
    assert first == second, "scenario not deterministic under the mock provider"
    report("Caroline scenario end-to-end",
           "bounds hold, exclusion + inclusion honored, deterministic")


# --- criterion 7: grounding invariant ---------------------------------------------------------

NUMERAL = re.compile(r"\d+(?:\.\d+)?")


def local_numerals(value, found=None):
    """Independent numeral walker (not the gateway's)."""
    if found is None:
        found = set()
    if isinstance(value, bool):
        return found
    if isinstance(value, (int, float)):
        found.add(f"{float(value):g}")
    elif isinstance(value, str):
        found.update(f"{float(m):g}" for m in NUMERAL.findall(value))
    elif isinstance(value, dict):
        for v in value.values():
            local_numerals(v, found)
    elif isinstance(value, (list, tuple)):
        for v in value:
            local_numerals(v, found)
    return found


def fuzz_payload(rng: random.Random) -> dict:
    names = ["Dish A", "Plate 9", "Bowl 3000", "Recipe X", "Combo 12"]
    dishes = []
    for _ in range(rng.randint(0, 4)):
        attrs = {}
        for attr in rng.sample(["calories", "protein", "sodium", "sugar", "fiber"],
                               rng.randint(0, 4)):
            unit = "kcal" if attr == "calories" else "g"
            attrs[attr] = {"value": round(rng.uniform(0, 900), rng.choice([0, 1, 2])),
                           "unit": unit}
        dishes.append({
            "name": rng.choice(names),
            "attrs": attrs,
            "qualitative": {"protein": rng.choice(["low", "moderately high", "high"])}
            if rng.random() < 0.7 else {},
            "free_of": rng.sample(["dairy", "gluten", "nut"], rng.randint(0, 3)),
            "satisfied": rng.sample(
                ["calories < 400 kcal", "protein < 15 g", "sodium < 0.5 g",
                 "isVegan=true", "fiber >= 5 g"], rng.randint(0, 3)),
            "substitutions": (["uses Tomato Paste in place of Crushed Tomato"]
                              if rng.random() < 0.2 else []),
        })
    return {"dishes": dishes}


def test_criterion_grounding_invariant(report):
    service = GatewayService()
    rng = random.Random(41)
    for i in range(200):
        payload = fuzz_payload(rng)
        text = service.generate_summary(payload)
        rogue = local_numerals(text) - local_numerals(payload)
        assert rogue == set(), f"payload {i}: fabricated numerals {sorted(rogue)}"
    report("grounding invariant", "200/200 fuzzed payloads, zero rogue numerals")


# --- criterion 9: conflict handling ----------------------------------------------------------

ENTAILED_INCLUDES = {  # flag -> nodes carrying one of its excluded classes
    "isVegan": ["Cheese", "Milk", "Egg", "Shrimp", "Honey", "Butter"],
    "isVegetarian": ["Chicken", "Beef", "Shrimp", "Fish", "Salmon"],
    "isGlutenFree": ["Pasta", "Bread", "Seitan", "Tortilla"],
}


def random_conflicting_set(rng: random.Random, ctx) -> ConstraintSet:
    constraints = []
    def add(kind, key, value):
        constraints.append(Constraint(kind, key, value, Origin.TEXT, 0,
                                      f"c{len(constraints)}"))
    flag = rng.choice(sorted(ENTAILED_INCLUDES))
    add(ConstraintKind.FLAG, flag, True)
    add(ConstraintKind.INCLUDE_ENTITY, rng.choice(ENTAILED_INCLUDES[flag]), None)
    if rng.random() < 0.5:
        add(ConstraintKind.BOUND, "calories", Bound("<", 300.0, Unit.KCAL))
        add(ConstraintKind.BOUND, "calories", Bound(">", 500.0, Unit.KCAL))
    if rng.random() < 0.5:
        entity = rng.choice(ENTITY_POOL)
        add(ConstraintKind.INCLUDE_ENTITY, entity, None)
        add(ConstraintKind.EXCLUDE_ENTITY, entity, None)
    rng.shuffle(constraints)
    fixed = [Constraint(c.kind, c.key,
                        c.key if c.value is None else c.value,
                        c.origin, c.turn, f"c{i}")
             for i, c in enumerate(constraints)]
    return ConstraintSet(constraints=fixed)


def test_criterion_conflict_handling(actx, report):
    # canonical vegan-vs-cheese pair: flagged, blocks apply, then resolves
    session = actx.new_session(deterministic_token=True)
    session.route_turn("Find me vegan meals please")
    session.stage_action("include", "Cheese")
    from healthgenie.errors import ApplyBlocked
    with pytest.raises(ApplyBlocked) as blocked:
        session.apply()
    pair_id = blocked.value.pair_ids[0]
    conflict = next(c for c in session.staged_conflicts() if c.pair_id == pair_id)
    vegan_ref = next(r for r in (conflict.a_ref, conflict.b_ref)
                     if session_constraint_key(session, r) == "isVegan")
    session.resolve_conflict(pair_id, vegan_ref)
    profile, rec = session.apply()
    assert profile.active_constraints.unresolved_conflicts() == []
    assert all(key != "Cheese" for key in
               [c.key for c in profile.active_constraints.active()])

    # resolution totality on 100 randomized conflicting sets
    rng = random.Random(77)
    for i in range(100):
        cs = actx.parser.detect_conflicts(random_conflicting_set(rng, actx))
        assert cs.unresolved_conflicts(), f"set {i} generated no conflict"
        for conflict in cs.unresolved_conflicts():
            winner = max(conflict.a_ref, conflict.b_ref)
            loser = conflict.a_ref if winner == conflict.b_ref else conflict.b_ref
            conflict.status, conflict.winner = "resolved_user", winner
            cs.superseded[loser] = winner
        recheck = ConstraintSet(constraints=list(cs.active()))
        actx.parser.detect_conflicts(recheck)
        assert recheck.unresolved_conflicts() == [], f"set {i} not total after resolution"
    report("conflict handling",
           "vegan-vs-cheese blocks apply until resolved; 100/100 sets resolve totally")


def session_constraint_key(session, ref):
    for c in session.profile.active_constraints.constraints:
        if c.ref == ref:
            return c.key
    # staged graph constraints aren't folded yet; derive from the action id
    if ref.startswith("g"):
        action = next(a for a in session.actions if a.id == int(ref[1:]))
        return action.target
    return None
