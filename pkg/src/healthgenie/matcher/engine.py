"""Retrieval, borderline partitioning, scoring, and recommendation assembly.

Hard rules drop a recipe outright; unverifiable ones (missing attribute,
unclassified ingredient) demote it to borderline with reasons, never hide
it. Learned class demotions (``demoteClass:<cls>`` flags) are soft: they
only depress the score.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..config import EngineConfig
from ..errors import NoCandidates
from ..kg.model import GraphSnapshot, NodeKind, SubgraphView
from ..kg.store import extract_subgraph_from
from ..query.model import Constraint, ConstraintKind, ConstraintSet
from ..query.parse import Entailments

DEMOTE_PREFIX = "demoteClass:"
CLOSURE_RELATIONS = ("contains", "containsIngredient")

REASON_VIOLATED = "violated"
REASON_MISSING = "attribute_missing"


@dataclass
class MatchResult:
    recipe: str
    status: str                                   # "full" | "borderline"
    satisfied: list[str] = field(default_factory=list)
    violated_or_unknown: list[tuple[str, str]] = field(default_factory=list)
    score: float = 0.0
    substitutions: dict[str, str] = field(default_factory=dict)  # constraint ref -> node used

    def to_dict(self) -> dict:
        return {
            "recipe": self.recipe,
            "status": self.status,
            "satisfied": list(self.satisfied),
            "violated_or_unknown": [{"ref": r, "reason": why}
                                    for r, why in self.violated_or_unknown],
            "score": round(self.score, 6),
            "substitutions": dict(sorted(self.substitutions.items())),
        }


@dataclass
class Recommendation:
    results: list[MatchResult]
    subgraph: SubgraphView
    summary_payload: dict
    query_version: int
    no_candidates: dict | None = None   # leave-one-out diagnostics when empty

    def recipe_ids(self) -> list[str]:
        return [r.recipe for r in self.results]

    def to_dict(self) -> dict:
        return {
            "results": [r.to_dict() for r in self.results],
            "subgraph": self.subgraph.to_dict(),
            "summary_payload": self.summary_payload,
            "query_version": self.query_version,
            "no_candidates": self.no_candidates,
        }


@dataclass
class _Evaluation:
    hard_violation: bool
    satisfied: list[str]
    unknown: list[tuple[str, str]]
    substitutions: dict[str, str]


class Matcher:
    def __init__(self, config: EngineConfig, entailments: Entailments):
        self.config = config
        self.entailments = entailments
        self._closure_cache: dict[tuple[int, str], frozenset[str]] = {}

    # --- closure -------------------------------------------------------------

    def ingredient_closure(self, snapshot: GraphSnapshot, recipe_id: str) -> frozenset[str]:
        """Everything reachable through contains/containsIngredient edges."""
        key = (snapshot.version, recipe_id)
        cached = self._closure_cache.get(key)
        if cached is not None:
            return cached
        seen: set[str] = set()
        stack = [recipe_id]
        while stack:
            node_id = stack.pop()
            for rel, neighbor_id, dir_ in snapshot.adjacency.get(node_id, ()):
                if dir_ == "out" and rel in CLOSURE_RELATIONS:
                    if neighbor_id not in seen:
                        seen.add(neighbor_id)
                        stack.append(neighbor_id)
        closure = frozenset(seen)
        self._closure_cache[key] = closure
        return closure

    # --- evaluation ------------------------------------------------------------

    @staticmethod
    def effective_constraints(cs: ConstraintSet) -> list[Constraint]:
        out = cs.filter_effective()
        assert all(c.kind is not ConstraintKind.SUBJECTIVE for c in out), \
            "subjective constraint reached the matcher"
        return [c for c in out
                if not (c.kind is ConstraintKind.FLAG and c.key.startswith(DEMOTE_PREFIX))]

    @staticmethod
    def demoted_classes(cs: ConstraintSet) -> frozenset[str]:
        return frozenset(c.key[len(DEMOTE_PREFIX):] for c in cs.active()
                         if c.kind is ConstraintKind.FLAG and c.key.startswith(DEMOTE_PREFIX))

    def _evaluate(self, snapshot: GraphSnapshot, recipe_id: str,
                  constraints: list[Constraint]) -> _Evaluation:
        recipe = snapshot.node(recipe_id)
        closure = self.ingredient_closure(snapshot, recipe_id)
        satisfied: list[str] = []
        unknown: list[tuple[str, str]] = []
        substitutions: dict[str, str] = {}

        for c in constraints:
            if c.kind is ConstraintKind.FLAG:
                excluded = self.entailments.excluded_classes(c.key)
                if c.value is not True or not excluded:
                    satisfied.append(c.ref)
                    continue
                hit = False
                unverifiable = False
                for member in closure:
                    node = snapshot.node(member)
                    if excluded & node.class_values():
                        hit = True
                        break
                    if node.kind is NodeKind.INGREDIENT and not node.categorical_attrs:
                        unverifiable = True
                if hit:
                    return _Evaluation(True, [], [], {})
                if unverifiable:
                    unknown.append((c.ref, REASON_MISSING))
                else:
                    satisfied.append(c.ref)

            elif c.kind is ConstraintKind.BOUND:
                present = recipe.numeric_attrs.get(c.key)
                if present is None:
                    unknown.append((c.ref, REASON_MISSING))
                elif c.value.admits(present[0]):
                    satisfied.append(c.ref)
                else:
                    return _Evaluation(True, [], [], {})

            elif c.kind is ConstraintKind.METHOD_FLAG:
                profile = recipe.categorical_attrs.get("methodProfile")
                if profile is None:
                    unknown.append((c.ref, REASON_MISSING))
                elif profile == c.key:
                    satisfied.append(c.ref)
                else:
                    return _Evaluation(True, [], [], {})

            elif c.kind is ConstraintKind.EXCLUDE_ENTITY:
                if c.key == recipe_id or c.key in closure:
                    return _Evaluation(True, [], [], {})
                satisfied.append(c.ref)

            elif c.kind is ConstraintKind.INCLUDE_ENTITY:
                if c.key == recipe_id or c.key in closure:
                    satisfied.append(c.ref)
                    continue
                substitute = self._find_substitute(snapshot, c.key, closure)
                if substitute is not None:
                    satisfied.append(c.ref)
                    substitutions[c.ref] = substitute
                else:
                    return _Evaluation(True, [], [], {})

        return _Evaluation(False, satisfied, unknown, substitutions)

    @staticmethod
    def _find_substitute(snapshot: GraphSnapshot, wanted: str, closure) -> str | None:
        for member in sorted(closure):
            if (wanted, "substitutableBy", member) in snapshot.edge_index:
                return member
            if (member, "substitutableBy", wanted) in snapshot.edge_index:
                return member
        return None

    # --- retrieval ---------------------------------------------------------------

    def candidate_retrieval(self, cs: ConstraintSet, snapshot: GraphSnapshot,
                            lenient: bool = True) -> list[str]:
        """Recipes surviving every hard constraint; deterministic id order.

        With ``lenient`` (the default), unverifiable constraints keep the
        recipe in play for borderline partitioning; without it, only
        provably satisfying recipes survive.
        """
        constraints = self.effective_constraints(cs)
        recipes = sorted(node.id for node in snapshot.node_index.values()
                         if node.kind is NodeKind.RECIPE)
        if not constraints:
            return recipes
        survivors = []
        for recipe_id in recipes:
            ev = self._evaluate(snapshot, recipe_id, constraints)
            if ev.hard_violation:
                continue
            if ev.unknown and not lenient:
                continue
            survivors.append(recipe_id)
        return survivors

    def partition_borderline(self, candidates, cs: ConstraintSet,
                             snapshot: GraphSnapshot) -> tuple[list[MatchResult], list[MatchResult]]:
        constraints = self.effective_constraints(cs)
        full: list[MatchResult] = []
        borderline: list[MatchResult] = []
        for recipe_id in candidates:
            ev = self._evaluate(snapshot, recipe_id, constraints)
            if ev.hard_violation:
                continue
            result = MatchResult(recipe=recipe_id,
                                 status="borderline" if ev.unknown else "full",
                                 satisfied=ev.satisfied,
                                 violated_or_unknown=ev.unknown,
                                 substitutions=ev.substitutions)
            (borderline if ev.unknown else full).append(result)
        return full, borderline

    # --- scoring ---------------------------------------------------------------

    def score(self, result: MatchResult, cs: ConstraintSet,
              snapshot: GraphSnapshot) -> float:
        """Deterministic weighted sum in [0,1]; see config [scoring]."""
        w = self.config.scoring
        constraints = self.effective_constraints(cs)
        by_ref = {c.ref: c for c in constraints}

        fraction = (len(result.satisfied) / len(constraints)) if constraints else 1.0

        includes = [c for c in constraints if c.kind is ConstraintKind.INCLUDE_ENTITY]
        if includes:
            hits = 0.0
            for c in includes:
                if c.ref in result.substitutions:
                    hits += 0.5
                elif c.ref in result.satisfied:
                    hits += 1.0
            positive = hits / len(includes)
        else:
            positive = 0.0
        demoted = self.demoted_classes(cs)
        if demoted:
            closure = self.ingredient_closure(snapshot, result.recipe)
            touched = set()
            for member in closure | {result.recipe}:
                touched |= set(snapshot.node(member).class_values()) & demoted
            near_miss = len(touched) / len(demoted)
        else:
            near_miss = 0.0
        affinity = positive - near_miss

        penalty = 1.0 if result.status == "borderline" else 0.0

        margins = []
        recipe = snapshot.node(result.recipe)
        for ref in result.satisfied:
            c = by_ref.get(ref)
            if c is None or c.kind is not ConstraintKind.BOUND:
                continue
            present = recipe.numeric_attrs.get(c.key)
            if present is None or c.value.value <= 0:
                continue
            bound = c.value
            if bound.comparator in ("<", "<="):
                margin = (bound.value - present[0]) / bound.value
            else:
                margin = (present[0] - bound.value) / bound.value
            margins.append(max(0.0, min(1.0, margin)))
        tightness = sum(margins) / len(margins) if margins else 0.0

        raw = (w.satisfied * fraction + w.affinity * affinity
               - w.borderline * penalty + w.tightness * tightness)
        # affine map from the attainable range onto [0,1]: keeps every term's
        # ordering strict (plain clamping would flatten low scores to 0)
        low = -(w.affinity + w.borderline)
        high = w.satisfied + w.affinity + w.tightness
        return (raw - low) / (high - low)

    # --- recommendation -----------------------------------------------------------

    def recommend(self, cs: ConstraintSet, snapshot: GraphSnapshot,
                  detail_level: int | None = None, query_version: int = 0) -> Recommendation:
        detail = detail_level if detail_level is not None else self.config.recommend.default_detail
        candidates = self.candidate_retrieval(cs, snapshot, lenient=True)
        if not candidates:
            raise NoCandidates(self.leave_one_out(cs, snapshot))
        full, borderline = self.partition_borderline(candidates, cs, snapshot)
        ranked = full + borderline
        for result in ranked:
            result.score = self.score(result, cs, snapshot)
        ranked.sort(key=lambda r: (-r.score, r.recipe))
        top = ranked[: self.config.recommend.top_n]

        hop_budget, node_budget = self.config.recommend.budgets(detail)
        subgraph = extract_subgraph_from(snapshot, [r.recipe for r in top],
                                         hop_budget, node_budget)
        subgraph.detail_level = max(1, min(detail, self.config.recommend.max_detail))
        subgraph.highlights = tuple(r.recipe for r in top)

        payload = self.build_summary_payload(top, cs, snapshot)
        return Recommendation(results=top, subgraph=subgraph,
                              summary_payload=payload, query_version=query_version)

    def empty_recommendation(self, diagnostics: dict, prev: Recommendation | None,
                             detail_level: int, query_version: int) -> Recommendation:
        """Nothing matches anymore: every previously shown node fades out."""
        if prev is not None:
            nodes = {n: node for n, node in prev.subgraph.nodes.items()
                     if prev.subgraph.diff.get(n) != "removed-fading"}
            edges = tuple(e for e in prev.subgraph.edges
                          if e.subject in nodes and e.object in nodes)
            diff = {n: "removed-fading" for n in nodes}
        else:
            nodes, edges, diff = {}, (), {}
        view = SubgraphView(nodes=nodes, edges=edges,
                            detail_level=max(1, min(detail_level,
                                                    self.config.recommend.max_detail)),
                            diff=diff)
        return Recommendation(results=[], subgraph=view,
                              summary_payload={"dishes": []},
                              query_version=query_version, no_candidates=diagnostics)

    def review(self, recommendation: Recommendation, snapshot: GraphSnapshot,
               detail_level: int) -> SubgraphView:
        """Same results re-viewed at another detail level; no re-ranking."""
        hop_budget, node_budget = self.config.recommend.budgets(detail_level)
        view = extract_subgraph_from(snapshot, recommendation.recipe_ids(),
                                     hop_budget, node_budget)
        view.detail_level = max(1, min(detail_level, self.config.recommend.max_detail))
        view.highlights = tuple(recommendation.recipe_ids())
        return view

    def leave_one_out(self, cs: ConstraintSet, snapshot: GraphSnapshot) -> dict:
        """Which single constraint, if dropped, brings candidates back."""
        constraints = self.effective_constraints(cs)
        diagnostics = {}
        for drop in constraints:
            trimmed = ConstraintSet(
                constraints=[c for c in cs.constraints if c.ref != drop.ref],
                pending_clarifications=list(cs.pending_clarifications),
                conflicts=list(cs.conflicts),
                superseded=dict(cs.superseded))
            count = len(self.candidate_retrieval(trimmed, snapshot, lenient=True))
            diagnostics[drop.ref] = {
                "description": drop.describe(),
                "candidates_if_dropped": count,
            }
        return diagnostics

    # --- adaptive recomputation ------------------------------------------------------

    def adapt(self, prev: Recommendation, cs: ConstraintSet, snapshot: GraphSnapshot,
              detail_level: int | None = None, query_version: int = 0,
              removed_entities=()) -> Recommendation:
        """Re-recommend under the updated profile and mark the view diff.

        Nodes present before and after are ``kept``, new ones ``added``,
        dropped ones ``removed-fading``. A just-excluded entity is always
        shown fading, even if ranking alone would have dropped it silently.
        Faded nodes keep their edges to kept nodes but never to added ones.
        """
        fresh = self.recommend(cs, snapshot, detail_level, query_version)
        # ghosts from the previous diff were only shown fading; they are not
        # part of the view being diffed against
        prev_nodes = {n for n in prev.subgraph.nodes
                      if prev.subgraph.diff.get(n) != "removed-fading"}
        new_nodes = set(fresh.subgraph.nodes)

        diff: dict[str, str] = {}
        merged_nodes = dict(fresh.subgraph.nodes)
        for node_id in fresh.subgraph.nodes:
            diff[node_id] = "kept" if node_id in prev_nodes else "added"
        removed = (prev_nodes - new_nodes) | {
            e for e in removed_entities if snapshot.has_node(e) and e not in new_nodes}
        for node_id in sorted(removed):
            diff[node_id] = "removed-fading"
            if node_id not in merged_nodes:
                merged_nodes[node_id] = (prev.subgraph.nodes.get(node_id)
                                         or snapshot.node(node_id))

        kept = {n for n, mark in diff.items() if mark == "kept"}
        edges = list(fresh.subgraph.edges)
        seen = {e.triple for e in edges}
        for edge in prev.subgraph.edges:
            if edge.triple in seen:
                continue
            ends = {edge.subject, edge.object}
            if ends & removed and ends <= (kept | removed):
                edges.append(edge)
                seen.add(edge.triple)
        edges.sort(key=lambda e: e.triple)

        fresh.subgraph = SubgraphView(
            nodes=merged_nodes, edges=tuple(edges),
            detail_level=fresh.subgraph.detail_level,
            diff=diff, highlights=fresh.subgraph.highlights)
        return fresh

    def build_summary_payload(self, results: list[MatchResult], cs: ConstraintSet,
                              snapshot: GraphSnapshot) -> dict:
        by_ref = {c.ref: c for c in cs.constraints}
        dishes = []
        for result in results:
            recipe = snapshot.node(result.recipe)
            closure = self.ingredient_closure(snapshot, result.recipe)
            closure_classes = set()
            for member in closure:
                closure_classes |= set(snapshot.node(member).class_values())

            attrs = {}
            for attr in self.config.summary_key_attrs:
                present = recipe.numeric_attrs.get(attr)
                if present is not None:
                    attrs[attr] = {"value": present[0], "unit": present[1].value}
            qualitative = {}
            for attr in self.config.summary_qualitative_attrs:
                band = self.config.bands.get(attr)
                present = recipe.numeric_attrs.get(attr)
                if band is not None and present is not None:
                    qualitative[attr] = band.classify(present[0])
            free_of = [cls for cls in self.config.summary_free_classes
                       if cls not in closure_classes]
            satisfied = []
            for ref in result.satisfied:
                c = by_ref.get(ref)
                if c is not None:
                    satisfied.append(c.describe())
            substitutions = []
            for ref, node_id in sorted(result.substitutions.items()):
                c = by_ref.get(ref)
                wanted = snapshot.node(c.key).label if c else ref
                substitutions.append(
                    f"uses {snapshot.node(node_id).label} in place of {wanted}")
            caveats = []
            for ref, reason in result.violated_or_unknown:
                c = by_ref.get(ref)
                what = c.describe() if c else ref
                caveats.append(f"{what} could not be verified ({reason})")

            dishes.append({
                "name": recipe.label,
                "recipe_id": recipe.id,
                "status": result.status,
                "attrs": attrs,
                "qualitative": qualitative,
                "free_of": free_of,
                "satisfied": satisfied,
                "substitutions": substitutions,
                "caveats": caveats,
            })
        return {"dishes": dishes}
