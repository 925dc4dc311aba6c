"""Engine configuration: dataclasses plus a TOML loader.

Everything tunable lives in ``data/defaults.toml`` and can be overridden by
a user-supplied file; code never hardcodes nutrient caps, score weights, or
band thresholds.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .kg.model import Unit, canonical_quantity

DATA_DIR = Path(__file__).parent / "data"
DEFAULTS_PATH = DATA_DIR / "defaults.toml"
FIXTURE_DIR = DATA_DIR / "fixture"


@dataclass(frozen=True)
class ScoringWeights:
    satisfied: float = 0.5
    affinity: float = 0.25
    borderline: float = 0.15
    tightness: float = 0.10

    def __post_init__(self):
        total = self.satisfied + self.affinity + self.borderline + self.tightness
        if any(w < 0 for w in (self.satisfied, self.affinity, self.borderline, self.tightness)):
            raise ConfigError("scoring", "weights must be non-negative")
        if abs(total - 1.0) > 1e-9:
            raise ConfigError("scoring", f"weights must sum to 1.0, got {total}")


@dataclass(frozen=True)
class RecommendConfig:
    top_n: int = 5
    max_detail: int = 4
    hop_cap: int = 3
    nodes_per_detail: int = 10
    default_detail: int = 2

    def budgets(self, detail_level: int) -> tuple[int, int]:
        """detail slider position -> (hop_budget, node_budget)."""
        level = max(1, min(detail_level, self.max_detail))
        return min(level, self.hop_cap), self.nodes_per_detail * level


@dataclass(frozen=True)
class NutrientDefault:
    comparator: str
    value: float          # canonical units (g / kcal)
    unit: Unit


@dataclass(frozen=True)
class Band:
    edges: tuple[float, ...]
    labels: tuple[str, ...]

    def classify(self, value: float) -> str:
        for edge, label in zip(self.edges, self.labels):
            if value < edge:
                return label
        return self.labels[-1]


@dataclass
class ServerConfig:
    bind: str = "127.0.0.1"
    port: int = 8080
    provider: str = "mock"
    triples_path: str = ""
    attrs_path: str = ""
    relations_path: str = ""
    lexicon_path: str = ""
    synonyms_path: str = ""
    entailments_path: str = ""


@dataclass
class EngineConfig:
    scoring: ScoringWeights = field(default_factory=ScoringWeights)
    recommend: RecommendConfig = field(default_factory=RecommendConfig)
    repetition_threshold: int = 3
    # "reduce protein" / "more fiber" style goals without numbers
    nutrient_defaults: dict[str, dict[str, NutrientDefault]] = field(default_factory=dict)
    # surface form -> canonical attribute name
    attribute_surfaces: dict[str, str] = field(default_factory=dict)
    attribute_units: dict[str, Unit] = field(default_factory=dict)
    flag_surfaces: dict[str, str] = field(default_factory=dict)           # "vegan" -> isVegan
    method_surfaces: dict[str, str] = field(default_factory=dict)         # phrase -> method flag
    subjective_terms: dict[str, tuple[str, ...]] = field(default_factory=dict)
    bands: dict[str, Band] = field(default_factory=dict)
    summary_free_classes: tuple[str, ...] = ()
    summary_key_attrs: tuple[str, ...] = ("calories", "protein")
    summary_qualitative_attrs: tuple[str, ...] = ("protein",)
    server: ServerConfig = field(default_factory=ServerConfig)

    def default_bound(self, attr: str, direction: str) -> NutrientDefault | None:
        return self.nutrient_defaults.get(attr, {}).get(direction)


def _parse_unit(raw: str, key: str) -> Unit:
    try:
        return Unit(raw)
    except ValueError:
        raise ConfigError(key, f"unknown unit {raw!r}") from None


def load_config(path: str | Path | None = None) -> EngineConfig:
    """Read defaults.toml and overlay an optional user file on top."""
    with open(DEFAULTS_PATH, "rb") as fh:
        raw = tomllib.load(fh)
    if path is not None:
        with open(path, "rb") as fh:
            overlay = tomllib.load(fh)
        raw = _deep_merge(raw, overlay)
    return _build(raw)


def _deep_merge(base: dict, overlay: dict) -> dict:
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _build(raw: dict) -> EngineConfig:
    scoring_raw = raw.get("scoring", {})
    scoring = ScoringWeights(
        satisfied=scoring_raw.get("satisfied", 0.5),
        affinity=scoring_raw.get("affinity", 0.25),
        borderline=scoring_raw.get("borderline", 0.15),
        tightness=scoring_raw.get("tightness", 0.10),
    )
    rec_raw = raw.get("recommend", {})
    recommend = RecommendConfig(
        top_n=rec_raw.get("top_n", 5),
        max_detail=rec_raw.get("max_detail", 4),
        hop_cap=rec_raw.get("hop_cap", 3),
        nodes_per_detail=rec_raw.get("nodes_per_detail", 10),
        default_detail=rec_raw.get("default_detail", 2),
    )

    nutrient_defaults: dict[str, dict[str, NutrientDefault]] = {}
    for attr, directions in raw.get("nutrients", {}).items():
        per_dir = {}
        for direction, spec in directions.items():
            if direction not in ("reduce", "increase"):
                raise ConfigError(f"nutrients.{attr}", f"unknown direction {direction!r}")
            unit = _parse_unit(spec["unit"], f"nutrients.{attr}.{direction}")
            value, unit = canonical_quantity(float(spec["value"]), unit)
            per_dir[direction] = NutrientDefault(spec["comparator"], value, unit)
        nutrient_defaults[attr] = per_dir

    attribute_surfaces: dict[str, str] = {}
    attribute_units: dict[str, Unit] = {}
    for attr, spec in raw.get("attributes", {}).items():
        unit = _parse_unit(spec["unit"], f"attributes.{attr}")
        _, unit = canonical_quantity(0.0, unit)
        attribute_units[attr] = unit
        for surface in spec.get("surfaces", [attr]):
            attribute_surfaces[surface.lower()] = attr

    flag_surfaces = {}
    for flag, surfaces in raw.get("flags", {}).items():
        for surface in surfaces:
            flag_surfaces[surface.lower()] = flag

    method_surfaces = {}
    for key, surfaces in raw.get("method_flags", {}).items():
        for surface in surfaces:
            method_surfaces[surface.lower()] = key

    subjective = {term.lower(): tuple(cands)
                  for term, cands in raw.get("subjective", {}).items()}

    bands = {}
    for attr, spec in raw.get("bands", {}).items():
        edges = tuple(float(e) for e in spec["edges"])
        labels = tuple(spec["labels"])
        if len(labels) != len(edges) + 1:
            raise ConfigError(f"bands.{attr}", "need len(labels) == len(edges) + 1")
        bands[attr] = Band(edges, labels)

    summary_raw = raw.get("summary", {})
    server_raw = raw.get("server", {})
    server = ServerConfig(
        bind=server_raw.get("bind", "127.0.0.1"),
        port=server_raw.get("port", 8080),
        provider=server_raw.get("provider", "mock"),
        triples_path=server_raw.get("triples_path", ""),
        attrs_path=server_raw.get("attrs_path", ""),
        relations_path=server_raw.get("relations_path", ""),
        lexicon_path=server_raw.get("lexicon_path", ""),
        synonyms_path=server_raw.get("synonyms_path", ""),
        entailments_path=server_raw.get("entailments_path", ""),
    )

    return EngineConfig(
        scoring=scoring,
        recommend=recommend,
        repetition_threshold=raw.get("learning", {}).get("repetition_threshold", 3),
        nutrient_defaults=nutrient_defaults,
        attribute_surfaces=attribute_surfaces,
        attribute_units=attribute_units,
        flag_surfaces=flag_surfaces,
        method_surfaces=method_surfaces,
        subjective_terms=subjective,
        bands=bands,
        summary_free_classes=tuple(summary_raw.get("free_classes", [])),
        summary_key_attrs=tuple(summary_raw.get("key_attrs", ["calories", "protein"])),
        summary_qualitative_attrs=tuple(summary_raw.get("qualitative_attrs", ["protein"])),
        server=server,
    )
