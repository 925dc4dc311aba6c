"""Corpus + config -> a ready-to-serve engine context."""
from __future__ import annotations

import itertools
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path

from .config import EngineConfig, FIXTURE_DIR, load_config
from .gateway.base import ProviderConfig
from .gateway.service import GatewayService
from .kg.model import GraphSnapshot
from .kg.store import GraphStore, load_relation_registry
from .matcher.engine import Matcher
from .query.lexicon import Lexicon
from .query.parse import Entailments, QueryParser
from .session.manager import Session


@dataclass
class CorpusPaths:
    triples: Path
    attrs: Path
    relations: Path | None = None
    lexicon: Path | None = None
    synonyms: Path | None = None
    entailments: Path | None = None

    @classmethod
    def fixture(cls) -> "CorpusPaths":
        return cls(
            triples=FIXTURE_DIR / "triples.csv",
            attrs=FIXTURE_DIR / "attrs.csv",
            relations=FIXTURE_DIR / "relations.csv",
            lexicon=FIXTURE_DIR / "lexicon.csv",
            synonyms=FIXTURE_DIR / "synonyms.csv",
            entailments=FIXTURE_DIR / "entailments.csv",
        )

    @classmethod
    def from_config(cls, config: EngineConfig) -> "CorpusPaths":
        server = config.server
        if not server.triples_path:
            return cls.fixture()
        fixture = cls.fixture()
        return cls(
            triples=Path(server.triples_path),
            attrs=Path(server.attrs_path),
            relations=Path(server.relations_path) if server.relations_path else fixture.relations,
            lexicon=Path(server.lexicon_path) if server.lexicon_path else None,
            synonyms=Path(server.synonyms_path) if server.synonyms_path else None,
            entailments=Path(server.entailments_path) if server.entailments_path else fixture.entailments,
        )


@dataclass
class EngineContext:
    config: EngineConfig
    store: GraphStore
    snapshot: GraphSnapshot
    lexicon: Lexicon
    entailments: Entailments
    gateway: GatewayService
    parser: QueryParser
    matcher: Matcher
    sessions: dict[str, Session] = field(default_factory=dict)
    clock: object = time.time
    _session_counter: itertools.count = field(default_factory=lambda: itertools.count(1))

    def new_session(self, log_path=None, deterministic_token: bool = False) -> Session:
        if deterministic_token:
            token = f"session-{next(self._session_counter)}"
        else:
            token = secrets.token_urlsafe(16)
        session = Session(token, self.snapshot, self.parser, self.matcher,
                          self.gateway, self.config, log_path=log_path, clock=self.clock)
        self.sessions[token] = session
        return session

    def replay_session(self, records, session_id: str = "replay") -> Session:
        return Session.replay(records, session_id, self.snapshot, self.parser,
                              self.matcher, self.gateway, self.config)


def build_context(config: EngineConfig | None = None, paths: CorpusPaths | None = None,
                  provider: ProviderConfig | None = None, strict: bool = False,
                  clock=time.time) -> EngineContext:
    config = config or load_config()
    paths = paths or CorpusPaths.from_config(config)

    if paths.relations and paths.relations.exists():
        with open(paths.relations, newline="", encoding="utf-8") as fh:
            registry = load_relation_registry(fh)
    else:
        registry = None

    store = GraphStore(registry=registry, clock=clock)
    with open(paths.triples, encoding="utf-8") as triples, \
            open(paths.attrs, encoding="utf-8") as attrs:
        snapshot = store.load_triples(triples, attrs, strict=strict)

    lexicon = Lexicon.from_files(snapshot, paths.lexicon, paths.synonyms)
    entailments = (Entailments.from_file(paths.entailments)
                   if paths.entailments and paths.entailments.exists() else Entailments())

    provider = provider or ProviderConfig.from_env(default=config.server.provider)
    gateway = GatewayService(provider)
    parser = QueryParser(config, snapshot, lexicon, entailments, gateway)
    matcher = Matcher(config, entailments)

    return EngineContext(config=config, store=store, snapshot=snapshot, lexicon=lexicon,
                         entailments=entailments, gateway=gateway, parser=parser,
                         matcher=matcher, clock=clock)
