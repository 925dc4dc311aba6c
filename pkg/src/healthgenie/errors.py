"""Exception hierarchy shared across the engine.

Errors are grouped per subsystem so callers (CLI, HTTP layer) can map them
to exit codes / status codes without string matching.
"""


class GenieError(Exception):
    """Base class for all engine errors."""

    code = "genie_error"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


# --- knowledge graph -------------------------------------------------------

class GraphError(GenieError):
    code = "graph_error"


class MalformedRow(GraphError):
    code = "malformed_row"

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DanglingReference(GraphError):
    code = "dangling_reference"

    def __init__(self, edge):
        super().__init__(f"edge references unknown node: {edge}")
        self.edge = edge


class UnknownRelation(GraphError):
    code = "unknown_relation"

    def __init__(self, name: str):
        super().__init__(f"relation not in registry: {name!r}")
        self.name = name


class UnknownNode(GraphError):
    code = "unknown_node"

    def __init__(self, node_id: str):
        super().__init__(f"unknown node: {node_id!r}")
        self.node_id = node_id


class VersionConflict(GraphError):
    code = "version_conflict"

    def __init__(self, expected: int, actual: int):
        super().__init__(f"expected snapshot version {expected}, store is at {actual}")
        self.expected = expected
        self.actual = actual


# --- query pipeline --------------------------------------------------------

class QueryError(GenieError):
    code = "query_error"


class EmptyMessage(QueryError):
    code = "empty_message"

    def __init__(self):
        super().__init__("message is empty")


class NoParsableContent(QueryError):
    code = "no_parsable_content"

    def __init__(self, message: str):
        super().__init__(f"no constraint or entity mention found in: {message!r}")
        self.message = message


# --- matcher ---------------------------------------------------------------

class NoCandidates(GenieError):
    """No recipe survives the active constraints.

    ``diagnostics`` maps each filter-effective constraint ref to the number
    of candidates that reappear if that single constraint is dropped.
    """

    code = "no_candidates"

    def __init__(self, diagnostics: dict):
        super().__init__("no recipe satisfies the active constraints")
        self.diagnostics = diagnostics

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self), "details": self.diagnostics}


# --- session ---------------------------------------------------------------

class SessionError(GenieError):
    code = "session_error"


class DuplicateStage(SessionError):
    code = "duplicate_stage"

    def __init__(self, node_id: str, polarity: str):
        super().__init__(f"{polarity} of {node_id!r} already staged")
        self.node_id = node_id
        self.polarity = polarity


class NoStagedActions(SessionError):
    code = "no_staged_actions"

    def __init__(self):
        super().__init__("nothing staged to apply")


class UnknownAction(SessionError):
    code = "unknown_action"

    def __init__(self, action_id: int):
        super().__init__(f"no action with id {action_id}")
        self.action_id = action_id


class AlreadyUndone(SessionError):
    code = "already_undone"

    def __init__(self, action_id: int):
        super().__init__(f"action {action_id} already undone")
        self.action_id = action_id


class InvalidUndoTarget(SessionError):
    code = "invalid_undo_target"

    def __init__(self, action_id: int, why: str):
        super().__init__(f"action {action_id} cannot be undone: {why}")
        self.action_id = action_id


class UnknownConflict(SessionError):
    code = "unknown_conflict"

    def __init__(self, pair_id: str):
        super().__init__(f"no unresolved conflict {pair_id!r}")
        self.pair_id = pair_id


class UnknownProposal(SessionError):
    code = "unknown_proposal"

    def __init__(self, proposal_id: str):
        super().__init__(f"no learned proposal {proposal_id!r}")
        self.proposal_id = proposal_id


class ApplyBlocked(SessionError):
    """Apply refused while a health-critical (flag-involving) conflict is open."""

    code = "unresolved_conflict"

    def __init__(self, pair_ids: list):
        super().__init__(f"unresolved conflicts block apply: {', '.join(pair_ids)}")
        self.pair_ids = pair_ids

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self), "details": {"conflicts": self.pair_ids}}


class StaleVersion(SessionError):
    code = "stale_version"

    def __init__(self, sent: int, current: int):
        super().__init__(f"request pinned to query_version {sent}, session is at {current}")
        self.sent = sent
        self.current = current


class NoRecommendationYet(SessionError):
    code = "no_recommendation_yet"

    def __init__(self):
        super().__init__("no recommendation produced in this session yet")


# --- llm gateway -----------------------------------------------------------

class GatewayError(GenieError):
    code = "gateway_error"


class ProviderTimeout(GatewayError):
    code = "provider_timeout"


class SchemaViolation(GatewayError):
    code = "schema_violation"


class CredentialMissing(GatewayError):
    code = "credential_missing"

    def __init__(self, env_var: str):
        super().__init__(f"credential env var {env_var!r} is not set")
        self.env_var = env_var


# --- config ----------------------------------------------------------------

class ConfigError(GenieError):
    code = "config_error"

    def __init__(self, key: str, reason: str):
        super().__init__(f"config key {key!r}: {reason}")
        self.key = key
