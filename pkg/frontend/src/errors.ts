// Every server error code gets its own user-readable rendering; nothing
// fails silently.

import { ApiError } from "./api";

const MESSAGES: Record<string, string> = {
  unknown_session: "This session has expired. Reload to start a new one.",
  unknown_node: "That item is not in the knowledge graph.",
  unknown_action: "That action is not in the record.",
  unknown_conflict: "That conflict has already been handled.",
  unknown_proposal: "That suggestion is no longer available.",
  empty_message: "Type a question or a dietary goal first.",
  duplicate_stage: "That item is already staged with the same choice.",
  no_staged_actions: "Nothing is staged. Include or exclude an item first.",
  unresolved_conflict: "Your choices conflict. Resolve the highlighted conflict, then apply again.",
  stale_version: "The recommendation changed under you. Review it and apply again.",
  no_recommendation_yet: "Ask for a recommendation first to see the graph.",
  already_undone: "That action was already undone.",
  invalid_undo_target: "That entry cannot be undone.",
  malformed_body: "The request was malformed. This is a client bug.",
  no_candidates: "No recipe satisfies every constraint. Try relaxing one.",
};

export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return MESSAGES[error.code] ?? `Server error (${error.code}): ${error.message}`;
  }
  if (error instanceof Error) {
    return `Unexpected error: ${error.message}`;
  }
  return "Unexpected error.";
}

export function knownErrorCodes(): string[] {
  return Object.keys(MESSAGES);
}
