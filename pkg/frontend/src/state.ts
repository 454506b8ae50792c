/** Session state as the panels see it. The UI never computes an
 * explanation, ranking, or highlight of its own: everything displayed is
 * read off service responses stored here. */

import type { AskResponse, OverlayMod, PgDoc, UnrecognizedDetail } from "./types.js";

export interface AskFailure {
  status: number;
  message: string;
  forms: UnrecognizedDetail["forms"];
}

export interface ChatTurn {
  question: string;
  response?: AskResponse;
  failure?: AskFailure;
}

export interface AppState {
  pg: PgDoc | null;
  sessionId: string | null;
  turns: ChatTurn[];
  overlay: OverlayMod[];
  pending: boolean;
}

export function initialState(): AppState {
  return { pg: null, sessionId: null, turns: [], overlay: [], pending: false };
}

/** Node ids to highlight: the evidence of the latest answered turn. */
export function highlightSet(turns: ChatTurn[]): Set<string> {
  for (let i = turns.length - 1; i >= 0; i--) {
    const response = turns[i]?.response;
    if (response) {
      return new Set(
        response.evidence
          .filter((item) => item.kind === "node" && item.node)
          .map((item) => item.node as string),
      );
    }
  }
  return new Set();
}

export function describeModification(mod: OverlayMod): string {
  switch (mod.kind) {
    case "remove_node":
      return `remove node ${mod.node}`;
    case "relabel_node":
      return `relabel ${mod.node} to ${mod.label}`;
    case "set_attribute":
      return `set ${mod.name} of ${mod.node} to ${mod.value}`;
    case "set_count":
      return `set count of ${mod.label} in ${mod.scene} to ${mod.count}`;
  }
}
