// Console state and transitions. Pure functions only: the DOM layer applies
// whatever this module decides, which keeps tab gating and the
// presentation-only invariant testable without a browser.

import type { QueryResponse } from "./api.js";

export type TabId = "graph" | "tree" | "table" | "term" | "plan" | "schema";

export interface ConsoleState {
  datasetId: string | null;
  queryText: string;
  lastResponse: QueryResponse | null;
  activeTab: TabId;
  backendError: string | null;
}

export const initialState: ConsoleState = {
  datasetId: null,
  queryText: "",
  lastResponse: null,
  activeTab: "schema",
  backendError: null,
};

/** Tabs with content to show; a tab never appears without its payload. */
export function availableTabs(state: ConsoleState): TabId[] {
  const tabs: TabId[] = [];
  const rendered = state.lastResponse?.rendered;
  if (rendered?.graph) tabs.push("graph");
  if (rendered?.xml != null) tabs.push("tree");
  if (rendered?.relational) tabs.push("table");
  if (rendered?.term != null) tabs.push("term");
  if (state.lastResponse?.plan) tabs.push("plan");
  if (state.datasetId) tabs.push("schema");
  return tabs;
}

/** The tab the TO clause asks for, given which payloads actually rendered. */
export function tabForModel(model: string | null): TabId {
  switch (model) {
    case "graph":
      return "graph";
    case "algebraic graph":
      return "term";
    case "xml":
      return "tree";
    case "relational":
      return "table";
    default:
      return "schema";
  }
}

export function selectDataset(state: ConsoleState, datasetId: string): ConsoleState {
  return { ...state, datasetId, lastResponse: null, activeTab: "schema" };
}

export function editQuery(state: ConsoleState, queryText: string): ConsoleState {
  return { ...state, queryText };
}

export function onQueryResponse(state: ConsoleState, resp: QueryResponse): ConsoleState {
  const next: ConsoleState = { ...state, lastResponse: resp, backendError: null };
  if (resp.status === "ok") {
    const wanted = tabForModel(resp.model);
    next.activeTab = availableTabs(next).includes(wanted) ? wanted : "table";
  }
  return next;
}

export function onBackendError(state: ConsoleState, message: string): ConsoleState {
  return { ...state, backendError: message, lastResponse: null };
}

export function selectTab(state: ConsoleState, tab: TabId): ConsoleState {
  if (!availableTabs(state).includes(tab)) {
    return state;
  }
  return { ...state, activeTab: tab };
}
