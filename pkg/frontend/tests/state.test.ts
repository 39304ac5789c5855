import { describe, expect, it } from "vitest";

import type { QueryResponse } from "../src/api.js";
import {
  availableTabs,
  initialState,
  onBackendError,
  onQueryResponse,
  selectDataset,
  selectTab,
  tabForModel,
} from "../src/state.js";

const okResponse: QueryResponse = {
  status: "ok",
  model: "graph",
  rendered: {
    model: "graph",
    relational: { columns: ["a"], rows: [["1"]], csv: "a\r\n1\r\n" },
    xml: "<result/>",
    graph: { vertices: [{ id: "c1" }], edges: [] },
    term: "vertex c1",
  },
  plan: { stages: [{ source: "customers", binds: null, combiner: "\\x xs -> xs", combinerAst: {} }] },
  diagnostics: null,
};

describe("tab gating", () => {
  it("shows no result tabs before any response", () => {
    const state = selectDataset(initialState, "ecommerce");
    expect(availableTabs(state)).toEqual(["schema"]);
  });

  it("enables exactly the tabs whose payloads exist", () => {
    let state = selectDataset(initialState, "ecommerce");
    state = onQueryResponse(state, okResponse);
    expect(availableTabs(state)).toEqual(["graph", "tree", "table", "term", "plan", "schema"]);
  });

  it("omits tabs for unrenderable payloads", () => {
    const partial: QueryResponse = {
      ...okResponse,
      rendered: { ...okResponse.rendered!, graph: null, term: null },
    };
    let state = selectDataset(initialState, "ecommerce");
    state = onQueryResponse(state, partial);
    expect(availableTabs(state)).toEqual(["tree", "table", "plan", "schema"]);
    expect(selectTab(state, "graph").activeTab).not.toBe("graph");
  });
});

describe("response handling", () => {
  it("selects the TO model's tab on success", () => {
    let state = selectDataset(initialState, "ecommerce");
    state = onQueryResponse(state, okResponse);
    expect(state.activeTab).toBe("graph");
    state = onQueryResponse(state, { ...okResponse, model: "algebraic graph" });
    expect(state.activeTab).toBe("term");
  });

  it("keeps the previous tab on a diagnostic", () => {
    let state = selectDataset(initialState, "ecommerce");
    const error: QueryResponse = {
      status: "error", model: null, rendered: null, plan: null,
      diagnostics: { kind: "syntax", message: "boom", line: 1, column: 2 },
    };
    state = onQueryResponse(state, error);
    expect(state.activeTab).toBe("schema");
    expect(availableTabs(state)).toEqual(["schema"]);
  });

  it("maps models to tabs", () => {
    expect(tabForModel("graph")).toBe("graph");
    expect(tabForModel("algebraic graph")).toBe("term");
    expect(tabForModel("relational")).toBe("table");
    expect(tabForModel("xml")).toBe("tree");
  });

  it("a backend error clears results and surfaces the banner text", () => {
    let state = onQueryResponse(selectDataset(initialState, "x"), okResponse);
    state = onBackendError(state, "backend unreachable");
    expect(state.backendError).toContain("unreachable");
    expect(state.lastResponse).toBeNull();
    expect(availableTabs(state)).toEqual(["schema"]);
  });
});
