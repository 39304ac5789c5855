// End-to-end contract test: boots the real backend on the shipped fixture,
// pulls Examples 1 and 2 from the examples endpoint exactly as the dropdown
// does, runs them, and asserts the view models show payload fields
// byte-for-byte. Requires python3 with the multicat package installed.

import { type ChildProcess, spawn } from "node:child_process";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { initialState, onQueryResponse, selectDataset } from "../src/state.js";
import { graphNodes, markerOffset, tableView, termText, treeText } from "../src/viewmodel.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const frontendDir = fileURLToPath(new URL("..", import.meta.url));

let server: ChildProcess;
const api = new ApiClient(BASE);

async function waitForBackend(): Promise<void> {
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const resp = await fetch(`${BASE}/datasets`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("backend never came up");
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "multicat.cli", "serve", "--data", "../datasets", "--port", String(PORT)],
    { cwd: frontendDir, stdio: "ignore" },
  );
  await waitForBackend();
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe("console against the live service", () => {
  it("lists the fixture dataset", async () => {
    const datasets = await api.listDatasets();
    expect(datasets.map((d) => d.id)).toContain("ecommerce");
  });

  it("runs Example 1 from the dropdown and byte-matches every tab", async () => {
    const examples = await api.examples("ecommerce");
    const ex1 = examples.find((e) => e.title.includes("Example 1"))!;
    expect(ex1).toBeDefined();

    const resp = await api.runQuery("ecommerce", ex1.query);
    expect(resp.status).toBe("ok");
    const rendered = resp.rendered!;

    let state = selectDataset(initialState, "ecommerce");
    state = onQueryResponse(state, resp);
    expect(state.activeTab).toBe("graph");

    const table = tableView(rendered.relational!);
    expect(table.columns).toBe(rendered.relational!.columns);
    expect(table.rows).toBe(rendered.relational!.rows);
    expect(table.rows.map((r) => r[0])).toEqual(["c1", "c4"]);

    expect(treeText(rendered.xml!)).toBe(rendered.xml);

    const nodes = graphNodes(rendered.graph!);
    expect(nodes.map((n) => n.id)).toEqual(rendered.graph!.vertices.map((v) => v.id));
    expect(nodes.map((n) => n.id)).toEqual(["c1", "c4"]);
  });

  it("runs Example 2 and lands on the term tab with the plan visible", async () => {
    const examples = await api.examples("ecommerce");
    const ex2 = examples.find((e) => e.title.includes("Example 2"))!;
    const resp = await api.runQuery("ecommerce", ex2.query);
    expect(resp.status).toBe("ok");

    let state = selectDataset(initialState, "ecommerce");
    state = onQueryResponse(state, resp);
    expect(state.activeTab).toBe("term");
    expect(termText(resp.rendered!.term!)).toBe(resp.rendered!.term);
    expect(resp.plan!.stages.map((s) => s.binds)).toEqual(["t", null]);
    expect(resp.plan!.stages[0].combiner.startsWith("\\x xs ->")).toBe(true);

    const rows = tableView(resp.rendered!.relational!).rows;
    expect(rows).toEqual([["Mary", "Finland"], ["Alice", "USA"]]);
  });

  it("places the editor marker at the diagnostic's line and column", async () => {
    const bad = "QUERY (\\x -> cons x)\nFROM\nTO xml";
    const resp = await api.runQuery("ecommerce", bad);
    expect(resp.status).toBe("error");
    const d = resp.diagnostics!;
    expect([d.line, d.column]).toEqual([3, 1]);
    const offset = markerOffset(bad, d.line, d.column);
    expect(bad.slice(offset, offset + 2)).toBe("TO");
  });

  it("cancels the previous in-flight query when a new one is submitted", async () => {
    const first = api.runQuery("ecommerce", "QUERY (\\x -> cons x) FROM customers TO xml");
    const second = api.runQuery("ecommerce", "QUERY (\\x -> cons x) FROM locations TO xml");
    const settled = await Promise.allSettled([first, second]);
    expect(settled[1].status).toBe("fulfilled");
  });
});
