// DOM wiring for the console. All data shown comes verbatim from the HTTP
// payloads; this file only decides where to put it.

import { ApiClient, GraphPayload, QueryResponse, SchemaGraph } from "./api.js";
import { layout } from "./force.js";
import {
  ConsoleState,
  TabId,
  availableTabs,
  editQuery,
  initialState,
  onBackendError,
  onQueryResponse,
  selectDataset,
  selectTab,
} from "./state.js";
import {
  diagnosticLabel,
  graphNodes,
  markerOffset,
  objectAttributes,
  planStages,
  tableView,
  termText,
  treeText,
} from "./viewmodel.js";

const TAB_LABELS: Record<TabId, string> = {
  graph: "Graph",
  tree: "Tree",
  table: "Table",
  term: "Term",
  plan: "Plan",
  schema: "Schema",
};

const params = new URLSearchParams(location.search);
const api = new ApiClient(params.get("api") ?? "http://127.0.0.1:8080");

let state: ConsoleState = initialState;
let schemaCache: SchemaGraph | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

const root = document.getElementById("app")!;
const banner = el("div", "banner hidden");
const datasetSelect = el("select", "dataset-select");
const examplesSelect = el("select", "examples-select");
const editor = el("textarea", "editor");
editor.rows = 6;
editor.spellcheck = false;
const runButton = el("button", "run", "Run query");
const diagnosticBox = el("div", "diagnostic hidden");
const tabBar = el("div", "tabs");
const view = el("div", "view");

function build(): void {
  const controls = el("div", "controls");
  controls.append("Dataset: ", datasetSelect, " Examples: ", examplesSelect, runButton);
  root.append(banner, controls, editor, diagnosticBox, tabBar, view);
  editor.addEventListener("input", () => {
    state = editQuery(state, editor.value);
  });
  runButton.addEventListener("click", () => void runQuery());
  datasetSelect.addEventListener("change", () => void pickDataset(datasetSelect.value));
  examplesSelect.addEventListener("change", () => {
    if (examplesSelect.value) {
      editor.value = examplesSelect.value;
      state = editQuery(state, examplesSelect.value);
    }
  });
}

function showBanner(message: string | null): void {
  banner.classList.toggle("hidden", message === null);
  banner.textContent = message ?? "";
}

async function boot(): Promise<void> {
  build();
  try {
    const datasets = await api.listDatasets();
    datasetSelect.replaceChildren(
      ...datasets.map((d) => {
        const option = el("option", undefined, `${d.id} (${d.name})`);
        option.value = d.id;
        return option;
      }),
    );
    if (datasets.length > 0) {
      await pickDataset(datasets[0].id);
    }
  } catch (exc) {
    state = onBackendError(state, `backend unreachable: ${String(exc)}`);
    render();
  }
}

async function pickDataset(datasetId: string): Promise<void> {
  state = selectDataset(state, datasetId);
  try {
    schemaCache = await api.schema(datasetId);
    const examples = await api.examples(datasetId);
    examplesSelect.replaceChildren(
      el("option", undefined, "pick an example..."),
      ...examples.map((e) => {
        const option = el("option", undefined, e.title);
        option.value = e.query;
        return option;
      }),
    );
    state = { ...state, backendError: null };
  } catch (exc) {
    schemaCache = null;
    state = onBackendError(state, `backend unreachable: ${String(exc)}`);
  }
  render();
}

async function runQuery(): Promise<void> {
  if (!state.datasetId) return;
  let resp: QueryResponse;
  try {
    resp = await api.runQuery(state.datasetId, editor.value);
  } catch (exc) {
    if ((exc as Error).name === "AbortError") return;
    state = onBackendError(state, `backend unreachable: ${String(exc)}`);
    render();
    return;
  }
  state = onQueryResponse({ ...state, queryText: editor.value }, resp);
  render();
}

function render(): void {
  showBanner(state.backendError);
  renderDiagnostic();
  const tabs = availableTabs(state);
  tabBar.replaceChildren(
    ...tabs.map((tab) => {
      const button = el("button", tab === state.activeTab ? "tab active" : "tab",
        TAB_LABELS[tab]);
      button.addEventListener("click", () => {
        state = selectTab(state, tab);
        render();
      });
      return button;
    }),
  );
  view.replaceChildren(renderActive());
}

function renderDiagnostic(): void {
  const d = state.lastResponse?.diagnostics ?? null;
  diagnosticBox.classList.toggle("hidden", d === null);
  if (!d) return;
  diagnosticBox.textContent = diagnosticLabel(d);
  // Underline the reported location by selecting from it to the line end.
  const offset = markerOffset(editor.value, d.line, d.column);
  const lineEnd = editor.value.indexOf("\n", offset);
  editor.focus();
  editor.setSelectionRange(offset, lineEnd === -1 ? editor.value.length : lineEnd);
}

function renderActive(): HTMLElement {
  const resp = state.lastResponse;
  switch (state.activeTab) {
    case "schema":
      return schemaCache ? renderSchema(schemaCache) : el("div", "empty", "no schema");
    case "table": {
      const payload = resp?.rendered?.relational;
      if (!payload) return el("div", "empty", "not renderable");
      const { columns, rows } = tableView(payload);
      return renderTable(columns, rows);
    }
    case "tree":
      return renderTree(treeText(resp!.rendered!.xml!));
    case "term":
      return el("pre", "term-view", termText(resp!.rendered!.term!));
    case "graph":
      return renderGraph(resp!.rendered!.graph!);
    case "plan":
      return renderPlan();
  }
}

function renderTable(columns: string[], rows: string[][]): HTMLElement {
  // Windowed rendering: only the rows in view exist in the DOM.
  const rowHeight = 24;
  const container = el("div", "table-scroll");
  container.style.height = "320px";
  container.style.overflowY = "auto";
  const spacer = el("div");
  spacer.style.height = `${rows.length * rowHeight + rowHeight}px`;
  spacer.style.position = "relative";
  container.append(spacer);

  const window_ = el("table", "result-table");
  window_.style.position = "absolute";
  spacer.append(window_);

  function paint(): void {
    const first = Math.max(0, Math.floor(container.scrollTop / rowHeight) - 5);
    const visible = Math.ceil(320 / rowHeight) + 10;
    window_.style.top = `${first * rowHeight}px`;
    const head = el("tr");
    head.append(...columns.map((c) => el("th", undefined, c)));
    window_.replaceChildren(head);
    for (const row of rows.slice(first, first + visible)) {
      const tr = el("tr");
      tr.append(...row.map((cell) => el("td", undefined, cell)));
      window_.append(tr);
    }
  }
  container.addEventListener("scroll", paint);
  paint();
  return container;
}

function renderTree(xml: string): HTMLElement {
  const wrap = el("div", "tree-view");
  const doc = new DOMParser().parseFromString(xml, "application/xml");
  if (doc.querySelector("parsererror") === null) {
    wrap.append(renderXmlNode(doc.documentElement));
  }
  const source = el("details", "xml-source");
  source.append(el("summary", undefined, "document source"), el("pre", undefined, xml));
  wrap.append(source);
  return wrap;
}

function renderXmlNode(node: Element): HTMLElement {
  const children = Array.from(node.children);
  if (children.length === 0) {
    return el("div", "xml-leaf", `${node.tagName}: ${node.textContent ?? ""}`);
  }
  const details = el("details", "xml-node");
  details.open = true;
  details.append(el("summary", undefined, node.tagName));
  const body = el("div", "xml-children");
  body.append(...children.map(renderXmlNode));
  details.append(body);
  return details;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function drawGraph(
  ids: string[],
  edges: [string, string][],
  labelFor: (id: string) => string,
  onClick?: (id: string) => void,
): SVGSVGElement {
  const width = 640;
  const height = 360;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph-canvas");
  const positions = new Map(
    layout(ids, edges, { width, height }).map((n) => [n.id, n]),
  );
  for (const [src, dst] of edges) {
    const a = positions.get(src);
    const b = positions.get(dst);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", "edge");
    svg.append(line);
  }
  for (const id of ids) {
    const p = positions.get(id)!;
    const group = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
    circle.setAttribute("r", "14");
    circle.setAttribute("class", "node");
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(p.x));
    label.setAttribute("y", String(p.y - 18));
    label.setAttribute("text-anchor", "middle");
    label.textContent = labelFor(id);
    group.append(circle, label);
    if (onClick) {
      group.addEventListener("click", () => onClick(id));
      group.setAttribute("class", "clickable");
    }
    svg.append(group);
  }
  return svg;
}

function renderGraph(payload: GraphPayload): HTMLElement {
  const wrap = el("div", "graph-view");
  const nodes = graphNodes(payload);
  const detail = el("div", "node-detail", "click a vertex for its properties");
  const svg = drawGraph(
    nodes.map((n) => n.id),
    payload.edges,
    (id) => id,
    (id) => {
      const node = nodes.find((n) => n.id === id)!;
      detail.replaceChildren(
        el("strong", undefined, node.id),
        ...node.props.map(([k, v]) => el("div", "prop", `${k} = ${v}`)),
      );
    },
  );
  wrap.append(svg, detail);
  return wrap;
}

function renderSchema(schema: SchemaGraph): HTMLElement {
  const wrap = el("div", "schema-view");
  const detail = el("div", "node-detail", "click an object to list its morphisms");
  const ids = schema.objects.filter((o) => o.kind === "entity").map((o) => o.id);
  const edges = schema.morphisms
    .filter((m) => ids.includes(m.domain) && ids.includes(m.codomain))
    .map((m) => [m.domain, m.codomain] as [string, string]);
  const svg = drawGraph(ids, edges, (id) => id, (id) => {
    detail.replaceChildren(
      el("strong", undefined, id),
      ...objectAttributes(schema, id).map((line) => el("div", "prop", line)),
    );
  });
  wrap.append(svg, detail);
  return wrap;
}

function renderPlan(): HTMLElement {
  const plan = state.lastResponse?.plan;
  const wrap = el("div", "plan-view");
  if (!plan) return wrap;
  const chain = el("div", "plan-chain");
  const detail = el("pre", "lambda-detail", "click a fold node to see its lambda");
  planStages(plan.stages).forEach((stage, i) => {
    if (i > 0) chain.append(el("span", "plan-arrow", "→"));
    chain.append(el("span", "plan-source", stage.source));
    chain.append(el("span", "plan-arrow", "→"));
    const fold = el("button", "plan-fold", "fold");
    fold.addEventListener("click", () => {
      detail.textContent = stage.combiner;
    });
    chain.append(fold);
    if (stage.binds) {
      chain.append(el("span", "plan-arrow", "→"),
        el("span", "plan-bind", stage.binds));
    }
  });
  wrap.append(chain, detail);
  return wrap;
}

void boot();
