// Typed client for the four service endpoints. The console touches no other
// network surface, and at most one query request is in flight: submitting a
// new one aborts the previous.

export interface DatasetInfo {
  id: string;
  name: string;
  collectionCount: number;
  models: string[];
}

export interface SchemaGraph {
  objects: { id: string; kind: "entity" | "primitive" }[];
  morphisms: { id: string; domain: string; codomain: string; cardinality: string }[];
}

export interface ExampleQuery {
  title: string;
  query: string;
}

export interface TablePayload {
  columns: string[];
  rows: string[][];
  csv: string;
}

export interface GraphPayload {
  vertices: ({ id: string } & Record<string, unknown>)[];
  edges: [string, string][];
}

export interface RenderedPayloads {
  model: string;
  relational: TablePayload | null;
  xml: string | null;
  graph: GraphPayload | null;
  term: string | null;
}

export interface PlanStage {
  source: string;
  binds: string | null;
  combiner: string;
  combinerAst: unknown;
}

export interface Diagnostic {
  kind: string;
  message: string;
  line: number;
  column: number;
}

export interface QueryResponse {
  status: "ok" | "error";
  model: string | null;
  rendered: RenderedPayloads | null;
  plan: { stages: PlanStage[] } | null;
  diagnostics: Diagnostic | null;
}

export class ApiClient {
  private inflight: AbortController | null = null;

  constructor(readonly baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new Error(`GET ${path} failed: ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.getJson("/datasets");
  }

  schema(datasetId: string): Promise<SchemaGraph> {
    return this.getJson(`/datasets/${datasetId}/schema`);
  }

  examples(datasetId: string): Promise<ExampleQuery[]> {
    return this.getJson(`/datasets/${datasetId}/examples`);
  }

  async runQuery(datasetId: string, query: string): Promise<QueryResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const resp = await this.fetchFn(`${this.baseUrl}/datasets/${datasetId}/query`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ query }),
        signal: controller.signal,
      });
      if (!resp.ok) {
        throw new Error(`query failed: ${resp.status}`);
      }
      return (await resp.json()) as QueryResponse;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }
}
