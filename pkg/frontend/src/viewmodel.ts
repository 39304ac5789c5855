// Payload-to-display projections. The console is a pure presentation layer:
// every string a view shows is a field of the HTTP response, passed through
// untouched. Tests assert byte equality between these projections and the
// payloads they came from.

import type { Diagnostic, GraphPayload, PlanStage, SchemaGraph, TablePayload } from "./api.js";

export interface TableView {
  columns: string[];
  rows: string[][];
}

export function tableView(payload: TablePayload): TableView {
  return { columns: payload.columns, rows: payload.rows };
}

/** The tree tab's source text: the XML document exactly as served. */
export function treeText(xml: string): string {
  return xml;
}

export function termText(term: string): string {
  return term;
}

export interface GraphNodeView {
  id: string;
  label: string;
  props: [string, string][];
}

export function graphNodes(payload: GraphPayload): GraphNodeView[] {
  return payload.vertices.map((v) => ({
    id: v.id,
    label: v.id,
    props: Object.entries(v)
      .filter(([k]) => k !== "id")
      .map(([k, val]) => [k, String(val)] as [string, string]),
  }));
}

export interface PlanStageView {
  source: string;
  binds: string | null;
  combiner: string;
}

export function planStages(stages: PlanStage[]): PlanStageView[] {
  return stages.map((s) => ({ source: s.source, binds: s.binds, combiner: s.combiner }));
}

/** 0-based character offset of a 1-based line/column diagnostic position. */
export function markerOffset(text: string, line: number, column: number): number {
  const lines = text.split("\n");
  const row = Math.min(Math.max(line, 1), lines.length) - 1;
  let offset = 0;
  for (let i = 0; i < row; i++) {
    offset += lines[i].length + 1;
  }
  return offset + Math.min(Math.max(column, 1) - 1, lines[row].length);
}

export function diagnosticLabel(d: Diagnostic): string {
  return `${d.kind} error at ${d.line}:${d.column}: ${d.message}`;
}

/** Outgoing morphisms of one schema object (attributes and relationships),
 * for the click-a-node side panel of the explorer. */
export function objectAttributes(schema: SchemaGraph, objectId: string): string[] {
  return schema.morphisms
    .filter((m) => m.domain === objectId)
    .map((m) => {
      const target = m.cardinality === "many" ? `[${m.codomain}]` : m.codomain;
      return `${m.id} : ${target}`;
    });
}
