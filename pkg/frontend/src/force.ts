// Small deterministic force-directed layout: pairwise repulsion, spring
// attraction along edges, and a centering pull, run for a fixed number of
// iterations. Initial positions are seeded from node ids so the same graph
// always lays out the same way.

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  springLength?: number;
}

function hash(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return (h >>> 0) / 4294967296;
}

export function layout(
  ids: string[],
  edges: [string, string][],
  opts: LayoutOptions,
): LayoutNode[] {
  const { width, height } = opts;
  const iterations = opts.iterations ?? 150;
  const spring = opts.springLength ?? Math.min(width, height) / 4;
  const nodes: LayoutNode[] = ids.map((id) => ({
    id,
    x: width * (0.15 + 0.7 * hash(id)),
    y: height * (0.15 + 0.7 * hash(id + "#y")),
  }));
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  const links = edges
    .filter(([s, d]) => index.has(s) && index.has(d) && s !== d)
    .map(([s, d]) => [index.get(s)!, index.get(d)!] as [number, number]);

  const repulsion = spring * spring;
  for (let iter = 0; iter < iterations; iter++) {
    const step = 0.08 * (1 - iter / iterations) + 0.01;
    const fx = new Array(nodes.length).fill(0);
    const fy = new Array(nodes.length).fill(0);
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        let dx = nodes[i].x - nodes[j].x;
        let dy = nodes[i].y - nodes[j].y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          dx = 0.1 * (hash(`${i}:${j}`) - 0.5);
          dy = 0.1;
          d2 = dx * dx + dy * dy;
        }
        const f = repulsion / d2;
        fx[i] += dx * f;
        fy[i] += dy * f;
        fx[j] -= dx * f;
        fy[j] -= dy * f;
      }
    }
    for (const [a, b] of links) {
      const dx = nodes[b].x - nodes[a].x;
      const dy = nodes[b].y - nodes[a].y;
      const dist = Math.sqrt(dx * dx + dy * dy) || 1;
      const f = (dist - spring) / dist;
      fx[a] += dx * f;
      fy[a] += dy * f;
      fx[b] -= dx * f;
      fy[b] -= dy * f;
    }
    for (let i = 0; i < nodes.length; i++) {
      fx[i] += (width / 2 - nodes[i].x) * 0.02;
      fy[i] += (height / 2 - nodes[i].y) * 0.02;
      nodes[i].x += fx[i] * step;
      nodes[i].y += fy[i] * step;
      nodes[i].x = Math.min(width - 20, Math.max(20, nodes[i].x));
      nodes[i].y = Math.min(height - 20, Math.max(20, nodes[i].y));
    }
  }
  return nodes;
}
