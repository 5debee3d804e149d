// Banded layout for the cognitive map: customers on the top row, problem
// layers ordered by their longest path up to a customer, features below
// them, and the product at the bottom. No general graph-layout engine.

import type { MapEdge, MapNode, MapPayload } from "./types.js";

export interface PlacedNode {
  node: MapNode;
  x: number;
  y: number;
  band: number;
}

export interface PlacedEdge {
  edge: MapEdge;
  from: PlacedNode;
  to: PlacedNode;
  label: string | null;
}

export interface MapLayout {
  bands: MapNode[][];
  nodes: PlacedNode[];
  edges: PlacedEdge[];
  width: number;
  height: number;
  bandHeight: number;
}

function idOrder(a: { id: string }, b: { id: string }): number {
  const parse = (s: string) => {
    const match = /^([a-z]+)(\d+)$/.exec(s);
    return match ? [match[1], Number(match[2])] as const : [s, -1] as const;
  };
  const [ap, an] = parse(a.id);
  const [bp, bn] = parse(b.id);
  if (ap !== bp) return ap < bp ? -1 : 1;
  return an - bn;
}

/** Longest directed path from each problem up to any customer. */
function problemRanks(map: MapPayload): Map<string, number> {
  const kinds = new Map(map.nodes.map((n) => [n.id, n.kind]));
  const outgoing = new Map<string, string[]>();
  for (const edge of map.edges) {
    const list = outgoing.get(edge.source) ?? [];
    list.push(edge.target);
    outgoing.set(edge.source, list);
  }
  const memo = new Map<string, number>();
  const visiting = new Set<string>();
  const depth = (id: string): number => {
    if (kinds.get(id) === "customer") return 0;
    const known = memo.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) return 0; // defensive: cycles never rank
    visiting.add(id);
    let best = 0;
    for (const next of outgoing.get(id) ?? []) {
      best = Math.max(best, 1 + depth(next));
    }
    visiting.delete(id);
    memo.set(id, best);
    return best;
  };
  const ranks = new Map<string, number>();
  for (const node of map.nodes) {
    if (node.kind === "problem") ranks.set(node.id, Math.max(1, depth(node.id)));
  }
  return ranks;
}

export function layoutMap(map: MapPayload, width = 760, bandHeight = 110): MapLayout {
  const customers = map.nodes.filter((n) => n.kind === "customer").sort(idOrder);
  const features = map.nodes.filter((n) => n.kind === "feature").sort(idOrder);
  const products = map.nodes.filter((n) => n.kind === "product").sort(idOrder);
  const ranks = problemRanks(map);

  const bands: MapNode[][] = [];
  if (customers.length) bands.push(customers);
  const maxRank = Math.max(0, ...ranks.values());
  for (let rank = 1; rank <= maxRank; rank++) {
    const layer = map.nodes
      .filter((n) => n.kind === "problem" && ranks.get(n.id) === rank)
      .sort(idOrder);
    if (layer.length) bands.push(layer);
  }
  if (features.length) bands.push(features);
  if (products.length) bands.push(products);

  const placed = new Map<string, PlacedNode>();
  const nodes: PlacedNode[] = [];
  bands.forEach((band, bandIndex) => {
    band.forEach((node, i) => {
      const spot: PlacedNode = {
        node,
        band: bandIndex,
        x: (width * (i + 1)) / (band.length + 1),
        y: bandHeight * bandIndex + bandHeight / 2,
      };
      placed.set(node.id, spot);
      nodes.push(spot);
    });
  });

  const edges: PlacedEdge[] = [...map.edges].sort(idOrder).flatMap((edge) => {
    const from = placed.get(edge.source);
    const to = placed.get(edge.target);
    if (!from || !to) return [];
    return [{ edge, from, to, label: edge.polarity ?? null }];
  });

  return {
    bands,
    nodes,
    edges,
    width,
    height: Math.max(bands.length, 1) * bandHeight,
    bandHeight,
  };
}
