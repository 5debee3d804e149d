import { describe, expect, it } from "vitest";

import { layoutMap } from "../src/layout.js";
import type { MapPayload } from "../src/types.js";
import { golden } from "./stub.js";

const finalMap = golden.turns[golden.turns.length - 1].response.map;

function refinedMap(): MapPayload {
  // as if "waiting time at the curb" had been inserted on the f1 -> b1 edge
  const map: MapPayload = JSON.parse(JSON.stringify(finalMap));
  map.edges = map.edges.filter((e) => e.id !== "e4");
  map.nodes.push({ id: "b3", kind: "problem", clause_text: "waiting time at the curb",
                   clause_kind: "difficulty", clause_form: "np" });
  map.edges.push({ id: "e7", kind: "value", source: "f1", target: "b3", polarity: "-" });
  map.edges.push({ id: "e8", kind: "value", source: "b3", target: "b1", polarity: "-" });
  return map;
}

describe("banded layout", () => {
  it("places the golden map into four bands, customers on top", () => {
    const layout = layoutMap(finalMap);
    expect(layout.bands).toHaveLength(4);
    expect(layout.bands[0].map((n) => n.id)).toEqual(["c1"]);
    expect(layout.bands[1].map((n) => n.id)).toEqual(["b1", "b2"]);
    expect(layout.bands[2].map((n) => n.id)).toEqual(["f1", "f2"]);
    expect(layout.bands[3].map((n) => n.id)).toEqual(["p1"]);
  });

  it("puts refinement concepts into their own band between features and problems", () => {
    const layout = layoutMap(refinedMap());
    expect(layout.bands).toHaveLength(5);
    expect(layout.bands[1].map((n) => n.id)).toEqual(["b1", "b2"]);
    expect(layout.bands[2].map((n) => n.id)).toEqual(["b3"]);
    expect(layout.bands[3].map((n) => n.id)).toEqual(["f1", "f2"]);
  });

  it("assigns increasing y per band and spreads x within a band", () => {
    const layout = layoutMap(finalMap);
    const byId = new Map(layout.nodes.map((p) => [p.node.id, p]));
    expect(byId.get("c1")!.y).toBeLessThan(byId.get("b1")!.y);
    expect(byId.get("b1")!.y).toBeLessThan(byId.get("f1")!.y);
    expect(byId.get("f1")!.y).toBeLessThan(byId.get("p1")!.y);
    expect(byId.get("b1")!.x).toBeLessThan(byId.get("b2")!.x);
    for (const placed of layout.nodes) {
      expect(placed.x).toBeGreaterThan(0);
      expect(placed.x).toBeLessThan(layout.width);
      expect(placed.y).toBeGreaterThan(0);
      expect(placed.y).toBeLessThan(layout.height);
    }
  });

  it("keeps stored edge direction and labels value edges only", () => {
    const layout = layoutMap(finalMap);
    const labeled = layout.edges.filter((e) => e.label !== null);
    expect(labeled.map((e) => e.edge.id).sort()).toEqual(["e4", "e6"]);
    expect(labeled.every((e) => e.label === "-")).toBe(true);
    const problemLink = layout.edges.find((e) => e.edge.id === "e1")!;
    expect(problemLink.from.node.id).toBe("b1");
    expect(problemLink.to.node.id).toBe("c1");
  });

  it("handles the empty map", () => {
    const layout = layoutMap({ product: null, nodes: [], edges: [] });
    expect(layout.bands).toHaveLength(0);
    expect(layout.nodes).toHaveLength(0);
    expect(layout.edges).toHaveLength(0);
  });
});
