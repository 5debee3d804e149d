// Mirrors of the service's JSON shapes.

export type NodeKind = "product" | "customer" | "problem" | "feature";
export type EdgeKind = "feasibility" | "value" | "problem_link";
export type PolarityLabel = "+" | "-" | "/o/";

export interface MapNode {
  id: string;
  kind: NodeKind;
  clause_text: string;
  clause_kind?: "desire" | "difficulty";
  clause_form?: "vp" | "np";
}

export interface MapEdge {
  id: string;
  kind: EdgeKind;
  source: string;
  target: string;
  polarity?: PolarityLabel;
}

export interface MapPayload {
  product: string | null;
  nodes: MapNode[];
  edges: MapEdge[];
}

export interface HypothesisPayload {
  kind: "feasibility" | "value" | "problem";
  statement: string;
  edge: string;
}

export interface TurnPayload {
  replies: string[];
  state: string;
  map: MapPayload;
  hypotheses: HypothesisPayload[] | null;
  done: boolean;
}

export interface CreateSessionPayload {
  session_id: string;
  greeting: string[];
  state: string;
}

export interface TranscriptEntry {
  speaker: "user" | "bot";
  text: string;
  turn: number;
}

export interface SessionSnapshot {
  session_id: string;
  state: string;
  done: boolean;
  transcript: TranscriptEntry[];
}

export interface ChatMessage {
  speaker: "user" | "bot" | "notice";
  text: string;
}

/** The display label mirrors the server's drawing convention for problems. */
export function displayLabel(node: MapNode): string {
  if (node.kind !== "problem") return node.clause_text;
  if (node.clause_kind === "difficulty") {
    return node.clause_form === "vp" ? `difficulty to ${node.clause_text}` : node.clause_text;
  }
  return node.clause_form === "vp"
    ? `desire to ${node.clause_text}`
    : `desire for ${node.clause_text}`;
}
