/** Wire types for the explanation service. Field names follow the JSON
 * bodies exactly; everything here is read-only from the UI's point of view. */

export interface Scene {
  id: string;
  frame_range: [number, number];
  caption?: string;
}

export type NodeKind = "and" | "or" | "terminal";

export interface PgNode {
  id: string;
  label: string;
  kind: NodeKind;
  scene: string;
  children: string[];
  score?: number;
  selected_child?: string;
  attributes?: Record<string, string>;
  region?: [number, number, number, number];
}

export interface Relation {
  from: string;
  to: string;
  rtype: string;
}

export interface DiscourseLink {
  a: string;
  b: string;
  relation: string;
  nucleus: string;
}

export interface PgDoc {
  scenes: Scene[];
  nodes: PgNode[];
  roots: Record<string, string>;
  relations: Relation[];
  discourse: DiscourseLink[];
}

export interface FactRef {
  kind: string;
  args: string[];
  required: boolean;
  note: string;
}

export interface EvidenceItem {
  kind: "node" | "fact" | "discourse" | "comparison";
  node?: string;
  score?: number;
  label?: string;
  fact?: FactRef;
  link?: { a: string; b: string; relation: string; nucleus: string };
  vs_label?: string;
  vs_score?: number;
}

export interface SlotMention {
  concept: string;
  count?: number;
  scene?: string;
  attribute?: { name: string; value: string };
}

export interface OntologyViolation {
  rule: string;
  concepts: string[];
  scene: string;
}

export interface DiscourseInconsistency {
  relation: string;
  scene: string;
  node: string;
  label: string;
}

export interface FeasibilityFlip {
  node: string;
  kind: string;
  before: boolean;
  after: boolean;
}

export interface Consequences {
  ontology: OntologyViolation[];
  discourse: DiscourseInconsistency[];
  feasibility: FeasibilityFlip[];
}

export interface AskResponse {
  question_type: string;
  slots: { x: SlotMention | null; y: SlotMention | null; x2: SlotMention | null };
  selected_type: string | null;
  text: string;
  evidence: EvidenceItem[];
  ranked_types: string[];
  attempts: { type: string; reason: string }[];
  consequences?: Consequences;
}

export interface QuestionForm {
  type: string;
  example: string;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export interface UnrecognizedDetail {
  cues: string[];
  forms: QuestionForm[];
}

export type OverlayMod =
  | { kind: "remove_node"; node: string }
  | { kind: "relabel_node"; node: string; label: string }
  | { kind: "set_attribute"; node: string; name: string; value: string }
  | { kind: "set_count"; label: string; scene: string; count: number };

export interface HistoryRow {
  text: string;
  question_type: string;
  selected_type: string | null;
  answer: string;
}

export interface SessionView {
  id: string;
  pg_id: string;
  history: HistoryRow[];
  overlay: OverlayMod[];
}
