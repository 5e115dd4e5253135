/** Shapes of the supervision API payloads the console consumes. */

export type EdgeId = [string, string];

export interface Finding {
  severity: string;
  branch: string;
  location: string;
  message: string;
  code: string;
}

export interface ValidationView {
  ok: boolean;
  findings: Finding[];
}

export interface EdgeView {
  src: string;
  op: string;
  dst: string;
  cost: number;
  pruned: boolean;
  risky: boolean;
}

export interface GraphView {
  branch: string;
  nodes: string[];
  edges: EdgeView[];
}

export interface FullView {
  branch: string;
  document: Record<string, unknown>;
  graph: GraphView;
  validation: ValidationView;
  dot: string;
}

export interface SceneView {
  branch: string;
  values: (string | null)[];
  as_of: number;
}

export interface Proposal {
  id: string;
  edge: EdgeId;
  proposed_at: number;
  proposed_by: string;
  decided: string | null;
  decided_by: string | null;
  decided_at: number | null;
}

export interface OutEdge {
  op: string;
  target: string;
  cost: number;
  pruned: boolean;
  risky: boolean;
}

export interface AlarmView {
  kind: string;
  previous: string | null;
  new: string | null;
  dispatched: EdgeId | null;
}

export interface PartialView {
  session: string;
  branch: string;
  mode: string;
  current: string;
  degraded: boolean;
  scene: SceneView | null;
  stale_facts: number[];
  estimate_state: string | null;
  out_edges: OutEdge[];
  in_edges: EdgeView[] | null;
  pending: Proposal | null;
  flags: Record<string, boolean>;
  alarms: AlarmView[];
  awaiting_confirmation: string[];
  prediction: string | null;
}

export interface SessionSummary {
  session: string;
  branch: string;
  mode: string;
  current: string;
  degraded: boolean;
}

export interface CreateSessionRequest {
  branch: string;
  mode?: string;
  initial?: string;
}

export interface StepOutcome {
  ok: boolean;
  current: string;
  estimate_state: string | null;
  error: string | null;
}

export interface ProposeResponse {
  proposal: Proposal;
  current: string;
  step: StepOutcome | null;
}

export interface DecideResponse {
  proposal: Proposal;
  current: string;
  step: StepOutcome | null;
}

export interface RiskyResponse {
  edge: EdgeId;
  risky: boolean;
  pruned: boolean;
}

export interface FlagResponse {
  flags: Record<string, boolean>;
  mode: string;
}

export interface ConfirmResponse {
  token: string;
  confirmed: boolean;
}

/** One line from the session event stream, already JSON-decoded. */
export interface SessionEvent {
  ts: number;
  session: string;
  kind: string;
  payload: Record<string, unknown>;
}
