// Wire types mirroring the engine service's JSON payloads.

export type GateLabel = "AND_gate" | "OR_gate";

export interface StateDoc {
  name: string;
  prior: number;
}

export interface ConditionDoc {
  name: string;
  given_state: Record<string, number>;
}

export interface ComponentDoc {
  name?: string;
  ref?: string;
  states?: StateDoc[];
  success_through?: { gate: GateLabel; success_conditions: ConditionDoc[] };
  direct_p_success?: number;
}

export interface SubfunctionDoc {
  name?: string;
  ref?: string;
  requires?: { gate: GateLabel; components: ComponentDoc[] };
}

export interface FunctionDoc {
  name?: string;
  ref?: string;
  depends_on?: { gate: GateLabel; subfunctions: SubfunctionDoc[] };
}

export interface GoalDoc {
  name: string;
  achieved_by?: { gate: GateLabel; functions: FunctionDoc[] };
}

export interface ModelDocument {
  Goal: GoalDoc;
}

export interface PropagationRow {
  name: string;
  kind: string;
  p_success: number;
  impacted: boolean;
}

export interface PathsetsPayload {
  source: string;
  minimized: boolean;
  count: number;
  truncated: boolean;
  pathsets: string[][];
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  path?: string;
}

export type NodeKindLabel =
  | "Goal"
  | "Function"
  | "Subfunction"
  | "Component"
  | "SuccessCondition";

export interface TreeNode {
  key: string; // `${kind}:${name}` — matches propagation row identity
  name: string; // qualified name for success conditions
  label: string; // short display label
  kind: NodeKindLabel;
  gate: GateLabel | null; // gate below this node, if it branches
  children: TreeNode[];
  states?: StateDoc[];
  isRef?: boolean; // re-reference of a node defined elsewhere
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    public envelope: ErrorEnvelope,
  ) {
    super(envelope.message);
  }
}
