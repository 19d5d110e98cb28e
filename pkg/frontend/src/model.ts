// Build a renderable tree from the served model document. Success-condition
// names are qualified as "<component>/<condition>" to match the identities
// used by the propagation and path-set payloads. A {"ref": name} entry
// resolves to the definition found elsewhere in the document and is marked,
// so shared nodes highlight in every place they appear.

import {
  ComponentDoc,
  FunctionDoc,
  GateLabel,
  ModelDocument,
  NodeKindLabel,
  SubfunctionDoc,
  TreeNode,
} from "./types.js";

export function nodeKey(kind: NodeKindLabel, name: string): string {
  return `${kind}:${name}`;
}

interface Defs {
  functions: Map<string, FunctionDoc>;
  subfunctions: Map<string, SubfunctionDoc>;
  components: Map<string, ComponentDoc>;
}

function collect(doc: ModelDocument): Defs {
  const defs: Defs = {
    functions: new Map(),
    subfunctions: new Map(),
    components: new Map(),
  };
  for (const f of doc.Goal.achieved_by?.functions ?? []) {
    if (f.name) defs.functions.set(f.name, f);
    for (const sf of f.depends_on?.subfunctions ?? []) {
      if (sf.name) defs.subfunctions.set(sf.name, sf);
      for (const c of sf.requires?.components ?? []) {
        if (c.name) defs.components.set(c.name, c);
      }
    }
  }
  return defs;
}

function componentNode(doc: ComponentDoc, defs: Defs, isRef = false): TreeNode {
  if (doc.ref !== undefined) {
    const definition = defs.components.get(doc.ref);
    if (definition) return componentNode(definition, defs, true);
    return {
      key: nodeKey("Component", doc.ref),
      name: doc.ref,
      label: doc.ref,
      kind: "Component",
      gate: null,
      children: [],
      isRef: true,
    };
  }
  const name = doc.name ?? "";
  const gate: GateLabel | null = doc.success_through?.gate ?? null;
  const children: TreeNode[] = (doc.success_through?.success_conditions ?? []).map(
    (condition) => {
      const qualified = `${name}/${condition.name}`;
      return {
        key: nodeKey("SuccessCondition", qualified),
        name: qualified,
        label: condition.name,
        kind: "SuccessCondition" as const,
        gate: null,
        children: [],
      };
    },
  );
  return {
    key: nodeKey("Component", name),
    name,
    label: name,
    kind: "Component",
    gate,
    children,
    states: doc.states,
    isRef,
  };
}

function subfunctionNode(doc: SubfunctionDoc, defs: Defs, isRef = false): TreeNode {
  if (doc.ref !== undefined) {
    const definition = defs.subfunctions.get(doc.ref);
    if (definition) return subfunctionNode(definition, defs, true);
  }
  const name = doc.name ?? doc.ref ?? "";
  return {
    key: nodeKey("Subfunction", name),
    name,
    label: name,
    kind: "Subfunction",
    gate: doc.requires?.gate ?? null,
    children: (doc.requires?.components ?? []).map((c) => componentNode(c, defs)),
    isRef,
  };
}

function functionNode(doc: FunctionDoc, defs: Defs, isRef = false): TreeNode {
  if (doc.ref !== undefined) {
    const definition = defs.functions.get(doc.ref);
    if (definition) return functionNode(definition, defs, true);
  }
  const name = doc.name ?? doc.ref ?? "";
  return {
    key: nodeKey("Function", name),
    name,
    label: name,
    kind: "Function",
    gate: doc.depends_on?.gate ?? null,
    children: (doc.depends_on?.subfunctions ?? []).map((sf) =>
      subfunctionNode(sf, defs),
    ),
    isRef,
  };
}

export function buildTree(doc: ModelDocument): TreeNode {
  const defs = collect(doc);
  return {
    key: nodeKey("Goal", doc.Goal.name),
    name: doc.Goal.name,
    label: doc.Goal.name,
    kind: "Goal",
    gate: doc.Goal.achieved_by?.gate ?? null,
    children: (doc.Goal.achieved_by?.functions ?? []).map((f) =>
      functionNode(f, defs),
    ),
  };
}

export function walk(node: TreeNode, visit: (node: TreeNode) => void): void {
  visit(node);
  for (const child of node.children) walk(child, visit);
}

/** Leaf identity map: qualified leaf name -> node key (conditions, plus
 * condition-less components, which stand for themselves in path-sets). */
export function leafKeysByName(root: TreeNode): Map<string, string> {
  const map = new Map<string, string>();
  walk(root, (node) => {
    if (node.kind === "SuccessCondition") map.set(node.name, node.key);
    if (node.kind === "Component" && node.children.length === 0) {
      map.set(node.name, node.key);
    }
  });
  return map;
}

export function isLeaf(node: TreeNode): boolean {
  return (
    node.kind === "SuccessCondition" ||
    (node.kind === "Component" && node.children.length === 0)
  );
}
