// Console state machine. All numbers come from service responses; the only
// client-side math is the sum-to-one form check that mirrors the server's
// evidence rule. Every mutation round-trips through the service revision
// counter and propagation responses belonging to an older revision are
// discarded, so the view always converges to the server's state.

import { ConsoleApi } from "./api.js";
import { buildTree, isLeaf, leafKeysByName, nodeKey, walk } from "./model.js";
import {
  NodeKindLabel,
  PathsetsPayload,
  PropagationRow,
  ServiceError,
  TreeNode,
} from "./types.js";

export const SUM_TOLERANCE = 1e-6;

export function distributionSumOk(dist: Record<string, number>): boolean {
  let total = 0;
  for (const value of Object.values(dist)) {
    if (!Number.isFinite(value) || value < 0 || value > 1) return false;
    total += value;
  }
  return Math.abs(total - 1.0) <= SUM_TOLERANCE;
}

export interface PathsetPanel {
  target: string;
  payload: PathsetsPayload | null;
  error: string | null;
}

export class ConsoleStore {
  tree: TreeNode | null = null;
  rows = new Map<string, PropagationRow>(); // keyed by `${kind}:${name}`
  revision = 0;
  resultRevision = -1; // revision the current rows belong to
  selectedKey: string | null = null;
  panel: PathsetPanel | null = null;
  highlightedLeaves = new Set<string>();
  banner: string | null = null; // connectivity problems
  fieldError: string | null = null; // inline evidence-editor error
  onChange: () => void = () => {};

  private leafKeys = new Map<string, string>();

  constructor(private api: ConsoleApi) {}

  private notify(): void {
    this.onChange();
  }

  get hasFreshResult(): boolean {
    return this.resultRevision === this.revision && this.rows.size > 0;
  }

  rowFor(node: TreeNode): PropagationRow | undefined {
    return this.hasFreshResult ? this.rows.get(node.key) : undefined;
  }

  isImpacted(node: TreeNode): boolean {
    return this.rowFor(node)?.impacted ?? false;
  }

  impactedKeys(): Set<string> {
    const keys = new Set<string>();
    if (!this.hasFreshResult) return keys;
    for (const [key, row] of this.rows) if (row.impacted) keys.add(key);
    return keys;
  }

  selectedNode(): TreeNode | null {
    if (!this.tree || this.selectedKey === null) return null;
    let found: TreeNode | null = null;
    walk(this.tree, (node) => {
      if (node.key === this.selectedKey && found === null) found = node;
    });
    return found;
  }

  async loadModel(): Promise<void> {
    try {
      const doc = await this.api.getModel();
      this.tree = buildTree(doc);
      this.leafKeys = leafKeysByName(this.tree);
      this.banner = null;
      this.rows.clear();
      this.resultRevision = -1;
      this.panel = null;
      this.highlightedLeaves.clear();
      this.notify();
      await this.refresh();
    } catch (error) {
      this.banner = this.describe(error, "cannot reach the service");
      this.notify();
    }
  }

  /** One propagation round-trip; stale responses are dropped. */
  async refresh(): Promise<void> {
    const requestedAt = this.revision;
    try {
      const rows = await this.api.propagate();
      if (requestedAt !== this.revision) return; // a newer edit won
      this.rows = new Map(
        rows.map((row) => [nodeKey(row.kind as NodeKindLabel, row.name), row]),
      );
      this.resultRevision = requestedAt;
      this.banner = null;
    } catch (error) {
      this.banner = this.describe(error, "propagation failed");
    }
    this.notify();
  }

  /** Shared by the failure preset and the manual editor: one PUT + one propagate. */
  async applyEvidence(
    component: string,
    distribution: Record<string, number>,
  ): Promise<boolean> {
    if (!distributionSumOk(distribution)) {
      this.fieldError = "state probabilities must each lie in [0,1] and sum to 1";
      this.notify();
      return false;
    }
    this.fieldError = null;
    try {
      const { revision } = await this.api.putEvidence({ [component]: distribution });
      this.revision = revision;
    } catch (error) {
      this.fieldError = this.describe(error, "evidence rejected");
      this.notify();
      return false;
    }
    await this.refresh();
    return true;
  }

  /** One-click preset: the failed state takes the whole distribution. */
  async markFailed(component: string): Promise<boolean> {
    const node = this.findComponent(component);
    const states = node?.states?.map((s) => s.name) ?? [];
    if (!states.includes("failed")) {
      this.fieldError = `${component} has no "failed" state`;
      this.notify();
      return false;
    }
    const distribution: Record<string, number> = {};
    for (const state of states) distribution[state] = state === "failed" ? 1.0 : 0.0;
    return this.applyEvidence(component, distribution);
  }

  async resetEvidence(): Promise<void> {
    try {
      const { revision } = await this.api.deleteEvidence();
      this.revision = revision;
      this.fieldError = null;
    } catch (error) {
      this.banner = this.describe(error, "reset failed");
      this.notify();
      return;
    }
    await this.refresh();
  }

  async explorePathsets(target: string): Promise<void> {
    const node = this.findByName(target);
    if (node && isLeaf(node)) return; // control is disabled for leaves
    this.panel = { target, payload: null, error: null };
    this.notify();
    try {
      const payload = await this.api.pathsets(target);
      if (this.panel?.target !== target) return;
      this.panel = { target, payload, error: null };
    } catch (error) {
      if (this.panel?.target !== target) return;
      this.panel = { target, payload: null, error: this.describe(error, "failed") };
    }
    this.highlightedLeaves.clear();
    this.notify();
  }

  /** Clicking a listed path-set lights its leaves up in the hierarchy. */
  selectPathset(index: number): void {
    const sets = this.panel?.payload?.pathsets ?? [];
    const chosen = sets[index];
    this.highlightedLeaves = new Set(
      (chosen ?? [])
        .map((leafName) => this.leafKeys.get(leafName))
        .filter((key): key is string => key !== undefined),
    );
    this.notify();
  }

  select(key: string | null): void {
    this.selectedKey = key;
    this.fieldError = null;
    this.notify();
  }

  findComponent(name: string): TreeNode | null {
    if (!this.tree) return null;
    let found: TreeNode | null = null;
    walk(this.tree, (node) => {
      if (node.kind === "Component" && node.name === name && found === null) {
        found = node;
      }
    });
    return found;
  }

  findByName(name: string): TreeNode | null {
    if (!this.tree) return null;
    let found: TreeNode | null = null;
    walk(this.tree, (node) => {
      if (node.name === name && found === null) found = node;
    });
    return found;
  }

  private describe(error: unknown, fallback: string): string {
    if (error instanceof ServiceError) {
      return `${error.envelope.code}: ${error.envelope.message}`;
    }
    if (error instanceof Error && error.message) return error.message;
    return fallback;
  }
}
