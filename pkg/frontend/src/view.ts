// DOM rendering. The view is a pure function of the store; every event
// handler calls back into the store and the store notifies a re-render.

import { isLeaf } from "./model.js";
import { ConsoleStore } from "./store.js";
import { TreeNode } from "./types.js";

const GATE_GLYPH = { AND_gate: "∧ AND", OR_gate: "∨ OR" } as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderNode(store: ConsoleStore, node: TreeNode): HTMLElement {
  const li = el("li");
  const row = el("div", `node tier-${node.kind.toLowerCase()}`);
  if (store.isImpacted(node)) row.classList.add("impacted");
  if (store.highlightedLeaves.has(node.key)) row.classList.add("path-highlight");
  if (node.key === store.selectedKey) row.classList.add("selected");

  const label = el("span", "label", node.label);
  row.appendChild(label);
  if (node.isRef) row.appendChild(el("span", "ref-badge", "shared"));

  const outcome = store.rowFor(node);
  if (outcome) {
    row.appendChild(
      el("span", "probability", outcome.p_success.toFixed(4)),
    );
  }
  row.addEventListener("click", (event) => {
    event.stopPropagation();
    store.select(node.key === store.selectedKey ? null : node.key);
  });
  li.appendChild(row);

  if (node.children.length > 0) {
    if (node.gate) {
      li.appendChild(el("div", `gate gate-${node.gate}`, GATE_GLYPH[node.gate]));
    }
    const ul = el("ul", "children");
    for (const child of node.children) ul.appendChild(renderNode(store, child));
    li.appendChild(ul);
  }
  return li;
}

function renderDetail(store: ConsoleStore, panel: HTMLElement): void {
  panel.replaceChildren();
  const node = store.selectedNode();
  if (!node) {
    panel.appendChild(el("p", "hint", "Select a node to inspect it."));
    return;
  }
  panel.appendChild(el("h3", undefined, node.label));
  panel.appendChild(el("p", "kind-line", node.kind));
  const outcome = store.rowFor(node);
  if (outcome) {
    panel.appendChild(
      el(
        "p",
        outcome.impacted ? "impact-line impacted" : "impact-line",
        `p(success) = ${outcome.p_success.toPrecision(6)}` +
          (outcome.impacted ? " — impacted" : ""),
      ),
    );
  }

  if (node.kind === "Component" && node.states && node.states.length > 0) {
    const form = el("div", "evidence-form");
    form.appendChild(el("h4", undefined, "State evidence"));
    const inputs = new Map<string, HTMLInputElement>();
    for (const state of node.states) {
      const rowEl = el("label", "state-row");
      rowEl.appendChild(el("span", undefined, state.name));
      const input = el("input") as HTMLInputElement;
      input.type = "number";
      input.min = "0";
      input.max = "1";
      input.step = "0.01";
      input.value = String(state.prior);
      inputs.set(state.name, input);
      rowEl.appendChild(input);
      form.appendChild(rowEl);
    }
    const buttons = el("div", "buttons");
    const markFailed = el("button", "danger", "mark failed");
    markFailed.disabled = !node.states.some((s) => s.name === "failed");
    markFailed.addEventListener("click", () => void store.markFailed(node.name));
    const apply = el("button", "primary", "apply distribution");
    apply.addEventListener("click", () => {
      const distribution: Record<string, number> = {};
      for (const [state, input] of inputs) distribution[state] = Number(input.value);
      void store.applyEvidence(node.name, distribution);
    });
    buttons.append(markFailed, apply);
    form.appendChild(buttons);
    if (store.fieldError) {
      form.appendChild(el("p", "field-error", store.fieldError));
    }
    panel.appendChild(form);
  }

  const actions = el("div", "buttons");
  const explore = el("button", undefined, "success paths");
  explore.disabled = isLeaf(node);
  explore.addEventListener("click", () => void store.explorePathsets(node.name));
  actions.appendChild(explore);
  panel.appendChild(actions);
}

function renderPathsets(store: ConsoleStore, panel: HTMLElement): void {
  panel.replaceChildren();
  if (!store.panel) {
    panel.appendChild(el("p", "hint", "Pick a node and ask for its success paths."));
    return;
  }
  panel.appendChild(el("h3", undefined, `Success paths: ${store.panel.target}`));
  if (store.panel.error) {
    panel.appendChild(el("p", "field-error", store.panel.error));
    return;
  }
  const payload = store.panel.payload;
  if (!payload) {
    panel.appendChild(el("p", "hint", "loading…"));
    return;
  }
  panel.appendChild(
    el(
      "p",
      "kind-line",
      `${payload.count} minimal path-set${payload.count === 1 ? "" : "s"}`,
    ),
  );
  const list = el("ol", "pathset-list");
  payload.pathsets.forEach((pathset, index) => {
    const item = el("li", "pathset");
    const head = el(
      "button",
      "pathset-head",
      `path ${index + 1} — ${pathset.length} leaves`,
    );
    head.addEventListener("click", () => store.selectPathset(index));
    item.appendChild(head);
    const leaves = el("ul", "leaves");
    for (const leaf of pathset) leaves.appendChild(el("li", undefined, leaf));
    item.appendChild(leaves);
    list.appendChild(item);
  });
  panel.appendChild(list);
}

export function mount(store: ConsoleStore, root: HTMLElement): void {
  const banner = el("div", "banner hidden");
  const layout = el("div", "layout");
  const treePane = el("div", "tree-pane");
  const side = el("div", "side-pane");
  const detail = el("section", "detail-panel");
  const pathsets = el("section", "pathsets-panel");
  const toolbar = el("div", "toolbar");

  const title = el("span", "title", "DML diagnostic console");
  const reset = el("button", undefined, "reset evidence");
  reset.addEventListener("click", () => void store.resetEvidence());
  const reload = el("button", undefined, "reload model");
  reload.addEventListener("click", () => void store.loadModel());
  toolbar.append(title, reset, reload);

  side.append(detail, pathsets);
  layout.append(treePane, side);
  root.append(toolbar, banner, layout);

  store.onChange = () => {
    if (store.banner) {
      banner.textContent = "";
      banner.classList.remove("hidden");
      banner.appendChild(el("span", undefined, store.banner));
      const retry = el("button", undefined, "retry");
      retry.addEventListener("click", () => void store.loadModel());
      banner.appendChild(retry);
    } else {
      banner.classList.add("hidden");
    }

    treePane.replaceChildren();
    if (store.tree) {
      const ul = el("ul", "tree-root");
      ul.appendChild(renderNode(store, store.tree));
      treePane.appendChild(ul);
    } else if (!store.banner) {
      treePane.appendChild(
        el("p", "hint", "No model loaded — POST one to /model or preload via config."),
      );
    }
    renderDetail(store, detail);
    renderPathsets(store, pathsets);
  };
  store.onChange();
}
