"""Typed knowledge-graph core for DML success hierarchies.

A model is a DAG of five node tiers (Goal, Function, Subfunction, Component,
SuccessCondition) with an AND/OR gate interposed between every parent and its
children. Gates are real nodes, not edge attributes. Non-gate nodes are
identified by (kind, name); repeating a (kind, name) pair re-references the
existing node, which is how shared substructure (a component feeding two
subfunctions) is expressed.

Success-condition names are stored fully qualified as
``"<component name>/<condition name>"`` so that identically worded conditions
on different components stay distinct nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import QueryError

NodeId = int

PRIOR_SUM_TOL = 1e-6


class NodeKind(str, enum.Enum):
    GOAL = "Goal"
    FUNCTION = "Function"
    SUBFUNCTION = "Subfunction"
    COMPONENT = "Component"
    SUCCESS_CONDITION = "SuccessCondition"
    AND_GATE = "AND_gate"
    OR_GATE = "OR_gate"


class EdgeKind(str, enum.Enum):
    ACHIEVED_BY = "ACHIEVED_BY"
    DEPENDS_ON = "DEPENDS_ON"
    REQUIRES = "REQUIRES"
    SUCCESS_THROUGH = "SUCCESS_THROUGH"


GATE_KINDS = frozenset({NodeKind.AND_GATE, NodeKind.OR_GATE})

# Hierarchy level of each non-gate kind, goal at the top.
TIER = {
    NodeKind.GOAL: 0,
    NodeKind.FUNCTION: 1,
    NodeKind.SUBFUNCTION: 2,
    NodeKind.COMPONENT: 3,
    NodeKind.SUCCESS_CONDITION: 4,
}

# Edge kind expected between tier k and its child gate / between a gate and tier k+1.
EDGE_FOR_PARENT_TIER = {
    0: EdgeKind.ACHIEVED_BY,
    1: EdgeKind.DEPENDS_ON,
    2: EdgeKind.REQUIRES,
    3: EdgeKind.SUCCESS_THROUGH,
}
EDGE_FOR_CHILD_TIER = {
    1: EdgeKind.DEPENDS_ON,
    2: EdgeKind.REQUIRES,
    3: EdgeKind.REQUIRES,
    4: EdgeKind.SUCCESS_THROUGH,
}


@dataclass(frozen=True)
class ComponentData:
    """Per-component operational states and success-condition likelihoods.

    ``states`` is an ordered tuple of (state name, prior probability).
    ``condition_rows`` maps a success-condition node id to the vector
    P(condition holds | state_i), aligned with the state order.
    ``direct_p_success`` stands in for components with no conditions.
    """

    states: tuple[tuple[str, float], ...]
    condition_rows: dict[NodeId, tuple[float, ...]] = field(default_factory=dict)
    direct_p_success: float | None = None

    def __post_init__(self):
        if len(self.states) < 1:
            raise ValueError("component needs at least one state")
        names = [name for name, _ in self.states]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate state names: {names}")
        total = sum(prior for _, prior in self.states)
        if abs(total - 1.0) > PRIOR_SUM_TOL:
            raise ValueError(f"state priors sum to {total}, expected 1")
        for name, prior in self.states:
            if not 0.0 <= prior <= 1.0:
                raise ValueError(f"prior for state {name!r} out of [0,1]: {prior}")
        for cond, row in self.condition_rows.items():
            if len(row) != len(self.states):
                raise ValueError(
                    f"likelihood row for condition {cond} has length {len(row)}, "
                    f"expected {len(self.states)}"
                )
            if any(not 0.0 <= p <= 1.0 for p in row):
                raise ValueError(f"likelihood row for condition {cond} out of [0,1]: {row}")
        if self.direct_p_success is not None and not 0.0 <= self.direct_p_success <= 1.0:
            raise ValueError(f"direct_p_success out of [0,1]: {self.direct_p_success}")

    @property
    def state_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.states)

    @property
    def priors(self) -> dict[str, float]:
        return dict(self.states)


@dataclass(frozen=True)
class Node:
    id: NodeId
    kind: NodeKind
    name: str
    data: ComponentData | None = None

    @property
    def is_gate(self) -> bool:
        return self.kind in GATE_KINDS


@dataclass(frozen=True)
class Edge:
    source: NodeId
    kind: EdgeKind
    target: NodeId


@dataclass(frozen=True)
class ElementCounts:
    goals: int
    functions: int
    subfunctions: int
    components: int
    gates: int
    success_conditions: int

    @property
    def total(self) -> int:
        return (
            self.goals
            + self.functions
            + self.subfunctions
            + self.components
            + self.gates
            + self.success_conditions
        )

    def as_dict(self) -> dict:
        return {
            "goals": self.goals,
            "functions": self.functions,
            "subfunctions": self.subfunctions,
            "components": self.components,
            "gates": self.gates,
            "success_conditions": self.success_conditions,
        }


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    nodes: tuple[NodeId, ...] = ()


class ModelGraph:
    """Immutable typed DAG. Build through :class:`GraphBuilder`."""

    def __init__(self, nodes: list[Node], edges: list[Edge]):
        self._nodes: tuple[Node, ...] = tuple(nodes)
        self._edges: tuple[Edge, ...] = tuple(edges)
        out: list[list[Edge]] = [[] for _ in nodes]
        inc: list[list[Edge]] = [[] for _ in nodes]
        for e in edges:
            out[e.source].append(e)
            inc[e.target].append(e)
        self._out = tuple(tuple(lst) for lst in out)
        self._in = tuple(tuple(lst) for lst in inc)
        self._by_name = {
            (n.kind, n.name): n.id for n in nodes if n.kind not in GATE_KINDS
        }

    # -- basic access -------------------------------------------------

    @property
    def nodes(self) -> tuple[Node, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def node(self, node_id: NodeId) -> Node:
        if not 0 <= node_id < len(self._nodes):
            raise QueryError("NOT_FOUND", f"unknown node id {node_id}")
        return self._nodes[node_id]

    def find(self, kind: NodeKind, name: str) -> NodeId | None:
        return self._by_name.get((kind, name))

    def by_name(self, name: str) -> list[Node]:
        """All non-gate nodes carrying this exact name (case-sensitive)."""
        return [n for n in self._nodes if not n.is_gate and n.name == name]

    def out_edges(self, node_id: NodeId) -> tuple[Edge, ...]:
        self.node(node_id)
        return self._out[node_id]

    def in_edges(self, node_id: NodeId) -> tuple[Edge, ...]:
        self.node(node_id)
        return self._in[node_id]

    def nodes_of_kind(self, *kinds: NodeKind) -> list[Node]:
        wanted = set(kinds)
        return [n for n in self._nodes if n.kind in wanted]

    @property
    def goal(self) -> Node:
        goals = self.nodes_of_kind(NodeKind.GOAL)
        if len(goals) != 1:
            raise QueryError("NO_GOAL", f"graph has {len(goals)} goal nodes, expected 1")
        return goals[0]

    def display_name(self, node_id: NodeId) -> str:
        """Name for export surfaces; gates get ``<parent>_<AND|OR>``."""
        node = self.node(node_id)
        if not node.is_gate:
            return node.name
        suffix = "_AND" if node.kind is NodeKind.AND_GATE else "_OR"
        parents = self._in[node_id]
        parent = self._nodes[parents[0].source].name if parents else "orphan"
        return f"{parent}{suffix}"

    def condition_name(self, node_id: NodeId) -> str:
        """Bare label of a success condition (qualified name minus its component)."""
        node = self.node(node_id)
        if node.kind is not NodeKind.SUCCESS_CONDITION:
            return node.name
        owner = self.owner_component(node_id)
        if owner is not None:
            prefix = self._nodes[owner].name + "/"
            if node.name.startswith(prefix):
                return node.name[len(prefix):]
        return node.name

    def owner_component(self, condition_id: NodeId) -> NodeId | None:
        """The component above a success condition (via its gate), if any."""
        for edge in self._in[condition_id]:
            gate = self._nodes[edge.source]
            if gate.is_gate:
                for up in self._in[gate.id]:
                    if self._nodes[up.source].kind is NodeKind.COMPONENT:
                        return up.source
        return None

    # -- spec operations ----------------------------------------------

    def children_of(self, node_id: NodeId) -> tuple[NodeKind | None, tuple[NodeId, ...]]:
        """Gate kind below ``node_id`` plus the gate's children, in insertion order.

        Condition-less leaf components return ``(None, ())``. Success
        conditions (and gates) have no children and are rejected.
        """
        node = self.node(node_id)
        if node.kind is NodeKind.SUCCESS_CONDITION:
            raise QueryError(
                "TARGET_IS_LEAF",
                f"success condition {node.name!r} has no children",
            )
        if node.is_gate:
            raise QueryError("BAD_TARGET", "children_of expects a non-gate node")
        gates = [e.target for e in self._out[node_id] if self._nodes[e.target].is_gate]
        if not gates:
            return None, ()
        gate = self._nodes[gates[0]]
        children = tuple(e.target for e in self._out[gate.id])
        return gate.kind, children

    def count_elements(self) -> ElementCounts:
        counts = {kind: 0 for kind in NodeKind}
        for n in self._nodes:
            counts[n.kind] += 1
        return ElementCounts(
            goals=counts[NodeKind.GOAL],
            functions=counts[NodeKind.FUNCTION],
            subfunctions=counts[NodeKind.SUBFUNCTION],
            components=counts[NodeKind.COMPONENT],
            gates=counts[NodeKind.AND_GATE] + counts[NodeKind.OR_GATE],
            success_conditions=counts[NodeKind.SUCCESS_CONDITION],
        )

    def check_invariants(self) -> list[Violation]:
        violations: list[Violation] = []
        goals = self.nodes_of_kind(NodeKind.GOAL)
        if len(goals) != 1:
            violations.append(
                Violation(
                    "SingleGoal",
                    f"graph has {len(goals)} Goal nodes, expected exactly 1",
                    tuple(g.id for g in goals),
                )
            )

        violations.extend(self._check_edge_typing())
        violations.extend(self._check_gates())
        violations.extend(self._check_cycles())
        if len(goals) == 1:
            violations.extend(self._check_reachability(goals[0].id))
        violations.extend(self._check_component_data())
        return violations

    # -- invariant helpers --------------------------------------------

    def _check_edge_typing(self) -> list[Violation]:
        violations = []
        for e in self._edges:
            src, dst = self._nodes[e.source], self._nodes[e.target]
            if not src.is_gate and not dst.is_gate:
                violations.append(
                    Violation(
                        "GateMissing",
                        f"edge {src.kind.value} {src.name!r} -> {dst.kind.value} "
                        f"{dst.name!r} connects two non-gate nodes without a gate",
                        (e.source, e.target),
                    )
                )
                continue
            if src.is_gate and dst.is_gate:
                violations.append(
                    Violation(
                        "EdgeTyping",
                        "edge connects two gates directly",
                        (e.source, e.target),
                    )
                )
                continue
            if not src.is_gate:  # tier node -> gate
                tier = TIER[src.kind]
                expected = EDGE_FOR_PARENT_TIER.get(tier)
                if expected is None or e.kind is not expected:
                    violations.append(
                        Violation(
                            "EdgeTyping",
                            f"{src.kind.value} {src.name!r} -> gate must use "
                            f"{expected.value if expected else 'no edge'}, got {e.kind.value}",
                            (e.source, e.target),
                        )
                    )
            else:  # gate -> tier node
                tier = TIER[dst.kind]
                expected = EDGE_FOR_CHILD_TIER.get(tier)
                if expected is None or e.kind is not expected:
                    violations.append(
                        Violation(
                            "EdgeTyping",
                            f"gate -> {dst.kind.value} {dst.name!r} must use "
                            f"{expected.value if expected else 'no edge'}, got {e.kind.value}",
                            (e.source, e.target),
                        )
                    )
        return violations

    def _check_gates(self) -> list[Violation]:
        violations = []
        for n in self._nodes:
            if n.is_gate:
                parents = self._in[n.id]
                children = self._out[n.id]
                if len(parents) != 1:
                    violations.append(
                        Violation(
                            "GateArity",
                            f"gate {self.display_name(n.id)!r} has {len(parents)} parents, expected 1",
                            (n.id,),
                        )
                    )
                if len(children) < 1:
                    violations.append(
                        Violation(
                            "GateArity",
                            f"gate {self.display_name(n.id)!r} has no children",
                            (n.id,),
                        )
                    )
                # level order: every child sits one tier below the gate's parent
                if len(parents) == 1:
                    parent = self._nodes[parents[0].source]
                    if not parent.is_gate:
                        want = TIER[parent.kind] + 1
                        for e in children:
                            child = self._nodes[e.target]
                            if not child.is_gate and TIER[child.kind] != want:
                                violations.append(
                                    Violation(
                                        "LevelSkip",
                                        f"gate under {parent.kind.value} {parent.name!r} reaches "
                                        f"{child.kind.value} {child.name!r}, skipping the tier order",
                                        (n.id, child.id),
                                    )
                                )
            else:
                gate_children = [
                    e.target for e in self._out[n.id] if self._nodes[e.target].is_gate
                ]
                if len(gate_children) > 1:
                    violations.append(
                        Violation(
                            "MultipleGates",
                            f"{n.kind.value} {n.name!r} has {len(gate_children)} child gates, expected at most 1",
                            (n.id, *gate_children),
                        )
                    )
        return violations

    def _check_cycles(self) -> list[Violation]:
        WHITE, GREY, BLACK = 0, 1, 2
        color = [WHITE] * len(self._nodes)
        for start in range(len(self._nodes)):
            if color[start] != WHITE:
                continue
            stack: list[tuple[int, int]] = [(start, 0)]
            color[start] = GREY
            while stack:
                node_id, idx = stack[-1]
                if idx < len(self._out[node_id]):
                    stack[-1] = (node_id, idx + 1)
                    nxt = self._out[node_id][idx].target
                    if color[nxt] == GREY:
                        cycle = [nxt]
                        for sid, _ in reversed(stack):
                            cycle.append(sid)
                            if sid == nxt:
                                break
                        return [
                            Violation(
                                "CycleDetected",
                                "graph contains a cycle through "
                                + " -> ".join(
                                    self.display_name(i) for i in reversed(cycle)
                                ),
                                tuple(reversed(cycle)),
                            )
                        ]
                    if color[nxt] == WHITE:
                        color[nxt] = GREY
                        stack.append((nxt, 0))
                else:
                    color[node_id] = BLACK
                    stack.pop()
        return []

    def _check_reachability(self, goal_id: NodeId) -> list[Violation]:
        seen = {goal_id}
        frontier = [goal_id]
        while frontier:
            nid = frontier.pop()
            for e in self._out[nid]:
                if e.target not in seen:
                    seen.add(e.target)
                    frontier.append(e.target)
        violations = []
        for n in self._nodes:
            if n.id not in seen and not n.is_gate and n.kind is not NodeKind.GOAL:
                violations.append(
                    Violation(
                        "Unreachable",
                        f"{n.kind.value} {n.name!r} is not reachable from the goal",
                        (n.id,),
                    )
                )
        return violations

    def _check_component_data(self) -> list[Violation]:
        violations = []
        for n in self.nodes_of_kind(NodeKind.COMPONENT):
            try:
                gate_kind, children = self.children_of(n.id)
            except QueryError:
                continue
            condition_ids = {
                c for c in children
                if self._nodes[c].kind is NodeKind.SUCCESS_CONDITION
            }
            if condition_ids:
                rows = set(n.data.condition_rows) if n.data else set()
                if rows != condition_ids:
                    violations.append(
                        Violation(
                            "ConditionMatrix",
                            f"component {n.name!r} likelihood rows do not match its "
                            f"success conditions",
                            (n.id,),
                        )
                    )
            else:
                if n.data is None or n.data.direct_p_success is None:
                    violations.append(
                        Violation(
                            "NoSuccessSpec",
                            f"component {n.name!r} has neither success conditions nor "
                            f"a direct success probability",
                            (n.id,),
                        )
                    )
        return violations

    # -- traversal / comparison ---------------------------------------

    def topological_non_gates(self) -> list[NodeId]:
        """Non-gate nodes ordered leaves-first (deepest tier first, then name).

        Valid because every edge points from tier k towards tier k+1.
        """
        order = sorted(
            (n for n in self._nodes if not n.is_gate),
            key=lambda n: (-TIER[n.kind], n.name),
        )
        return [n.id for n in order]

    def shared_nodes(self) -> list[NodeId]:
        """Non-gate nodes referenced by more than one parent gate."""
        return [
            n.id
            for n in self._nodes
            if not n.is_gate and len(self._in[n.id]) > 1
        ]

    def structurally_equal(self, other: "ModelGraph") -> bool:
        """Equality up to node-id relabeling: same named nodes, data, gate
        kinds and ordered children everywhere."""

        def signature(g: ModelGraph):
            items = []
            for n in sorted(
                (n for n in g.nodes if not n.is_gate), key=lambda n: (n.kind.value, n.name)
            ):
                gate_kind, children = g.children_of(n.id) if n.kind is not NodeKind.SUCCESS_CONDITION else (None, ())
                child_keys = tuple(
                    (g.node(c).kind.value, g.node(c).name) for c in children
                )
                data_key = None
                if n.data is not None:
                    rows = tuple(
                        sorted(
                            (g.node(cid).name, row)
                            for cid, row in n.data.condition_rows.items()
                        )
                    )
                    data_key = (n.data.states, rows, n.data.direct_p_success)
                items.append((n.kind.value, n.name, gate_kind, child_keys, data_key))
            return items

        return signature(self) == signature(other)


class GraphBuilder:
    """Accumulates nodes and edges, then freezes them into a ModelGraph.

    Non-gate nodes are deduplicated by (kind, name); every ``add_gate`` call
    creates a fresh gate node. No structural checking happens here — that is
    ``check_invariants``'s job — so invalid graphs can be built for testing.
    """

    def __init__(self):
        self._nodes: list[Node] = []
        self._edges: list[Edge] = []
        self._by_name: dict[tuple[NodeKind, str], NodeId] = {}

    def add_node(self, kind: NodeKind, name: str) -> NodeId:
        if kind in GATE_KINDS:
            return self.add_gate(kind)
        key = (kind, name)
        existing = self._by_name.get(key)
        if existing is not None:
            return existing
        node = Node(len(self._nodes), kind, name)
        self._nodes.append(node)
        self._by_name[key] = node.id
        return node.id

    def add_gate(self, kind: NodeKind) -> NodeId:
        if kind not in GATE_KINDS:
            raise ValueError(f"not a gate kind: {kind}")
        node = Node(len(self._nodes), kind, "")
        self._nodes.append(node)
        return node.id

    def add_edge(self, source: NodeId, kind: EdgeKind, target: NodeId) -> None:
        for nid in (source, target):
            if not 0 <= nid < len(self._nodes):
                raise ValueError(f"unknown node id {nid}")
        self._edges.append(Edge(source, kind, target))

    def set_component_data(self, component: NodeId, data: ComponentData) -> None:
        node = self._nodes[component]
        if node.kind is not NodeKind.COMPONENT:
            raise ValueError(f"node {component} is not a Component")
        self._nodes[component] = Node(node.id, node.kind, node.name, data)

    def build(self) -> ModelGraph:
        return ModelGraph(self._nodes, self._edges)
