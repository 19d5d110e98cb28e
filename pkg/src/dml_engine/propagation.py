"""Upward success-probability propagation.

Per success condition j of a component, the probability of the condition
holding given the evidence is the weighted sum over the component's states:

    P(success_j | data) = sum_i P(success_j | state_i) * P(state_i | data)

Condition probabilities combine through the component's gate (AND: product,
OR: complement of the product of complements), then propagate tier by tier
up to the goal with the same gate algebra. Nodes whose probability falls
strictly below the configured threshold are flagged impacted.

The gate formulas treat sibling events as independent. On graphs with shared
substructure they double-count the shared branch and become approximations;
``propagate`` computes them as defined and attaches a SHARED_DEPENDENCY
warning naming the shared nodes. ``brute_force_probability`` enumerates every
leaf outcome instead and serves as the exact oracle on tree-shaped models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import QueryError
from .graph import TIER, ComponentData, ModelGraph, NodeId, NodeKind

PRIOR_SUM_TOL = 1e-6

BRUTE_FORCE_MAX_LEAVES = 20


@dataclass(frozen=True)
class PropagationConfig:
    threshold: float = 0.9

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold out of [0,1]: {self.threshold}")


@dataclass
class EvidenceSet:
    """Per-component posterior state distributions, overriding priors.

    Components absent from ``overrides`` keep their prior distribution.
    """

    overrides: dict[NodeId, dict[str, float]] = field(default_factory=dict)

    @classmethod
    def from_names(cls, graph: ModelGraph, document: dict) -> "EvidenceSet":
        """Build from the JSON document shape {component name: {state: prob}}."""
        overrides: dict[NodeId, dict[str, float]] = {}
        for name, dist in document.items():
            node_id = graph.find(NodeKind.COMPONENT, name)
            if node_id is None:
                raise QueryError(
                    "UNKNOWN_COMPONENT", f"evidence names unknown component {name!r}", name
                )
            if not isinstance(dist, dict):
                raise QueryError(
                    "WRONG_TYPE", f"evidence for {name!r} must be an object", name
                )
            overrides[node_id] = {
                state: float(p) for state, p in dist.items()
            }
        out = cls(overrides)
        out.validate(graph)
        return out

    def validate(self, graph: ModelGraph) -> None:
        for node_id, dist in self.overrides.items():
            node = graph.node(node_id)
            if node.kind is not NodeKind.COMPONENT or node.data is None:
                raise QueryError(
                    "UNKNOWN_COMPONENT",
                    f"evidence target {node.name!r} is not a component of this model",
                    node.name,
                )
            declared = set(node.data.state_names)
            given = set(dist)
            if given != declared:
                raise QueryError(
                    "STATE_MISMATCH",
                    f"evidence for {node.name!r} must cover exactly its states "
                    f"{sorted(declared)}, got {sorted(given)}",
                    node.name,
                )
            for state, p in dist.items():
                if not 0.0 <= p <= 1.0:
                    raise QueryError(
                        "PROBABILITY_RANGE",
                        f"evidence P({state!r}) for {node.name!r} is {p}, outside [0,1]",
                        node.name,
                    )
            total = sum(dist.values())
            if abs(total - 1.0) > PRIOR_SUM_TOL:
                raise QueryError(
                    "PRIOR_SUM",
                    f"evidence for {node.name!r} sums to {total:g}, expected 1",
                    node.name,
                )

    def merged(self, updates: "EvidenceSet") -> "EvidenceSet":
        combined = dict(self.overrides)
        combined.update(updates.overrides)
        return EvidenceSet(combined)

    def distribution_for(self, data: ComponentData, node_id: NodeId) -> dict[str, float]:
        return self.overrides.get(node_id, data.priors)


@dataclass(frozen=True)
class NodeOutcome:
    node: NodeId
    name: str
    kind: NodeKind
    p_success: float
    impacted: bool


@dataclass
class PropagationResult:
    outcomes: list[NodeOutcome]  # ordered goal-first by tier, then name
    threshold: float
    trace: tuple[str, ...]  # evaluation order, leaves first
    shared_nodes: tuple[str, ...] = ()

    def outcome_for(self, name: str) -> NodeOutcome:
        for outcome in self.outcomes:
            if outcome.name == name:
                return outcome
        raise KeyError(name)

    @property
    def impacted(self) -> list[NodeOutcome]:
        return [o for o in self.outcomes if o.impacted]


def _clamp(p: float) -> float:
    return 0.0 if p < 0.0 else 1.0 if p > 1.0 else p


def _combine(gate_kind: NodeKind, probabilities: list[float]) -> float:
    if gate_kind is NodeKind.AND_GATE:
        product = 1.0
        for p in probabilities:
            product *= p
        return _clamp(product)
    product = 1.0
    for p in probabilities:
        product *= 1.0 - p
    return _clamp(1.0 - product)


def condition_probability(
    data: ComponentData, condition: NodeId, evidence: dict[str, float]
) -> float:
    """The weighted sum P(success_j | data) for one success condition."""
    if condition not in data.condition_rows:
        raise QueryError("NOT_FOUND", f"component has no success condition {condition}")
    if set(evidence) != set(data.state_names):
        raise QueryError(
            "STATE_MISMATCH",
            f"evidence states {sorted(evidence)} do not match declared "
            f"states {sorted(data.state_names)}",
        )
    row = data.condition_rows[condition]
    total = 0.0
    for i, (state, _) in enumerate(data.states):
        total += row[i] * evidence[state]
    return _clamp(total)


def component_probability(
    graph: ModelGraph, component: NodeId, evidence: EvidenceSet
) -> float:
    """Success probability of one component under the evidence."""
    node = graph.node(component)
    if node.kind is not NodeKind.COMPONENT:
        raise QueryError("BAD_TARGET", f"{node.name!r} is not a component")
    gate_kind, children = graph.children_of(component)
    data = node.data
    if gate_kind is None or not children:
        if data is None or data.direct_p_success is None:
            raise QueryError(
                "NO_SUCCESS_SPEC",
                f"component {node.name!r} has neither success conditions nor "
                f"a direct success probability",
                node.name,
            )
        return data.direct_p_success
    dist = evidence.distribution_for(data, component)
    probs = [condition_probability(data, cid, dist) for cid in children]
    return _combine(gate_kind, probs)


def propagate(
    graph: ModelGraph,
    evidence: EvidenceSet | None = None,
    config: PropagationConfig | None = None,
) -> PropagationResult:
    """Evaluate every non-gate node bottom-up and flag impacted ones."""
    evidence = evidence if evidence is not None else EvidenceSet()
    config = config if config is not None else PropagationConfig()
    evidence.validate(graph)

    values: dict[NodeId, float] = {}
    trace: list[str] = []
    order = graph.topological_non_gates()
    for node_id in order:
        node = graph.node(node_id)
        if node.kind is NodeKind.SUCCESS_CONDITION:
            owner = graph.owner_component(node_id)
            if owner is None:
                raise QueryError(
                    "NOT_FOUND", f"success condition {node.name!r} has no component"
                )
            data = graph.node(owner).data
            dist = evidence.distribution_for(data, owner)
            values[node_id] = condition_probability(data, node_id, dist)
        elif node.kind is NodeKind.COMPONENT:
            values[node_id] = component_probability(graph, node_id, evidence)
        else:
            gate_kind, children = graph.children_of(node_id)
            if gate_kind is None:
                raise QueryError(
                    "GATE_MISSING",
                    f"{node.kind.value} {node.name!r} has no gate below it",
                    node.name,
                )
            values[node_id] = _combine(gate_kind, [values[c] for c in children])
        trace.append(node.name)

    outcomes = [
        NodeOutcome(
            node=node_id,
            name=graph.node(node_id).name,
            kind=graph.node(node_id).kind,
            p_success=values[node_id],
            impacted=values[node_id] < config.threshold,
        )
        for node_id in sorted(
            values, key=lambda i: (TIER[graph.node(i).kind], graph.node(i).name)
        )
    ]
    shared = tuple(graph.node(i).name for i in graph.shared_nodes())
    return PropagationResult(
        outcomes=outcomes,
        threshold=config.threshold,
        trace=tuple(trace),
        shared_nodes=shared,
    )


def leaf_nodes(graph: ModelGraph) -> list[NodeId]:
    """Success conditions plus condition-less components, in id order."""
    leaves = []
    for node in graph.nodes:
        if node.kind is NodeKind.SUCCESS_CONDITION:
            leaves.append(node.id)
        elif node.kind is NodeKind.COMPONENT:
            gate_kind, children = graph.children_of(node.id)
            if gate_kind is None or not children:
                leaves.append(node.id)
    return leaves


def evaluate_boolean(
    graph: ModelGraph, assignment: dict[NodeId, bool]
) -> dict[NodeId, bool]:
    """Evaluate the hierarchy as pure Boolean logic from a leaf assignment."""
    leaves = set(leaf_nodes(graph))
    missing = leaves - set(assignment)
    if missing:
        names = sorted(graph.node(i).name for i in missing)
        raise QueryError("UNCOVERED_LEAF", f"assignment misses leaves: {names}")
    extra = set(assignment) - leaves
    if extra:
        names = sorted(graph.node(i).name for i in extra)
        raise QueryError("BAD_TARGET", f"assignment covers non-leaf nodes: {names}")

    values: dict[NodeId, bool] = {}
    for node_id in graph.topological_non_gates():
        node = graph.node(node_id)
        if node_id in leaves:
            values[node_id] = assignment[node_id]
            continue
        gate_kind, children = graph.children_of(node_id)
        child_values = [values[c] for c in children]
        if gate_kind is NodeKind.AND_GATE:
            values[node_id] = all(child_values)
        else:
            values[node_id] = any(child_values)
    return values


def _leaf_probabilities(graph: ModelGraph, evidence: EvidenceSet) -> dict[NodeId, float]:
    leaf_p: dict[NodeId, float] = {}
    for leaf in leaf_nodes(graph):
        leaf_node = graph.node(leaf)
        if leaf_node.kind is NodeKind.SUCCESS_CONDITION:
            owner = graph.owner_component(leaf)
            data = graph.node(owner).data
            dist = evidence.distribution_for(data, owner)
            leaf_p[leaf] = condition_probability(data, leaf, dist)
        else:
            leaf_p[leaf] = component_probability(graph, leaf, evidence)
    return leaf_p


def brute_force_probability(
    graph: ModelGraph, evidence: EvidenceSet | None, node: NodeId
) -> float:
    """Exhaustive-enumeration oracle for ``propagate``.

    Treats every leaf as an independent Bernoulli trial (success conditions
    at their weighted-sum probability, condition-less components at their
    direct probability), enumerates all outcomes, and sums the joint weights
    of those where the Boolean evaluation makes ``node`` succeed.
    """
    evidence = evidence if evidence is not None else EvidenceSet()
    evidence.validate(graph)
    graph.node(node)

    leaves = leaf_nodes(graph)
    if len(leaves) > BRUTE_FORCE_MAX_LEAVES:
        raise QueryError(
            "LEAF_GUARD",
            f"{len(leaves)} leaves exceed the enumeration guard of "
            f"{BRUTE_FORCE_MAX_LEAVES}",
        )
    leaf_p = _leaf_probabilities(graph, evidence)

    total = 0.0
    for outcome in itertools.product((False, True), repeat=len(leaves)):
        weight = 1.0
        assignment = {}
        for leaf, success in zip(leaves, outcome):
            assignment[leaf] = success
            weight *= leaf_p[leaf] if success else 1.0 - leaf_p[leaf]
        if weight == 0.0:
            continue
        if evaluate_boolean(graph, assignment)[node]:
            total += weight
    return _clamp(total)


def brute_force_probabilities(
    graph: ModelGraph, evidence: EvidenceSet | None = None
) -> dict[NodeId, float]:
    """All-nodes variant of :func:`brute_force_probability`, one enumeration.

    Vectorized over the full outcome space: outcome ``j`` assigns leaf ``i``
    the bit ``(j >> i) & 1``, so each node's truth table is a boolean vector
    and its probability is the dot product with the outcome weights. Same
    probabilistic model as the per-node oracle, evaluated on a different
    computational path from ``propagate``'s per-gate float products.
    """
    import numpy as np

    evidence = evidence if evidence is not None else EvidenceSet()
    evidence.validate(graph)
    leaves = leaf_nodes(graph)
    if len(leaves) > BRUTE_FORCE_MAX_LEAVES:
        raise QueryError(
            "LEAF_GUARD",
            f"{len(leaves)} leaves exceed the enumeration guard of "
            f"{BRUTE_FORCE_MAX_LEAVES}",
        )
    leaf_p = _leaf_probabilities(graph, evidence)

    n = len(leaves)
    outcomes = np.arange(1 << n, dtype=np.uint32)
    weights = np.ones(1 << n, dtype=np.float64)
    tables: dict[NodeId, "np.ndarray"] = {}
    for i, leaf in enumerate(leaves):
        bit = ((outcomes >> i) & 1).astype(bool)
        tables[leaf] = bit
        p = leaf_p[leaf]
        weights *= np.where(bit, p, 1.0 - p)

    results: dict[NodeId, float] = {}
    for node_id in graph.topological_non_gates():
        if node_id not in tables:
            gate_kind, children = graph.children_of(node_id)
            stacked = np.stack([tables[c] for c in children])
            if gate_kind is NodeKind.AND_GATE:
                tables[node_id] = stacked.all(axis=0)
            else:
                tables[node_id] = stacked.any(axis=0)
        results[node_id] = _clamp(float(weights[tables[node_id]].sum()))
    return results
