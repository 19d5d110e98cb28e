"""Downward generation of success path-sets.

A path-set is a set of leaf identifiers (success conditions, or condition-less
components) that jointly suffice for the target node. Generation descends the
hierarchy: a component's AND gate yields one set holding all its conditions,
an OR gate yields one singleton per condition; higher up, AND gates combine
child collections by Cartesian product with element-wise union and OR gates
concatenate them. Raw collections come back exactly as generated; a separate
``minimize`` pass removes duplicates and absorbed supersets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import QueryError
from .graph import ModelGraph, NodeId, NodeKind

DEFAULT_LIMIT = 10_000


@dataclass
class PathSetCollection:
    source: NodeId
    source_name: str
    sets: list[frozenset[NodeId]]
    minimized: bool = False

    def __len__(self) -> int:
        return len(self.sets)

    def qualified(self, graph: ModelGraph) -> list[list[str]]:
        """Render each set as sorted, fully qualified leaf names."""
        return [sorted(graph.node(i).name for i in s) for s in self.sets]


def _count(graph: ModelGraph, node: NodeId) -> int:
    """Raw path-set count; AND multiplies child counts, OR adds them."""
    gate_kind, children = graph.children_of(node)
    kind = graph.node(node).kind
    if kind is NodeKind.COMPONENT:
        if not children:
            return 1
        return 1 if gate_kind is NodeKind.AND_GATE else len(children)
    if gate_kind is None or not children:
        raise QueryError(
            "GATE_MISSING",
            f"{graph.node(node).name!r} has no gate below it",
        )
    counts = [_count(graph, c) for c in children]
    if gate_kind is NodeKind.AND_GATE:
        total = 1
        for c in counts:
            total *= c
        return total
    return sum(counts)


def _generate(graph: ModelGraph, node: NodeId) -> list[frozenset[NodeId]]:
    gate_kind, children = graph.children_of(node)
    kind = graph.node(node).kind
    if kind is NodeKind.COMPONENT:
        if not children:
            return [frozenset({node})]
        if gate_kind is NodeKind.AND_GATE:
            return [frozenset(children)]
        return [frozenset({c}) for c in children]
    child_sets = [_generate(graph, c) for c in children]
    if gate_kind is NodeKind.AND_GATE:
        combined = []
        for combo in product(*child_sets):
            union: frozenset[NodeId] = frozenset()
            for s in combo:
                union = union | s
            combined.append(union)
        return combined
    flattened = []
    for sets in child_sets:
        flattened.extend(sets)
    return flattened


def generate_pathsets(
    graph: ModelGraph, node: NodeId, limit: int = DEFAULT_LIMIT
) -> PathSetCollection:
    """Raw success path-sets for ``node``, in deterministic generation order.

    Counts are computed before materialization; exceeding ``limit`` raises a
    PATHSET_EXPLOSION error instead of exhausting memory. Counts only grow
    towards the root, so checking the target's count covers every subtree.
    """
    if limit < 1:
        raise QueryError("BAD_REQUEST", f"limit must be positive, got {limit}")
    target = graph.node(node)
    if target.is_gate or target.kind is NodeKind.SUCCESS_CONDITION:
        raise QueryError(
            "TARGET_IS_LEAF",
            f"{target.name or target.kind.value!r} has no success paths of its own",
        )
    count = _count(graph, node)
    if count > limit:
        raise QueryError(
            "PATHSET_EXPLOSION",
            f"{target.name!r} has {count} raw path-sets, exceeding the limit of {limit}",
        )
    return PathSetCollection(
        source=node,
        source_name=target.name,
        sets=_generate(graph, node),
        minimized=False,
    )


def minimize(graph: ModelGraph, collection: PathSetCollection) -> PathSetCollection:
    """Remove duplicates and absorbed supersets; order by size then name."""

    def sort_key(s: frozenset[NodeId]):
        return (len(s), sorted(graph.node(i).name for i in s))

    candidates = sorted(set(collection.sets), key=sort_key)
    kept: list[frozenset[NodeId]] = []
    for candidate in candidates:
        if not any(existing < candidate for existing in kept):
            kept.append(candidate)
    return PathSetCollection(
        source=collection.source,
        source_name=collection.source_name,
        sets=kept,
        minimized=True,
    )
