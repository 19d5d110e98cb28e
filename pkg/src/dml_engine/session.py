"""Session layer: one loaded model plus live evidence state.

Exposes the three diagnostic task types as structured requests — upward
reasoning (fault propagation), downward reasoning (minimal success paths)
and explanatory retrieval (bounded subgraph extraction) — so a front end or
agent can drive the engine without any free-text interpretation.

Mutations (model reload, evidence edits, config changes) are serialized and
bump a revision counter; reads never change it.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field, replace

from .errors import QueryError
from .graph import Edge, ModelGraph, Node, NodeId, NodeKind
from .pathsets import DEFAULT_LIMIT, PathSetCollection, generate_pathsets, minimize
from .propagation import EvidenceSet, PropagationConfig, PropagationResult, propagate


class TaskType(str, enum.Enum):
    UPWARD = "UpwardReasoning"
    DOWNWARD = "DownwardReasoning"
    EXPLANATORY = "Explanatory"


@dataclass(frozen=True)
class DiagnosticRequest:
    task: TaskType
    target: str | None = None
    kind: NodeKind | None = None
    threshold: float | None = None
    limit: int | None = None
    raw: bool = False
    depth: int = 1


@dataclass
class Subgraph:
    target: str
    depth: int
    nodes: list[Node]
    edges: list[Edge]


@dataclass
class Session:
    model: ModelGraph | None = None
    evidence: EvidenceSet = field(default_factory=EvidenceSet)
    config: PropagationConfig = field(default_factory=PropagationConfig)
    revision: int = 0
    last_result: PropagationResult | None = None
    last_result_revision: int = -1
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- mutations -----------------------------------------------------

    def load_model(self, graph: ModelGraph) -> int:
        with self._lock:
            self.model = graph
            self.evidence = EvidenceSet()
            self.last_result = None
            self.last_result_revision = -1
            self.revision += 1
            return self.revision

    def set_evidence(self, updates: EvidenceSet | dict) -> int:
        graph = self.require_model()
        if isinstance(updates, dict):
            updates = EvidenceSet.from_names(graph, updates)
        else:
            updates.validate(graph)
        with self._lock:
            self.evidence = self.evidence.merged(updates)
            self.revision += 1
            return self.revision

    def reset_evidence(self) -> int:
        self.require_model()
        with self._lock:
            self.evidence = EvidenceSet()
            self.revision += 1
            return self.revision

    def set_threshold(self, threshold: float) -> int:
        with self._lock:
            self.config = replace(self.config, threshold=threshold)
            self.revision += 1
            return self.revision

    # -- queries ---------------------------------------------------------

    def require_model(self) -> ModelGraph:
        if self.model is None:
            raise QueryError("NO_MODEL", "no model loaded")
        return self.model

    def resolve(self, name: str, kind: NodeKind | None = None) -> NodeId:
        """Exact, case-sensitive name lookup across non-gate kinds."""
        graph = self.require_model()
        if kind is not None:
            node_id = graph.find(kind, name)
            if node_id is None:
                raise QueryError("NOT_FOUND", f"no {kind.value} named {name!r}")
            return node_id
        matches = graph.by_name(name)
        if not matches:
            raise QueryError("NOT_FOUND", f"no node named {name!r}")
        if len(matches) > 1:
            kinds = sorted(n.kind.value for n in matches)
            raise QueryError(
                "AMBIGUOUS_NAME",
                f"{name!r} names nodes of several kinds ({kinds}); pass a kind",
            )
        return matches[0].id

    def run_upward(self, request: DiagnosticRequest) -> PropagationResult:
        if request.task is not TaskType.UPWARD:
            raise QueryError("WRONG_TASK", f"run_upward cannot serve task {request.task.value!r}")
        graph = self.require_model()
        config = self.config
        if request.threshold is not None:
            config = PropagationConfig(threshold=request.threshold)
        try:
            result = propagate(graph, self.evidence, config)
        except QueryError as err:
            err.revision = self.revision  # traceability back to the session state
            raise
        with self._lock:
            self.last_result = result
            self.last_result_revision = self.revision
        return result

    def run_downward(self, request: DiagnosticRequest) -> PathSetCollection:
        if request.task is not TaskType.DOWNWARD:
            raise QueryError("WRONG_TASK", f"run_downward cannot serve task {request.task.value!r}")
        graph = self.require_model()
        if request.target is None:
            raise QueryError("BAD_REQUEST", "downward reasoning needs a target node")
        node_id = self.resolve(request.target, request.kind)
        limit = request.limit if request.limit is not None else DEFAULT_LIMIT
        try:
            collection = generate_pathsets(graph, node_id, limit=limit)
        except QueryError as err:
            err.revision = self.revision
            raise
        if request.raw:
            return collection
        return minimize(graph, collection)

    def retrieve_subgraph(self, target: str, depth: int, kind: NodeKind | None = None) -> Subgraph:
        """Fragment rooted at ``target``: ``depth`` non-gate tiers below it
        plus one hop above; depth 0 returns the node alone."""
        graph = self.require_model()
        if depth < 0:
            raise QueryError("BAD_REQUEST", f"depth must be non-negative, got {depth}")
        target_id = self.resolve(target, kind)
        included: set[NodeId] = {target_id}
        if depth > 0:
            frontier = [target_id]
            for _ in range(depth):
                next_frontier: list[NodeId] = []
                for node_id in frontier:
                    node = graph.node(node_id)
                    if node.kind is NodeKind.SUCCESS_CONDITION:
                        continue
                    gate_kind, children = graph.children_of(node_id)
                    if gate_kind is None:
                        continue
                    gate_id = next(
                        e.target
                        for e in graph.out_edges(node_id)
                        if graph.node(e.target).is_gate
                    )
                    included.add(gate_id)
                    included.update(children)
                    next_frontier.extend(children)
                frontier = next_frontier
            for edge in graph.in_edges(target_id):
                gate = graph.node(edge.source)
                if gate.is_gate:
                    included.add(gate.id)
                    for up in graph.in_edges(gate.id):
                        included.add(up.source)
        nodes = [n for n in graph.nodes if n.id in included]
        edges = [
            e for e in graph.edges if e.source in included and e.target in included
        ]
        return Subgraph(
            target=graph.node(target_id).name,
            depth=depth,
            nodes=nodes,
            edges=edges,
        )

    def fresh_result(self) -> PropagationResult | None:
        """Last propagation result, only if still valid for this revision."""
        if self.last_result is not None and self.last_result_revision == self.revision:
            return self.last_result
        return None
