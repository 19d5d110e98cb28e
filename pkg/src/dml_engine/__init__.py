"""Deterministic diagnostic engine for DML success-logic hierarchies."""

from .errors import EngineError, ParseError, QueryError, ValidationFailed
from .graph import (
    ComponentData,
    Edge,
    EdgeKind,
    ElementCounts,
    GraphBuilder,
    ModelGraph,
    Node,
    NodeId,
    NodeKind,
    Violation,
)
from .modelio import (
    HierarchicalModel,
    Issue,
    ValidationReport,
    load_model_file,
    load_model_text,
    parse_model,
    serialize_graph,
    to_graph,
    validate_structure,
)
from .cypher import export_cypher, lint_cypher
from .propagation import (
    EvidenceSet,
    PropagationConfig,
    PropagationResult,
    brute_force_probability,
    component_probability,
    condition_probability,
    evaluate_boolean,
    propagate,
)
from .pathsets import PathSetCollection, generate_pathsets, minimize
from .session import DiagnosticRequest, Session, Subgraph, TaskType

__version__ = "0.1.0"

__all__ = [
    "ComponentData",
    "DiagnosticRequest",
    "Edge",
    "EdgeKind",
    "ElementCounts",
    "EngineError",
    "EvidenceSet",
    "GraphBuilder",
    "HierarchicalModel",
    "Issue",
    "ModelGraph",
    "Node",
    "NodeId",
    "NodeKind",
    "ParseError",
    "PathSetCollection",
    "PropagationConfig",
    "PropagationResult",
    "QueryError",
    "Session",
    "Subgraph",
    "TaskType",
    "ValidationFailed",
    "ValidationReport",
    "Violation",
    "brute_force_probability",
    "component_probability",
    "condition_probability",
    "evaluate_boolean",
    "export_cypher",
    "generate_pathsets",
    "lint_cypher",
    "load_model_file",
    "load_model_text",
    "minimize",
    "parse_model",
    "propagate",
    "serialize_graph",
    "to_graph",
    "validate_structure",
]
