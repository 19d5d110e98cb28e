"""Canonical JSON rendering shared by the CLI and the HTTP service.

Both surfaces must produce byte-identical payloads for identical inputs, so
every payload goes through :func:`canonical_json` (two-space indent, exact
shortest-round-trip floats, trailing newline) and is emitted verbatim.
"""

from __future__ import annotations

import json

from .graph import ElementCounts, ModelGraph, NodeKind
from .modelio import ValidationReport
from .pathsets import PathSetCollection
from .propagation import PropagationResult
from .session import Session, Subgraph


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def counts_payload(counts: ElementCounts) -> dict:
    return counts.as_dict()


def report_payload(report: ValidationReport) -> dict:
    return report.as_dict()


def propagation_payload(result: PropagationResult) -> list[dict]:
    return [
        {
            "name": o.name,
            "kind": o.kind.value,
            "p_success": o.p_success,
            "impacted": o.impacted,
        }
        for o in result.outcomes
    ]


def pathsets_payload(graph: ModelGraph, collection: PathSetCollection) -> dict:
    return {
        "source": collection.source_name,
        "minimized": collection.minimized,
        "count": len(collection.sets),
        "truncated": False,
        "pathsets": collection.qualified(graph),
    }


def subgraph_payload(session: Session, subgraph: Subgraph) -> dict:
    graph = session.require_model()
    result = session.fresh_result()
    outcome_by_name = {o.name: o for o in result.outcomes} if result else {}

    nodes = []
    for node in subgraph.nodes:
        row: dict = {"name": graph.display_name(node.id), "kind": node.kind.value}
        if node.kind is NodeKind.COMPONENT and node.data is not None:
            row["states"] = [
                {"name": name, "prior": prior} for name, prior in node.data.states
            ]
            if node.data.direct_p_success is not None:
                row["direct_p_success"] = node.data.direct_p_success
        outcome = outcome_by_name.get(node.name) if not node.is_gate else None
        if outcome is not None:
            row["p_success"] = outcome.p_success
            row["impacted"] = outcome.impacted
        nodes.append(row)
    nodes.sort(key=lambda r: (r["kind"], r["name"]))

    edges = [
        {
            "source": graph.display_name(e.source),
            "type": e.kind.value,
            "target": graph.display_name(e.target),
        }
        for e in subgraph.edges
    ]
    edges.sort(key=lambda r: (r["type"], r["source"], r["target"]))

    return {
        "target": subgraph.target,
        "depth": subgraph.depth,
        "nodes": nodes,
        "edges": edges,
    }


def error_payload(code: str, message: str, path: str | None = None) -> dict:
    payload = {"code": code, "message": message}
    if path is not None:
        payload["path"] = path
    return payload
