"""Small document builders shared across test modules."""

from __future__ import annotations

import copy
import json

from dml_engine import parse_model, to_graph


def component(name, conditions=None, states=None, direct=None, gate="AND_gate"):
    doc = {"name": name}
    if states is not None:
        doc["states"] = [{"name": s, "prior": p} for s, p in states]
    if conditions is not None:
        doc["success_through"] = {
            "gate": gate,
            "success_conditions": [
                {"name": cname, "given_state": dict(given)} for cname, given in conditions
            ],
        }
    if direct is not None:
        doc["direct_p_success"] = direct
    return doc


def subfunction(name, components, gate="AND_gate"):
    return {"name": name, "requires": {"gate": gate, "components": components}}


def function(name, subfunctions, gate="AND_gate"):
    return {"name": name, "depends_on": {"gate": gate, "subfunctions": subfunctions}}


def goal_doc(functions, gate="AND_gate", name="goal"):
    return {"Goal": {"name": name, "achieved_by": {"gate": gate, "functions": functions}}}


def single_chain(comp=None):
    """goal -> f -> s -> one component (direct success unless given)."""
    if comp is None:
        comp = component("c", direct=1.0)
    return goal_doc([function("f", [subfunction("s", [comp])])])


def graph_of(doc):
    return to_graph(parse_model(json.dumps(doc)))


def mutate(doc, path_ops):
    """Deep-copy ``doc`` and apply ``fn(copy)`` edits."""
    out = copy.deepcopy(doc)
    path_ops(out)
    return out


# a two-state component with one certain condition, handy default
def simple_component(name, p_op=1.0, p_fail=0.0, prior_op=1.0):
    return component(
        name,
        states=[("operational", prior_op), ("failed", 1.0 - prior_op)],
        conditions=[("ok", {"operational": p_op, "failed": p_fail})],
    )
