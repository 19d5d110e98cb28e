"""Seeded random model generation for property tests and benchmarks.

Documents come back as plain dicts in the hierarchical JSON shape, so tests
can push them through the full parse -> validate -> lower pipeline. All
randomness flows from the caller's ``random.Random`` instance; identical
seeds give identical models.
"""

from __future__ import annotations

import json
import random

from .graph import ModelGraph, NodeKind
from .modelio import parse_model, to_graph

STATE_NAMES = ("operational", "degraded", "failed")


def _simplex(rng: random.Random, n: int) -> list[float]:
    weights = [rng.random() + 1e-9 for _ in range(n)]
    total = sum(weights)
    return [w / total for w in weights]


def _gate(rng: random.Random) -> str:
    return "AND_gate" if rng.random() < 0.5 else "OR_gate"


def random_component(rng: random.Random, name: str, *, max_states: int = 3,
                     max_conditions: int = 2, p_direct: float = 0.15) -> dict:
    if rng.random() < p_direct:
        return {"name": name, "direct_p_success": rng.random()}
    n_states = rng.randint(1, max_states)
    states = list(STATE_NAMES[:n_states])
    priors = _simplex(rng, n_states)
    n_conditions = rng.randint(1, max_conditions)
    conditions = []
    for i in range(n_conditions):
        conditions.append(
            {
                "name": f"cond-{i + 1}",
                "given_state": {s: rng.random() for s in states},
            }
        )
    return {
        "name": name,
        "states": [{"name": s, "prior": p} for s, p in zip(states, priors)],
        "success_through": {"gate": _gate(rng), "success_conditions": conditions},
    }


def random_model_document(
    rng: random.Random,
    *,
    max_functions: int = 3,
    max_subfunctions: int = 3,
    max_components: int = 10,
    max_states: int = 3,
    max_conditions: int = 2,
    p_direct: float = 0.15,
    shared_component: bool = False,
) -> dict:
    """A random valid document. ``shared_component`` re-references one
    component under a second subfunction, turning the tree into a DAG."""
    n_functions = rng.randint(1, max_functions)
    sf_per_function = [rng.randint(1, max_subfunctions) for _ in range(n_functions)]
    total_sf = sum(sf_per_function)
    # at least one component per subfunction, bounded overall
    total_components = rng.randint(total_sf, max(total_sf, max_components))
    per_sf = [1] * total_sf
    for _ in range(total_components - total_sf):
        per_sf[rng.randrange(total_sf)] += 1

    functions = []
    subfunction_lists: list[list] = []
    c_counter = 0
    sf_index = 0
    for f, n_subfunctions in enumerate(sf_per_function):
        subfunctions = []
        for _ in range(n_subfunctions):
            components = []
            for _ in range(per_sf[sf_index]):
                c_counter += 1
                components.append(
                    random_component(
                        rng,
                        f"component-{c_counter}",
                        max_states=max_states,
                        max_conditions=max_conditions,
                        p_direct=p_direct,
                    )
                )
            sf_index += 1
            subfunction_lists.append(components)
            subfunctions.append(
                {
                    "name": f"subfunction-{sf_index}",
                    "requires": {"gate": _gate(rng), "components": components},
                }
            )
        functions.append(
            {
                "name": f"function-{f + 1}",
                "depends_on": {"gate": _gate(rng), "subfunctions": subfunctions},
            }
        )

    if shared_component and len(subfunction_lists) >= 2:
        source_list = rng.randrange(len(subfunction_lists))
        candidates = [c["name"] for c in subfunction_lists[source_list]]
        target_choices = [i for i in range(len(subfunction_lists)) if i != source_list]
        target_list = rng.choice(target_choices)
        subfunction_lists[target_list].append({"ref": rng.choice(candidates)})

    return {
        "Goal": {
            "name": "goal",
            "achieved_by": {"gate": _gate(rng), "functions": functions},
        }
    }


def random_model_graph(rng: random.Random, **kwargs) -> ModelGraph:
    document = random_model_document(rng, **kwargs)
    return to_graph(parse_model(json.dumps(document)))


def random_evidence_document(rng: random.Random, graph: ModelGraph, *,
                             p_override: float = 0.5) -> dict:
    """Evidence for a random subset of the graph's stateful components."""
    evidence = {}
    for node in graph.nodes_of_kind(NodeKind.COMPONENT):
        if node.data is None or not node.data.condition_rows:
            continue
        if rng.random() < p_override:
            names = node.data.state_names
            dist = _simplex(rng, len(names))
            evidence[node.name] = dict(zip(names, dist))
    return evidence
