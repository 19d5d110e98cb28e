"""Acceptance suite: one test per release criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per criterion.
Tolerances are pinned here and nowhere else: 1e-9 for propagation against the
enumeration oracle, 1e-12 for the weighted-sum unit, exact equality for
counts, flags and byte-level determinism.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
from fastapi.testclient import TestClient

from dml_engine import (
    EvidenceSet,
    ParseError,
    evaluate_boolean,
    export_cypher,
    generate_pathsets,
    lint_cypher,
    minimize,
    parse_model,
    propagate,
    serialize_graph,
    to_graph,
    validate_structure,
)
from dml_engine.cli import run_cli
from dml_engine.graph import NodeKind
from dml_engine.generator import random_model_document, random_evidence_document
from dml_engine.propagation import (
    brute_force_probabilities,
    brute_force_probability,
    condition_probability,
    leaf_nodes,
)
from dml_engine.service import ServiceConfig, create_app

from conftest import GOAL_NAME
from test_modelio import CATALOG, _valid_base
from helpers import mutate

ORACLE_TOL = 1e-9
UNIT_TOL = 1e-12

TABLE_1 = {
    "goals": 1,
    "functions": 4,
    "subfunctions": 9,
    "components": 19,
    "gates": 33,
    "success_conditions": 39,
}


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] FAIL {name}")
        raise
    print(f"[ACCEPTANCE] PASS {name}")


def _graph_for_seed(seed, **kwargs):
    return to_graph(parse_model(json.dumps(
        random_model_document(random.Random(seed), **kwargs))))


def test_oracle_equivalence_200_tree_models():
    """Propagation equals exhaustive enumeration on 200 random trees."""
    with criterion("oracle equivalence (200 tree models, <= 1e-9, < 10 s)"):
        started = time.perf_counter()
        nodes_checked = 0
        for seed in range(200):
            rng = random.Random(seed)
            doc = random_model_document(
                rng, max_components=10, max_states=3, max_conditions=2
            )
            graph = to_graph(parse_model(json.dumps(doc)))
            evidence = EvidenceSet.from_names(
                graph, random_evidence_document(rng, graph)
            )
            result = propagate(graph, evidence)
            oracle = brute_force_probabilities(graph, evidence)
            for outcome in result.outcomes:
                assert abs(outcome.p_success - oracle[outcome.node]) <= ORACLE_TOL, (
                    seed, outcome.name
                )
                nodes_checked += 1
            if len(leaf_nodes(graph)) <= 10 and seed % 50 == 0:
                # tie the per-node oracle to the vectorized sweep
                sample = result.outcomes[0].node
                assert abs(
                    brute_force_probability(graph, evidence, sample) - oracle[sample]
                ) <= ORACLE_TOL
        elapsed = time.perf_counter() - started
        assert nodes_checked > 2000
        assert elapsed < 10.0, f"sweep took {elapsed:.2f}s"


def test_weighted_sum_unit_fidelity():
    """Weighted-sum unit matches independent exact arithmetic on 50 cases."""
    with criterion("weighted-sum unit fidelity (50 cases, <= 1e-12)"):
        from dml_engine import ComponentData

        # the hand case first
        data = ComponentData(
            states=(("op", 0.7), ("deg", 0.2), ("fail", 0.1)),
            condition_rows={0: (0.99, 0.5, 0.0)},
        )
        p = condition_probability(data, 0, {"op": 0.7, "deg": 0.2, "fail": 0.1})
        assert abs(p - 0.793) <= UNIT_TOL

        rng = random.Random(42)
        for _ in range(50):
            n = rng.randint(1, 4)
            weights = [rng.random() for _ in range(n)]
            total = sum(weights)
            dist = [w / total for w in weights]
            row = [rng.random() for _ in range(n)]
            names = [f"s{i}" for i in range(n)]
            data = ComponentData(
                states=tuple(zip(names, dist)), condition_rows={0: tuple(row)}
            )
            p = condition_probability(data, 0, dict(zip(names, dist)))
            exact = float(sum(Fraction(r) * Fraction(e) for r, e in zip(row, dist)))
            assert abs(p - exact) <= UNIT_TOL


def test_fixture_fidelity_table_1(fixture_graph):
    """The shipped model reproduces the ground-truth element counts."""
    with criterion("fixture fidelity (1/4/9/19/33/39 elements)"):
        assert fixture_graph.count_elements().as_dict() == TABLE_1
        assert fixture_graph.check_invariants() == []


def test_cst_scenario(fixture_graph, cst2_evidence):
    """CST-2 failure zeroes its subfunction and impacts every AND ancestor."""
    with criterion("CST-2 failure scenario (p=0 chain, < 100 ms)"):
        evidence = EvidenceSet.from_names(fixture_graph, cst2_evidence)
        started = time.perf_counter()
        result = propagate(fixture_graph, evidence)
        elapsed = time.perf_counter() - started
        assert elapsed < 0.1, f"propagation took {elapsed * 1000:.1f} ms"

        mct = result.outcome_for("Manage Condensation Tanks")
        assert mct.p_success == 0.0 and mct.impacted
        for ancestor in ("Supply Feedwater", GOAL_NAME):
            outcome = result.outcome_for(ancestor)
            assert outcome.p_success == 0.0 and outcome.impacted
        assert result.threshold == 0.9


def _minimal_assignments(graph, target):
    """Exhaustive 2^L reference: inclusion-minimal satisfying leaf sets."""
    leaves = leaf_nodes(graph)
    n = len(leaves)
    outcomes = np.arange(1 << n, dtype=np.uint32)
    tables = {
        leaf: ((outcomes >> i) & 1).astype(bool) for i, leaf in enumerate(leaves)
    }
    for node_id in graph.topological_non_gates():
        if node_id in tables:
            continue
        gate, children = graph.children_of(node_id)
        stacked = np.stack([tables[c] for c in children])
        tables[node_id] = (
            stacked.all(axis=0) if gate is NodeKind.AND_GATE else stacked.any(axis=0)
        )
    satisfying = sorted(
        (int(m) for m in outcomes[tables[target]]), key=lambda m: bin(m).count("1")
    )
    minimal = []
    for mask in satisfying:
        if not any(kept & mask == kept for kept in minimal):
            minimal.append(mask)
    return {
        frozenset(leaf for i, leaf in enumerate(leaves) if mask >> i & 1)
        for mask in minimal
    }


def test_pathset_soundness_and_minimality():
    """Minimized path-sets equal the minimal satisfying assignments."""
    with criterion("path-set soundness, minimality, completeness (<= 12 leaves)"):
        models_checked = 0
        for seed in range(100):
            graph = _graph_for_seed(
                seed, max_components=6, shared_component=seed % 3 == 0
            )
            leaves = leaf_nodes(graph)
            if len(leaves) > 12:
                continue
            target = graph.goal.id
            collection = minimize(graph, generate_pathsets(graph, target, limit=100_000))
            for pathset in collection.sets:
                assignment = {leaf: leaf in pathset for leaf in leaves}
                assert evaluate_boolean(graph, assignment)[target], "sufficiency"
                for element in pathset:
                    reduced = dict(assignment)
                    reduced[element] = False
                    assert not evaluate_boolean(graph, reduced)[target], "minimality"
            assert set(collection.sets) == _minimal_assignments(graph, target)
            models_checked += 1
        assert models_checked >= 50, f"only {models_checked} models under 12 leaves"


def test_pathset_algebra():
    """Raw counts obey AND=product / OR=sum; minimize is idempotent and stable."""
    with criterion("path-set algebra (100 models) and minimize idempotence"):

        def expected_count(graph, node):
            gate, children = graph.children_of(node)
            kind = graph.node(node).kind
            if kind is NodeKind.COMPONENT:
                if not children:
                    return 1
                return 1 if gate is NodeKind.AND_GATE else len(children)
            counts = [expected_count(graph, c) for c in children]
            if gate is NodeKind.AND_GATE:
                product = 1
                for c in counts:
                    product *= c
                return product
            return sum(counts)

        for seed in range(100):
            graph = _graph_for_seed(seed, max_components=8)
            raw = generate_pathsets(graph, graph.goal.id, limit=1_000_000)
            assert len(raw.sets) == expected_count(graph, graph.goal.id)
            once = minimize(graph, raw)
            twice = minimize(graph, once)
            assert once.sets == twice.sets  # idempotent, order-stable


def test_round_trip():
    """serialize -> parse -> validate -> lower reproduces the graph."""
    with criterion("round-trip (fixture + 100 random models incl. shared)"):
        from conftest import FIXTURES

        fixture_graph = to_graph(parse_model(
            (FIXTURES / "aux_feedwater.json").read_text(encoding="utf-8")))
        shared_seen = 0
        for graph in [fixture_graph] + [
            _graph_for_seed(seed, shared_component=seed % 4 == 0) for seed in range(100)
        ]:
            text = serialize_graph(graph)
            model = parse_model(text)
            assert validate_structure(model).passed
            again = to_graph(model)
            assert graph.structurally_equal(again)
            if graph.shared_nodes():
                shared_seen += 1
        assert shared_seen >= 1


def test_validation_catalog():
    """Every malformed-document fixture is rejected with its code at its path."""
    with criterion("validation catalog (>= 10 malformed documents)"):
        # report-based rejections
        for name, break_doc, code, path in CATALOG:
            doc = mutate(_valid_base(), break_doc)
            report = validate_structure(parse_model(json.dumps(doc)))
            assert not report.passed, name
            assert (code, path) in [(i.code, i.path) for i in report.issues], name

        # parse-level rejections
        with pytest.raises(ParseError) as err:
            parse_model(json.dumps(
                mutate(_valid_base(), lambda d: d["Goal"].__setitem__("bogus", 1))))
        assert err.value.code == "UNKNOWN_KEY"
        with pytest.raises(ParseError) as err:
            parse_model(json.dumps(mutate(
                _valid_base(),
                lambda d: d["Goal"]["achieved_by"].__setitem__("gate", "XOR_gate"))))
        assert err.value.code == "INVALID_GATE"

        covered = {code for _, _, code, _ in CATALOG}
        covered |= {"UNKNOWN_KEY", "INVALID_GATE"}
        required = {
            "GATE_MISSING", "LEVEL_SKIP", "PRIOR_SUM", "DUPLICATE_SIBLING",
            "UNKNOWN_KEY", "INVALID_GATE", "GIVEN_STATE_MISMATCH", "EMPTY_NAME",
            "REF_CYCLE", "NO_SUCCESS_SPEC",
        }
        assert required <= covered
        assert len(covered) >= 10


def test_cypher_export(fixture_graph, fixture_text):
    """Line count = nodes + edges, linter-clean, byte-identical."""
    with criterion("Cypher export (count, lint, determinism)"):
        text = export_cypher(fixture_graph)
        assert len(text.splitlines()) == len(fixture_graph.nodes) + len(fixture_graph.edges)
        assert lint_cypher(text) == []
        rebuilt = to_graph(parse_model(fixture_text))
        assert export_cypher(rebuilt) == text
        assert export_cypher(fixture_graph) == text


def test_cli_service_parity(capsys, fixture_path, fixture_text, evidence_path, cst2_evidence):
    """`up`/`down` CLI output is byte-identical to the HTTP responses."""
    with criterion("CLI / service parity (byte-identical payloads)"):
        client = TestClient(create_app(ServiceConfig()))
        client.post("/model", content=fixture_text)
        client.put("/evidence", json=cst2_evidence)

        assert run_cli(["up", str(fixture_path), "--evidence", str(evidence_path)]) == 0
        cli_up = capsys.readouterr().out
        http_up = client.post("/propagate").content.decode("utf-8")
        assert cli_up == http_up

        for target in ("Manage Condensation Tanks", "Supply Feedwater"):
            assert run_cli(["down", str(fixture_path), "--node", target]) == 0
            cli_down = capsys.readouterr().out
            http_down = client.post(
                "/pathsets", json={"target": target}
            ).content.decode("utf-8")
            assert cli_down == http_down
