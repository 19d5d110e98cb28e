import json
import random

import pytest
from hypothesis import given, strategies as st

from dml_engine import GraphBuilder, export_cypher, lint_cypher, parse_model, to_graph
from dml_engine.graph import EdgeKind, NodeKind
from dml_engine.generator import random_model_document

from helpers import component, function, goal_doc, graph_of, subfunction


def test_single_goal_statement():
    b = GraphBuilder()
    b.add_node(NodeKind.GOAL, "G")
    text = export_cypher(b.build())
    assert 'CREATE (:Goal {name: "G"})' in text


def test_goal_gate_function_edges():
    b = GraphBuilder()
    g = b.add_node(NodeKind.GOAL, "G")
    gate = b.add_gate(NodeKind.AND_GATE)
    f = b.add_node(NodeKind.FUNCTION, "F")
    b.add_edge(g, EdgeKind.ACHIEVED_BY, gate)
    b.add_edge(gate, EdgeKind.DEPENDS_ON, f)
    text = export_cypher(b.build())
    assert text.count("ACHIEVED_BY") == 1
    assert text.count("DEPENDS_ON") == 1
    assert 'CREATE (:AND_gate {name: "G_AND"})' in text


def test_statement_count_matches_graph(fixture_graph):
    text = export_cypher(fixture_graph)
    lines = text.splitlines()
    assert len(lines) == len(fixture_graph.nodes) + len(fixture_graph.edges)


def test_export_is_byte_identical_across_runs(fixture_text, fixture_graph):
    rebuilt = to_graph(parse_model(fixture_text))
    assert export_cypher(fixture_graph) == export_cypher(rebuilt)
    assert export_cypher(fixture_graph) == export_cypher(fixture_graph)


def test_lf_line_endings_and_semicolons(fixture_graph):
    text = export_cypher(fixture_graph)
    assert "\r" not in text
    assert text.endswith("\n")
    assert all(line.endswith(";") for line in text.splitlines())


def test_fixture_export_lints_clean(fixture_graph):
    assert lint_cypher(export_cypher(fixture_graph)) == []


@pytest.mark.parametrize("seed", range(10))
def test_random_models_lint_clean(seed):
    doc = random_model_document(random.Random(seed))
    graph = graph_of(doc)
    text = export_cypher(graph)
    assert lint_cypher(text) == []
    assert len(text.splitlines()) == len(graph.nodes) + len(graph.edges)


@given(
    name=st.text(
        alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
        min_size=1,
        max_size=40,
    ).filter(lambda s: s.strip() and "/" not in s)
)
def test_names_with_quotes_and_backslashes_lint_clean(name):
    doc = goal_doc(
        [function("f", [subfunction("s", [component(name, direct=1.0)])])],
        name="g",
    )
    graph = graph_of(doc)
    assert lint_cypher(export_cypher(graph)) == []


class TestLinter:
    def test_unbalanced_parens_flagged(self):
        assert lint_cypher('CREATE (:Goal {name: "g"};\n')

    def test_unknown_label_flagged(self):
        assert lint_cypher('CREATE (:Gadget {name: "g"});\n')

    def test_missing_semicolon_flagged(self):
        assert lint_cypher('CREATE (:Goal {name: "g"})\n')

    def test_unterminated_string_flagged(self):
        assert lint_cypher('CREATE (:Goal {name: "g});\n')

    def test_statement_must_be_create_or_match(self):
        assert lint_cypher('DELETE (:Goal {name: "g"});\n')
