import random

import pytest
from hypothesis import given, settings, strategies as st

from dml_engine import GraphBuilder, QueryError, evaluate_boolean, generate_pathsets, minimize
from dml_engine.graph import NodeKind
from dml_engine.pathsets import PathSetCollection, _count
from dml_engine.propagation import leaf_nodes
from dml_engine.generator import random_model_document

from helpers import component, function, goal_doc, graph_of, subfunction


class TestFigureSemantics:
    def test_and_component_yields_single_set(self):
        doc = goal_doc([function("f", [subfunction("s", [component(
            "c", states=[("on", 1.0)],
            conditions=[("c1", {"on": 1.0}), ("c2", {"on": 1.0})],
            gate="AND_gate",
        )])])])
        graph = graph_of(doc)
        cid = graph.find(NodeKind.COMPONENT, "c")
        collection = generate_pathsets(graph, cid)
        assert collection.qualified(graph) == [["c/c1", "c/c2"]]

    def test_or_component_yields_singletons(self):
        doc = goal_doc([function("f", [subfunction("s", [component(
            "c", states=[("on", 1.0)],
            conditions=[("c1", {"on": 1.0}), ("c2", {"on": 1.0})],
            gate="OR_gate",
        )])])])
        graph = graph_of(doc)
        cid = graph.find(NodeKind.COMPONENT, "c")
        assert generate_pathsets(graph, cid).qualified(graph) == [["c/c1"], ["c/c2"]]

    def test_condition_less_component_is_its_own_path(self):
        doc = goal_doc([function("f", [subfunction("s", [component("c", direct=1.0)])])])
        graph = graph_of(doc)
        sid = graph.find(NodeKind.SUBFUNCTION, "s")
        assert generate_pathsets(graph, sid).qualified(graph) == [["c"]]

    def test_condensation_tanks_single_six_condition_set(self, fixture_graph):
        sf = fixture_graph.find(NodeKind.SUBFUNCTION, "Manage Condensation Tanks")
        collection = minimize(fixture_graph, generate_pathsets(fixture_graph, sf))
        assert len(collection.sets) == 1
        assert collection.qualified(fixture_graph) == [[
            "CST-1/Absence of excessive sediment",
            "CST-1/Maintains appropriate water level",
            "CST-2/Absence of excessive sediment",
            "CST-2/Maintains appropriate water level",
            "CST-3/Absence of excessive sediment",
            "CST-3/Maintains appropriate water level",
        ]]

    def test_gate_and_condition_targets_rejected(self, fixture_graph):
        sc = fixture_graph.find(
            NodeKind.SUCCESS_CONDITION, "CST-1/Maintains appropriate water level"
        )
        with pytest.raises(QueryError) as err:
            generate_pathsets(fixture_graph, sc)
        assert err.value.code == "TARGET_IS_LEAF"


class TestCountingAlgebra:
    def test_or_adds_and_multiplies(self):
        # two subtrees with 2 and 3 raw path-sets
        sub_a = subfunction("sa", [component(
            "ca", states=[("on", 1.0)],
            conditions=[("a1", {"on": 1.0}), ("a2", {"on": 1.0})], gate="OR_gate")])
        sub_b = subfunction("sb", [component(
            "cb", states=[("on", 1.0)],
            conditions=[("b1", {"on": 1.0}), ("b2", {"on": 1.0}), ("b3", {"on": 1.0})],
            gate="OR_gate")])
        for gate, expected in (("OR_gate", 5), ("AND_gate", 6)):
            doc = goal_doc([function("f", [sub_a, sub_b], gate=gate)])
            graph = graph_of(doc)
            fid = graph.find(NodeKind.FUNCTION, "f")
            assert len(generate_pathsets(graph, fid).sets) == expected

    @pytest.mark.parametrize("seed", range(20))
    def test_declared_count_matches_generation(self, seed):
        rng = random.Random(seed)
        graph = graph_of(random_model_document(rng, max_components=6))
        collection = generate_pathsets(graph, graph.goal.id, limit=100_000)
        assert _count(graph, graph.goal.id) == len(collection.sets)

    def test_explosion_guard_raises_typed_error(self):
        comps = [component(f"c{i}", states=[("on", 1.0)],
                           conditions=[("x", {"on": 1.0}), ("y", {"on": 1.0})],
                           gate="OR_gate")
                 for i in range(10)]
        doc = goal_doc([function("f", [subfunction("s", comps)])])
        graph = graph_of(doc)
        with pytest.raises(QueryError) as err:
            generate_pathsets(graph, graph.goal.id, limit=1000)  # 2^10 = 1024 sets
        assert err.value.code == "PATHSET_EXPLOSION"
        assert "1024" in err.value.message


def _naive_minimal(sets):
    unique = set(sets)
    return {s for s in unique if not any(o < s for o in unique)}


class TestMinimize:
    def _collection(self, graph, sets):
        return PathSetCollection(source=0, source_name="x", sets=list(sets))

    def _leaf_graph(self, n):
        b = GraphBuilder()
        for i in range(n):
            b.add_node(NodeKind.COMPONENT, f"l{i:02d}")
        return b.build()

    def test_absorption(self):
        graph = self._leaf_graph(2)
        collection = self._collection(graph, [frozenset({0}), frozenset({0, 1})])
        assert minimize(graph, collection).sets == [frozenset({0})]

    def test_dedup(self):
        graph = self._leaf_graph(2)
        collection = self._collection(graph, [frozenset({0, 1}), frozenset({0, 1})])
        assert minimize(graph, collection).sets == [frozenset({0, 1})]

    def test_idempotent_and_stable(self):
        graph = self._leaf_graph(4)
        collection = self._collection(
            graph, [frozenset({3}), frozenset({0, 1}), frozenset({1, 2})]
        )
        once = minimize(graph, collection)
        twice = minimize(graph, once)
        assert once.sets == twice.sets
        assert once.minimized and twice.minimized

    @settings(max_examples=200)
    @given(st.lists(st.frozensets(st.integers(0, 7), min_size=1, max_size=5), max_size=12))
    def test_matches_naive_minimal_family(self, sets):
        graph = self._leaf_graph(8)
        result = minimize(graph, self._collection(graph, sets))
        assert set(result.sets) == _naive_minimal(sets)
        # ordered by (size, lexicographic names)
        keys = [(len(s), sorted(graph.node(i).name for i in s)) for s in result.sets]
        assert keys == sorted(keys)


def _enumerate_minimal_assignments(graph, target):
    """All inclusion-minimal leaf sets that make ``target`` true (2^L sweep)."""
    leaves = leaf_nodes(graph)
    satisfying = []
    for mask in range(1 << len(leaves)):
        assignment = {
            leaf: bool(mask >> i & 1) for i, leaf in enumerate(leaves)
        }
        if evaluate_boolean(graph, assignment)[target]:
            satisfying.append(mask)
    satisfying.sort(key=lambda m: bin(m).count("1"))
    minimal_masks = []
    for mask in satisfying:
        if not any(m & mask == m for m in minimal_masks):
            minimal_masks.append(mask)
    return {
        frozenset(leaf for i, leaf in enumerate(leaves) if mask >> i & 1)
        for mask in minimal_masks
    }


class TestSoundnessAndMinimality:
    def _check(self, graph, target):
        collection = minimize(graph, generate_pathsets(graph, target, limit=100_000))
        leaves = leaf_nodes(graph)
        for pathset in collection.sets:
            assignment = {leaf: leaf in pathset for leaf in leaves}
            assert evaluate_boolean(graph, assignment)[target], "sufficiency"
            for element in pathset:
                reduced = dict(assignment)
                reduced[element] = False
                assert not evaluate_boolean(graph, reduced)[target], "minimality"
        return collection

    def test_fixture_goal_pathsets_sound_and_minimal(self, fixture_graph):
        self._check(fixture_graph, fixture_graph.goal.id)

    @pytest.mark.parametrize("seed", range(12))
    def test_random_models_match_exhaustive_enumeration(self, seed):
        rng = random.Random(seed)
        graph = graph_of(random_model_document(
            rng, max_components=5, max_conditions=2,
            shared_component=seed % 3 == 0,
        ))
        if len(leaf_nodes(graph)) > 12:
            graph = graph_of(random_model_document(
                rng, max_components=4, max_conditions=2))
        collection = self._check(graph, graph.goal.id)
        expected = _enumerate_minimal_assignments(graph, graph.goal.id)
        assert set(collection.sets) == expected


class TestDeterminism:
    def test_generation_order_is_reproducible(self, fixture_graph):
        fid = fixture_graph.find(NodeKind.FUNCTION, "Supply Feedwater")
        a = generate_pathsets(fixture_graph, fid)
        b = generate_pathsets(fixture_graph, fid)
        assert a.sets == b.sets
        assert a.qualified(fixture_graph) == b.qualified(fixture_graph)

    def test_supply_feedwater_has_three_minimal_paths(self, fixture_graph):
        fid = fixture_graph.find(NodeKind.FUNCTION, "Supply Feedwater")
        collection = minimize(fixture_graph, generate_pathsets(fixture_graph, fid))
        assert [len(s) for s in collection.sets] == [12, 12, 13]
        # one path per pump choice; every path carries all six CST conditions
        for rendered in collection.qualified(fixture_graph):
            assert sum(1 for name in rendered if name.startswith("CST-")) == 6