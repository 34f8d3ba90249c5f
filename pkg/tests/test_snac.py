import pytest

from nacgen.errors import NacgenError
from nacgen.oracle import check_sufficiency, min_pairs_full_grid
from nacgen.scenarios import explicit_set, full_cartesian, partition, sample_scenarios
from nacgen.snac import (
    components_under,
    connect_components,
    parse_graph,
    run_snac,
    serialize_graph,
)
from nacgen.uncertainty import enumerate_event_lattice, make_split_chain_param

from conftest import make_params


class TestWalkthrough:
    def test_five_pairs_for_six_scenarios(self, two_stage3_params, walkthrough_set):
        graph = run_snac(two_stage3_params, walkthrough_set)
        assert len(graph) == 5

    def test_exact_edge_set_frozen(self, two_stage3_params, walkthrough_set):
        # deterministic tie-breaking pins the edges, not just the count
        graph = run_snac(two_stage3_params, walkthrough_set)
        assert graph.edge_list() == [(0, 1), (1, 4), (2, 3), (3, 5), (4, 5)]

    def test_single_scenario_no_edges(self, two_stage3_params):
        sset = explicit_set(two_stage3_params, [(2, 3)])
        assert len(run_snac(two_stage3_params, sset)) == 0

    def test_deterministic_across_runs(self, two_stage3_params, walkthrough_set):
        a = run_snac(two_stage3_params, walkthrough_set)
        b = run_snac(two_stage3_params, walkthrough_set)
        assert a.edge_list() == b.edge_list()
        assert {e: (i.level, i.cut, i.block_min) for e, i in a.edges.items()} == {
            e: (i.level, i.cut, i.block_min) for e, i in b.edges.items()
        }


class TestFullGridCounts:
    def test_full_sixteen_matches_grid_formula(self, two_stage3_params):
        sset = full_cartesian(two_stage3_params)
        graph = run_snac(two_stage3_params, sset)
        assert len(graph) == min_pairs_full_grid(two_stage3_params) == 24

    def test_full_three_params_two_stages(self):
        params = make_params(3, 2)
        sset = full_cartesian(params)
        graph = run_snac(params, sset)
        assert len(graph) == min_pairs_full_grid(params) == 3 * 2 * 9

    def test_full_mixed_outcome_counts(self):
        params = [
            make_split_chain_param([[[1, 2]], [[1], [2]]], param_id=0),
            make_split_chain_param(
                [[[1, 2, 3, 4]], [[1], [2, 3, 4]], [[1], [2], [3, 4]],
                 [[1], [2], [3], [4]]],
                param_id=1,
            ),
        ]
        sset = full_cartesian(params)
        graph = run_snac(params, sset)
        # axis lines: (2-1)*4 + (4-1)*2 = 10
        assert len(graph) == min_pairs_full_grid(params) == 10
        assert check_sufficiency(params, sset, graph).sufficient


class TestComponentsUnder:
    def test_empty_snapshot_all_singletons(self):
        assert components_under([], [3, 1, 2, 0]) == [[0], [1], [2], [3]]

    def test_fully_spanned_single_component(self):
        assert components_under([(0, 1), (1, 2), (2, 3)], [0, 1, 2, 3]) == [
            [0, 1, 2, 3]
        ]

    def test_partial_edges(self):
        comps = components_under([(0, 1)], [0, 1, 2, 3])
        assert comps == [[0, 1], [2], [3]]

    def test_outside_edges_ignored(self):
        comps = components_under([(0, 9), (9, 1)], [0, 1])
        assert comps == [[0], [1]]


class TestConnectComponents:
    def test_star_from_lowest_representative(self):
        assert connect_components([[1], [3], [5]]) == [(1, 3), (1, 5)]

    def test_single_component_no_edges(self):
        assert connect_components([[0, 1, 2]]) == []

    def test_representatives_are_minima(self):
        assert connect_components([[2, 4], [7]]) == [(2, 7)]

    def test_empty_rejected(self):
        with pytest.raises(NacgenError):
            connect_components([])


class TestProvenance:
    def test_endpoints_share_block_at_provenance_cut(self, two_stage3_params):
        sset = sample_scenarios(two_stage3_params, 10, seed=8)
        graph = run_snac(two_stage3_params, sset)
        for (r, s), info in graph.edges.items():
            part = partition(sset, info.cut)
            home = [b for b in part.blocks if r in b and s in b]
            assert len(home) == 1
            assert home[0][0] == info.block_min
            assert info.level == info.cut.order

    def test_no_deeper_cut_colocates_edge(self, two_stage3_params):
        # an edge of level k must not be needed at any order above k
        sset = sample_scenarios(two_stage3_params, 10, seed=8)
        graph = run_snac(two_stage3_params, sset)
        lat = enumerate_event_lattice(two_stage3_params)
        for (r, s), info in graph.edges.items():
            for order, cuts in lat.items():
                if order <= info.level:
                    continue
                for cut in cuts:
                    part = partition(sset, cut)
                    assert not any(r in b and s in b for b in part.blocks)

    def test_edge_count_bounded_by_pairs(self, two_stage3_params):
        sset = sample_scenarios(two_stage3_params, 10, seed=8)
        graph = run_snac(two_stage3_params, sset)
        n = len(sset)
        assert len(graph) <= n * (n - 1) // 2


class TestGraphSerialization:
    def test_plain_round_trip(self, two_stage3_params, walkthrough_set):
        graph = run_snac(two_stage3_params, walkthrough_set)
        text = serialize_graph(graph)
        again = parse_graph(text)
        assert again.n == graph.n
        assert again.edge_list() == graph.edge_list()
        assert serialize_graph(again) == text

    def test_provenance_round_trip(self, two_stage3_params, walkthrough_set):
        graph = run_snac(two_stage3_params, walkthrough_set)
        text = serialize_graph(graph, provenance=True)
        again = parse_graph(text)
        assert {e: (i.level, i.cut, i.block_min) for e, i in graph.edges.items()} == {
            e: (i.level, i.cut, i.block_min) for e, i in again.edges.items()
        }

    def test_levels_serialized(self, two_stage3_params, walkthrough_set):
        graph = run_snac(two_stage3_params, walkthrough_set)
        text = serialize_graph(graph)
        lines = text.strip().splitlines()
        assert lines[0] == "6 5"
        for line, (r, s) in zip(lines[1:], graph.edge_list()):
            toks = line.split()
            assert (int(toks[0]), int(toks[1])) == (r, s)
            assert int(toks[2]) == graph.edges[(r, s)].level

    def test_empty_text_rejected(self):
        with pytest.raises(NacgenError):
            parse_graph("")


class TestLevelSnapshotSemantics:
    def test_sibling_blocks_may_close_cycles(self):
        # the full two-parameter, one-stage grid needs all four axis edges
        # even though the last one closes a cycle; level buffering keeps it
        params = make_params(2, 1)
        sset = full_cartesian(params)
        graph = run_snac(params, sset)
        assert len(graph) == 4  # a spanning tree alone would use 3
        edges = set(graph.edge_list())
        for block in ([0, 1], [2, 3], [0, 2], [1, 3]):
            inner = [e for e in edges if e[0] in block and e[1] in block]
            assert len(inner) == 1


class TestErrors:
    def test_empty_scenario_set(self, two_stage3_params):
        sset = explicit_set(two_stage3_params, [])
        with pytest.raises(NacgenError):
            run_snac(two_stage3_params, sset)
