"""
Tests for the exact solvers.
"""

import dataclasses
import math

import pytest
from hypothesis import given, settings

from conftest import graphs
from zqforcing import solvers as solvers_module
from zqforcing.config import SolverConfig
from zqforcing.errors import ContractViolation, ResourceLimitExceeded
from zqforcing.game import MoveKind
from zqforcing.generators import gen_cycle, gen_path, gen_spider
from zqforcing.graph import Graph, VertexSet, closure
from zqforcing.solvers import (
    ZqSolver,
    psd_forcing_set,
    solve_zq,
    stalling_response,
    z0_number,
    z_number,
    zero_forcing_set,
    zq_number,
    zq_static,
)

K4 = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


class TestKnownValues:
    def test_double_star(self, double_star):
        assert zq_number(double_star, 1) == 3
        assert z_number(double_star) == 4
        assert zq_number(double_star, math.inf) == 4

    def test_double_star_needs_delayed_spending(self, double_star):
        assert zq_static(double_star, 1) == 4

    def test_path_static_is_one(self, p5):
        assert zq_static(p5, 1) == 1

    @pytest.mark.parametrize("q", [0, 1, 2, math.inf])
    def test_paths(self, q):
        assert zq_number(gen_path(6), q) == 1

    def test_claw(self, claw):
        assert zq_number(claw, 1) == 2
        assert zq_number(claw, 0) == 1

    def test_spiders(self):
        assert zq_number(gen_spider(1), 1) == 2
        assert zq_number(gen_spider(2), 2) == 3
        assert z_number(gen_spider(3)) == 5

    def test_cycle(self):
        c5 = gen_cycle(5)
        assert z_number(c5) == 2
        assert zq_number(c5, 2) == 2
        assert z0_number(c5) == 2

    @pytest.mark.parametrize("q", [0, 1, 2, 3, math.inf])
    def test_complete_graph(self, q):
        assert zq_number(K4, q) == 3

    def test_zero_forcing_set_is_minimum_and_forcing(self, double_star):
        s = zero_forcing_set(double_star)
        assert len(s) == 4
        assert closure(double_star, s) == double_star.vertices

    def test_psd_forcing_set(self, double_star):
        assert len(psd_forcing_set(double_star)) == 1


class TestDisconnected:
    def test_two_claws_share_announcements(self, claw):
        # announcing one leaf of each claw always makes progress
        two = claw.disjoint_union(claw)
        assert zq_number(two, 1) == 3

    def test_two_claws_classic_game_adds(self, claw):
        two = claw.disjoint_union(claw)
        assert zq_number(two, math.inf) == 4
        assert zq_number(two, 0) == 2

    @pytest.mark.parametrize("q", [0, math.inf])
    def test_split_graph_is_solved_by_parts_only(self, monkeypatch, q):
        # claw on {0, 2, 4, 6} with center 0, path 1-3-5
        g = Graph(7, [(0, 2), (0, 4), (0, 6), (1, 3), (3, 5)])
        sizes = []

        class CountingSolver(ZqSolver):
            def __init__(self, graph, config=None):
                sizes.append(graph.n)
                super().__init__(graph, config)

        monkeypatch.setattr(solvers_module, "ZqSolver", CountingSolver)
        result = solve_zq(g, q)
        assert sorted(sizes) == [3, 4]
        assert result.first_move is not None
        assert result.first_move.kind is MoveKind.TOKEN
        assert result.first_move.vertex in {0, 2, 4, 6}

    def test_split_first_move_is_relabelled(self):
        g = Graph(7, [(0, 2), (0, 4), (0, 6), (1, 3), (3, 5)])
        result = solve_zq(g, math.inf)
        assert result.value == 3
        # a token on the claw center costs an extra token
        assert result.first_move.vertex in {2, 4, 6}
        assert result.states == sum(
            ZqSolver(part, SolverConfig(q=math.inf)).solve().states
            for part in (Graph(4, [(0, 1), (0, 2), (0, 3)]), gen_path(3))
        )

    def test_empty_graph(self):
        with pytest.raises(ContractViolation):
            zq_number(Graph(0), 1)


class TestSolverInternals:
    def test_first_move(self, claw):
        result = solve_zq(claw, 1)
        assert result.value == 2
        assert result.first_move is not None
        assert result.first_move.kind is MoveKind.TOKEN
        assert result.states > 0

    def test_state_limit(self, double_star):
        with pytest.raises(ResourceLimitExceeded):
            zq_number(double_star, 1, SolverConfig(state_limit=2))

    def test_announcement_limit(self):
        star = Graph(8, [(0, i) for i in range(1, 8)])
        solver = ZqSolver(star, SolverConfig(q=1, announcement_limit=4))
        with pytest.raises(ResourceLimitExceeded):
            solver.value(VertexSet([0]))

    def test_admissible_announcements_progress(self, double_star):
        solver = ZqSolver(double_star, SolverConfig(q=1))
        filled = VertexSet([0, 3, 4, 5])
        announcements = solver.announcements(filled)
        assert announcements
        for announced in announcements:
            assert len(announced) == 2

    def test_no_admissible_announcement_at_one_hub(self, claw):
        # returning both leaves leaves the center with two unfilled neighbors
        solver = ZqSolver(claw, SolverConfig(q=1))
        assert solver.announcements(VertexSet([0])) == []

    def test_memo_monotone(self, double_star):
        solver = ZqSolver(double_star, SolverConfig(q=1))
        solver.solve()
        assert solver.memo.monotonicity_violations() == []
        assert VertexSet() in solver.memo

    def test_single_forces_match_closure_jumps(self, double_star):
        slow = SolverConfig(q=1, jump_closure=False)
        assert zq_number(double_star, 1, slow) == 3
        assert zq_number(gen_spider(1), 1, slow) == 2

    @settings(max_examples=25, deadline=None)
    @given(graphs(min_n=1, max_n=6))
    def test_all_announcement_sizes_agree(self, g):
        for q in (0, 1, 2):
            cfg = SolverConfig(q=q)
            wide = dataclasses.replace(cfg, all_announcements=True)
            assert ZqSolver(g, wide).solve().value == ZqSolver(g, cfg).solve().value

    @settings(max_examples=25, deadline=None)
    @given(graphs(min_n=1, max_n=6))
    def test_chain(self, g):
        values = [zq_number(g, q) for q in (0, 1, 2, math.inf)]
        assert values == sorted(values)
        assert values[0] == z0_number(g) or not g.is_connected()


class TestStallingResponse:
    def test_one_row_keeps_everything(self, double_star):
        announced = [VertexSet([6]), VertexSet([7])]
        assert stalling_response(double_star, [4], announced) == announced

    def test_untouched_component_alone(self, double_star):
        announced = [VertexSet([1]), VertexSet([6]), VertexSet([7])]
        assert stalling_response(double_star, [4], announced) == [VertexSet([1])]

    def test_row_elimination(self, double_star):
        announced = [VertexSet([1]), VertexSet([2]), VertexSet([6])]
        assert stalling_response(double_star, [3, 4], announced) == [VertexSet([1]), VertexSet([2])]

    def test_precondition(self, double_star):
        with pytest.raises(ContractViolation):
            stalling_response(double_star, [3, 4], [VertexSet([1]), VertexSet([6])])

    def test_overlapping_components(self, double_star):
        with pytest.raises(ContractViolation):
            stalling_response(double_star, [4], [VertexSet([6]), VertexSet([6, 7])])
