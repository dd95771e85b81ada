"""
Tests for the graph core: vertex sets, components, closures and forts.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from zqforcing.errors import ContractViolation, GraphValidationError, ResourceLimitExceeded
from zqforcing.generators import gen_cycle, gen_path
from zqforcing.graph import (
    Graph,
    VertexSet,
    available_forces,
    closure,
    closure_mask,
    components,
    find_unfilled_fort,
    induced_closure,
    is_fort,
    psd_closure,
)


class TestVertexSet:
    def test_membership_and_order(self):
        vs = VertexSet([5, 1, 3])
        assert list(vs) == [1, 3, 5]
        assert len(vs) == 3
        assert 3 in vs and 2 not in vs
        assert vs.min() == 1
        assert vs.max_index() == 5

    def test_set_algebra(self):
        a, b = VertexSet([0, 1, 2]), VertexSet([2, 3])
        assert a | b == VertexSet([0, 1, 2, 3])
        assert a & b == VertexSet([2])
        assert a - b == VertexSet([0, 1])
        assert VertexSet([2]) <= a
        assert not a.isdisjoint(b)
        assert a.complement(5) == VertexSet([3, 4])

    def test_empty_min_raises(self):
        with pytest.raises(ContractViolation):
            VertexSet().min()

    def test_negative_vertex_rejected(self):
        with pytest.raises(ContractViolation):
            VertexSet([-1])


class TestGraph:
    def test_basic_properties(self, double_star):
        assert double_star.n == 8
        assert double_star.degrees() == [1, 1, 1, 4, 4, 1, 1, 1]
        assert double_star.is_tree()
        assert not double_star.is_path()
        assert double_star.leaves() == [0, 1, 2, 5, 6, 7]

    def test_self_loop_rejected(self):
        with pytest.raises(GraphValidationError):
            Graph(3, [(1, 1)])

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphValidationError):
            Graph(3, [(0, 1), (1, 0)])

    def test_endpoint_out_of_range(self):
        with pytest.raises(GraphValidationError):
            Graph(2, [(0, 2)])

    def test_networkx_round_trip_relabels(self):
        g = Graph.from_networkx(gen_cycle(5).to_networkx())
        assert g == gen_cycle(5)

    def test_induced_subgraph_mapping(self, double_star):
        sub, mapping = double_star.induced_subgraph(VertexSet([3, 4, 5]))
        assert mapping == [3, 4, 5]
        assert sub.edges == ((0, 1), (1, 2))

    def test_disjoint_union(self, claw):
        two = claw.disjoint_union(claw)
        assert two.n == 8
        assert not two.is_connected()
        assert len(components(two, two.vertices)) == 2


class TestComponents:
    def test_middle_vertex_removed(self):
        assert components(gen_path(3), VertexSet([0, 2])) == [VertexSet([0]), VertexSet([2])]

    def test_double_star_singletons(self, double_star):
        active = double_star.vertices - VertexSet([0, 3, 4, 5])
        assert components(double_star, active) == [
            VertexSet([1]),
            VertexSet([2]),
            VertexSet([6]),
            VertexSet([7]),
        ]

    def test_connected_graph_is_one_component(self, double_star):
        assert components(double_star, double_star.vertices) == [double_star.vertices]

    def test_empty_active(self, double_star):
        assert components(double_star, VertexSet()) == []


class TestClosure:
    def test_chain_of_forces(self):
        g = gen_path(3)
        assert induced_closure(g, VertexSet([0]), VertexSet([1, 2])) == g.vertices

    def test_double_star_centers(self, double_star):
        filled = VertexSet([0, 5])
        active = double_star.vertices - filled
        assert induced_closure(double_star, filled, active) == VertexSet([0, 3, 4, 5])

    def test_returned_leaf_is_filled(self, double_star):
        filled = VertexSet([0, 3, 4, 5])
        result = induced_closure(double_star, filled, VertexSet([1]))
        assert result == VertexSet([0, 1, 3, 4, 5])

    def test_overlap_is_contract_violation(self, double_star):
        with pytest.raises(ContractViolation):
            induced_closure(double_star, VertexSet([0]), VertexSet([0, 1]))

    def test_star_center_forces_nothing(self, claw):
        assert closure(claw, VertexSet([0])) == VertexSet([0])

    def test_star_two_leaves_fill_everything(self, claw):
        assert closure(claw, VertexSet([1, 2])) == claw.vertices

    @pytest.mark.parametrize("n", [1, 2, 5, 9])
    def test_path_endpoint(self, n):
        g = gen_path(n)
        assert closure(g, VertexSet([0])) == g.vertices

    def test_psd_closure_fills_tree_from_center(self, claw):
        # each unfilled leaf is its own component
        assert psd_closure(claw, VertexSet([0])) == claw.vertices

    def test_available_forces(self, double_star):
        nbr = double_star.neighbor_masks
        filled = VertexSet([0, 5]).mask
        assert available_forces(nbr, filled, double_star.full_mask & ~filled) == [(0, 3), (5, 4)]

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_n=10), st.integers(0, 1023), st.integers(0, 1000))
    def test_random_order_confluence(self, g, seed_mask, order_seed):
        filled = seed_mask & g.full_mask
        expected = closure(g, VertexSet.from_mask(filled)).mask
        rng = np.random.default_rng(order_seed)
        for _ in range(100):
            mask = filled
            while True:
                forces = available_forces(g.neighbor_masks, mask, g.full_mask & ~mask)
                if not forces:
                    break
                mask |= 1 << forces[int(rng.integers(len(forces)))][1]
            assert mask == expected

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=6))
    def test_monotone_and_restriction_consistent(self, g):
        masks = range(1 << g.n)
        for small in masks:
            expected = closure_mask(g.neighbor_masks, small, g.full_mask & ~small)
            filled = VertexSet.from_mask(small)
            assert induced_closure(g, filled, filled.complement(g.n)).mask == expected
        for small, big in itertools.product(masks, repeat=2):
            if small & ~big:
                continue
            a = closure_mask(g.neighbor_masks, small, g.full_mask & ~small)
            b = closure_mask(g.neighbor_masks, big, g.full_mask & ~big)
            assert a & ~b == 0


class TestForts:
    def test_two_leaves_of_star(self, claw):
        assert is_fort(claw, VertexSet([1, 2]))

    def test_single_leaf_of_path(self):
        assert not is_fort(gen_path(3), VertexSet([0]))

    def test_double_star_leaf_pair(self, double_star):
        assert is_fort(double_star, VertexSet([6, 7]))

    def test_three_components_is_not_a_fort(self, claw):
        assert not is_fort(claw, VertexSet([1, 2, 3]))

    def test_empty_is_contract_violation(self, claw):
        with pytest.raises(ContractViolation):
            is_fort(claw, VertexSet())

    def test_find_fort_in_unfilled_leaves(self, double_star):
        fort = find_unfilled_fort(double_star, VertexSet(range(6)))
        assert fort == VertexSet([6, 7])

    def test_no_fort_when_everything_filled(self, double_star):
        assert find_unfilled_fort(double_star, double_star.vertices) is None

    def test_found_fort_is_valid(self, p5):
        fort = find_unfilled_fort(p5, VertexSet())
        assert fort is not None
        assert is_fort(p5, fort)

    def test_fort_search_limit(self):
        with pytest.raises(ResourceLimitExceeded):
            find_unfilled_fort(gen_path(10), VertexSet(), limit=8)

    def test_fort_stays_unfilled(self, double_star):
        filled = VertexSet(range(6))
        fort = find_unfilled_fort(double_star, filled)
        assert closure(double_star, filled).isdisjoint(fort)
