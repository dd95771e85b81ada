"""
Tests for the tree algorithms.
"""

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import trees
from zqforcing import trees as tree_module
from zqforcing.errors import ContractViolation, ResourceLimitExceeded
from zqforcing.generators import gen_complete_binary, gen_cycle, gen_path, gen_spider, gen_star
from zqforcing.graph import Graph, VertexSet
from zqforcing.policies import random_oracle
from zqforcing.solvers import z_number, zq_number
from zqforcing.trees import (
    RootedTree,
    eq1_direct,
    f_values,
    is_normalized,
    leafpair_formula,
    normalize_tree_state,
    path_cover_number,
    root_values,
    z1_strategy_root,
    z1_tree,
)
from zqforcing.verify import check_tree_oracle


class TestRootedTree:
    def test_parent_and_children(self, claw):
        rooted = RootedTree.from_graph(claw, 1)
        assert rooted.parent[1] == -1
        assert rooted.parent[0] == 1
        assert rooted.children[0] == (2, 3)
        assert rooted.path_to_root(3) == [3, 0, 1]

    def test_cycle_rejected(self):
        with pytest.raises(ContractViolation):
            RootedTree.from_graph(gen_cycle(4), 0)


class TestFValues:
    def test_leaves_are_zero(self, double_star):
        table = f_values(RootedTree.from_graph(double_star, 3))
        for leaf in double_star.leaves():
            assert table[leaf] == 0

    def test_path_rooted_at_endpoint(self, p5):
        table = f_values(RootedTree.from_graph(p5, 0))
        assert table.values == (0, 0, 0, 0, 0)

    def test_path_rooted_inside(self, p5):
        assert f_values(RootedTree.from_graph(p5, 2))[2] == 1

    def test_binary_depth_two(self):
        table = f_values(RootedTree.from_graph(gen_complete_binary(2), 0))
        assert table[1] == table[2] == 1
        assert table[0] == 2


class TestZ1Tree:
    def test_double_star(self, double_star):
        assert z1_tree(double_star) == 3

    @pytest.mark.parametrize("n", [1, 2, 3, 7])
    def test_paths(self, n):
        assert z1_tree(gen_path(n)) == 1

    @pytest.mark.parametrize("d", [2, 3, 4, 6])
    def test_complete_binary(self, d):
        assert z1_tree(gen_complete_binary(d)) == d

    def test_non_tree(self):
        with pytest.raises(ContractViolation):
            z1_tree(gen_cycle(5))

    def test_root_values(self, double_star):
        values = root_values(double_star)
        assert sorted(values) == list(range(double_star.n))
        assert 1 + min(values.values()) == max(values.values())

    def test_strategy_root_minimizes(self, double_star):
        values = root_values(double_star)
        assert values[z1_strategy_root(double_star)] == min(values.values())

    @settings(max_examples=40, deadline=None)
    @given(trees(min_n=1, max_n=8))
    def test_matches_game_solver(self, t):
        assert z1_tree(t) == zq_number(t, 1)

    @settings(max_examples=60, deadline=None)
    @given(trees(min_n=3, max_n=14))
    def test_rerooting_matches_direct_rooting(self, t):
        values = root_values(t)
        for v in range(t.n):
            assert values[v] == f_values(RootedTree.from_graph(t, v))[v]
        assert len(set(values.values())) > 1

    def test_oracle_check_catches_missing_rank_offset(self, monkeypatch):
        assert check_tree_oracle(7).ok
        monkeypatch.setattr(tree_module, "_combine_children", lambda values: max(values, default=0))
        assert not check_tree_oracle(7).ok


class TestClosedForms:
    def test_eq1_double_star(self, double_star):
        assert eq1_direct(double_star) == 3

    def test_eq1_path(self, p5):
        assert eq1_direct(p5) == 1

    def test_eq1_claw(self, claw):
        assert eq1_direct(claw) == 2

    def test_eq1_limit(self):
        with pytest.raises(ResourceLimitExceeded):
            eq1_direct(gen_path(13))

    def test_eq1_too_small(self):
        with pytest.raises(ContractViolation):
            eq1_direct(gen_path(2))

    def test_leafpair_double_star(self, double_star):
        assert leafpair_formula(double_star) == 3

    def test_leafpair_spider(self, spider):
        assert leafpair_formula(spider) == 2

    def test_leafpair_binary(self):
        assert leafpair_formula(gen_complete_binary(3)) == 3

    def test_leafpair_rejects_paths(self, p5):
        with pytest.raises(ContractViolation):
            leafpair_formula(p5)

    @settings(max_examples=40, deadline=None)
    @given(trees(min_n=3, max_n=9))
    def test_formulas_agree(self, t):
        expected = z1_tree(t)
        assert eq1_direct(t) == expected
        if not t.is_path():
            assert leafpair_formula(t) == expected


class TestPathCover:
    def test_spider(self):
        assert path_cover_number(gen_spider(3)) == 5

    def test_path(self, p5):
        assert path_cover_number(p5) == 1

    def test_claw(self, claw):
        assert path_cover_number(claw) == 2

    def test_single_vertex(self):
        assert path_cover_number(Graph(1)) == 1

    @settings(max_examples=40, deadline=None)
    @given(trees(min_n=1, max_n=10))
    def test_equals_zero_forcing_number(self, t):
        assert path_cover_number(t) == z_number(t)


class TestNormalization:
    def test_double_star(self, double_star):
        result = normalize_tree_state(double_star, VertexSet([0, 5]), rng=np.random.default_rng(0))
        unfilled = double_star.full_mask & ~result.mask
        hubs = [c for c in (3, 4) if (double_star.neighbor_masks[c] & unfilled).bit_count() >= 2]
        assert len(hubs) == 1
        assert is_normalized(double_star, result)

    def test_random_oracle(self, double_star):
        result = normalize_tree_state(
            double_star, VertexSet([0, 5]), oracle=random_oracle, rng=np.random.default_rng(3)
        )
        assert is_normalized(double_star, result)

    @pytest.mark.parametrize("seed", [0, 4])
    def test_path_fills_from_endpoint(self, p5, seed):
        assert normalize_tree_state(p5, VertexSet([seed])) == p5.vertices

    def test_path_interior_seed_is_single_hub(self, p5):
        result = normalize_tree_state(p5, VertexSet([2]))
        assert result == VertexSet([2])
        assert is_normalized(p5, result)

    def test_everything_filled(self, claw):
        assert normalize_tree_state(claw, claw.vertices) == claw.vertices

    def test_empty_filled(self, claw):
        with pytest.raises(ContractViolation):
            normalize_tree_state(claw, VertexSet())

    def test_star_center_already_normalized(self):
        star = gen_star(4)
        assert normalize_tree_state(star, VertexSet([0])) == VertexSet([0])

    @settings(max_examples=40, deadline=None)
    @given(trees(min_n=2, max_n=12))
    def test_postcondition_on_random_trees(self, t):
        rng = np.random.default_rng(t.n)
        seeds = VertexSet(int(v) for v in rng.choice(t.n, size=min(2, t.n), replace=False))
        result = normalize_tree_state(t, seeds, oracle=random_oracle, rng=rng)
        assert seeds <= result
        assert is_normalized(t, result)
