"""
Tests for the oracle and player policies.
"""

import numpy as np

from zqforcing.game import MoveKind, ZqGame
from zqforcing.graph import VertexSet, closure_mask
from zqforcing.policies import random_oracle, random_player, stalling_oracle
from zqforcing.policies.stalling import cached_solver


def _fills(game, response):
    active = 0
    for comp in response:
        active |= comp.mask
    filled = game.filled.mask
    return closure_mask(game.graph.neighbor_masks, filled, active) != filled


class TestRandomPolicies:
    def test_oracle_returns_nonempty_subset(self, double_star):
        game = ZqGame(double_star, filled=VertexSet([0, 3, 4, 5]))
        announced = [VertexSet([1]), VertexSet([6])]
        rng = np.random.default_rng(0)
        for _ in range(20):
            response = random_oracle(game, announced, rng)
            assert response
            assert all(c in announced for c in response)

    def test_player_token_action(self, p5):
        game = ZqGame(p5)
        action = random_player(game, np.random.default_rng(0))
        assert action["kind"] == MoveKind.TOKEN.value
        assert 0 <= action["vertex"] < 5

    def test_player_announces_sometimes(self, claw):
        game = ZqGame(claw, filled=VertexSet([0]))
        rng = np.random.default_rng(1)
        kinds = {random_player(game, rng)["kind"] for _ in range(30)}
        assert kinds == {MoveKind.TOKEN.value, MoveKind.ANNOUNCE.value}


class TestStallingOracle:
    def test_stalls_with_more_components_than_frontier(self, double_star):
        game = ZqGame(double_star, filled=VertexSet([0, 3, 4, 5]))
        announced = [VertexSet([1]), VertexSet([2]), VertexSet([6])]
        response = stalling_oracle(game, announced, np.random.default_rng(0))
        assert not _fills(game, response)

    def test_prefers_a_non_progressing_response(self, claw):
        game = ZqGame(claw, filled=VertexSet([0]))
        announced = [VertexSet([1]), VertexSet([2])]
        response = stalling_oracle(game, announced, np.random.default_rng(0))
        assert response == announced

    def test_worst_case_when_every_response_progresses(self, double_star):
        game = ZqGame(double_star, filled=VertexSet([0, 3, 4, 5]))
        announced = [VertexSet([1]), VertexSet([6])]
        response = stalling_oracle(game, announced, np.random.default_rng(0))
        assert len(response) == 1
        assert _fills(game, response)

    def test_cached_solver_is_shared(self, claw):
        assert cached_solver(claw, 1) is cached_solver(claw, 1)
