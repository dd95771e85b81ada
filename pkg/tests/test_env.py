"""
Tests for the Gymnasium environment, the oracle wrapper and registration.
"""

import gymnasium as gym
import numpy as np
import pytest

import zqforcing.env_registration  # noqa: F401
from zqforcing.config import SolverConfig
from zqforcing.env import ZqForcingEnv
from zqforcing.game import MoveKind
from zqforcing.policies import random_oracle, random_player
from zqforcing.solvers import ZqSolver
from zqforcing.wrappers import OracleWrapper


def _action(n, kind=MoveKind.TOKEN, vertex=0, marks=()):
    announce = np.zeros(n, dtype=np.int8)
    announce[list(marks)] = 1
    return {"kind": kind.value, "vertex": vertex, "announce": announce}


class TestEnvironment:
    def test_reset(self, claw):
        env = ZqForcingEnv(claw, q=1)
        obs, info = env.reset(seed=0)
        assert obs["filled"].tolist() == [0, 0, 0, 0]
        assert obs["action_mask"].tolist() == [1, 1, 1, 1]
        assert info["q"] == "1"
        assert info["tokens_spent"] == 0
        assert env.observation_space.contains(obs)

    def test_reset_with_filled_propagates(self, p5):
        env = ZqForcingEnv(p5)
        obs, info = env.reset(options={"filled": [0]})
        assert obs["filled"].tolist() == [1, 1, 1, 1, 1]
        assert info["game_over"]

    def test_token_reward_and_termination(self, p5):
        env = ZqForcingEnv(p5)
        env.reset()
        _, reward, terminated, truncated, info = env.step(_action(5, vertex=0))
        assert reward == -1.0
        assert terminated and not truncated
        assert info["tokens_spent"] == 1

    def test_announce_then_respond(self, claw):
        env = ZqForcingEnv(claw)
        env.reset(options={"filled": [0]})
        obs, reward, terminated, _, info = env.step(_action(4, MoveKind.ANNOUNCE, marks=(1, 2)))
        assert reward == 0.0
        assert not terminated
        assert info["pending"] == [[1], [2]]
        assert obs["pending"].tolist() == [0, 1, 1, 0]
        assert obs["action_mask"].tolist() == [0, 0, 0, 0]

        obs, _, _, _, info = env.step(_action(4, MoveKind.RESPOND, marks=(2,)))
        assert obs["filled"].tolist() == [1, 0, 1, 0]
        assert info["oracle_progressed"]
        assert info["pending"] is None

    def test_response_without_announcement(self, claw):
        env = ZqForcingEnv(claw)
        env.reset()
        with pytest.raises(ValueError):
            env.step(_action(4, MoveKind.RESPOND, marks=(1,)))

    def test_marks_outside_components(self, claw):
        env = ZqForcingEnv(claw)
        env.reset(options={"filled": [0]})
        with pytest.raises(ValueError):
            env.step(_action(4, MoveKind.ANNOUNCE, marks=(0, 1)))

    def test_render_ansi(self, claw):
        env = ZqForcingEnv(claw, render_mode="ansi")
        env.reset()
        assert env.render().startswith("q=1 tokens=0")

    def test_registered(self, claw):
        env = gym.make("ZqForcing-v0", graph=claw, q=1)
        obs, _ = env.reset(seed=0)
        assert obs["filled"].shape == (4,)
        env.close()


class TestOracleWrapper:
    def test_answers_announcements(self, double_star):
        env = OracleWrapper(ZqForcingEnv(double_star), random_oracle)
        env.reset(seed=1, options={"filled": [0, 5]})
        obs, _, _, _, info = env.step(_action(8, MoveKind.ANNOUNCE, marks=(1, 6)))
        assert info["pending"] is None
        assert info["oracle_progressed"]
        assert obs["filled"].sum() > 4

    def test_rejects_player_responses(self, claw):
        env = OracleWrapper(ZqForcingEnv(claw))
        env.reset()
        with pytest.raises(ValueError):
            env.step(_action(4, MoveKind.RESPOND))

    def test_optimal_play_spends_at_most_the_value(self, double_star):
        solver = ZqSolver(double_star, SolverConfig(q=1))
        value = solver.solve().value
        env = OracleWrapper(ZqForcingEnv(double_star))
        env.reset(seed=0)
        base = env.unwrapped
        spent = 0
        terminated = False
        while not terminated:
            move = solver.best_move(base.game.filled)
            if move.kind is MoveKind.TOKEN:
                action = _action(8, vertex=move.vertex)
            else:
                action = _action(8, MoveKind.ANNOUNCE, marks=[c.min() for c in move.announced])
            _, reward, terminated, _, _ = env.step(action)
            spent -= int(reward)
        assert spent <= value == 3

    def test_random_player_finishes(self, spider):
        rng = np.random.default_rng(7)
        env = OracleWrapper(ZqForcingEnv(spider), random_oracle)
        env.reset(seed=7)
        terminated = False
        while not terminated:
            _, _, terminated, _, _ = env.step(random_player(env.unwrapped.game, rng))
        assert env.unwrapped.game.game_over
        assert env.unwrapped.game.tokens_spent <= spider.n
