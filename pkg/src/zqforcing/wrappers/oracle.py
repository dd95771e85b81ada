"""
OracleWrapper for the Z_q-Game

Turns ZqForcingEnv into a single-agent environment for the player by
answering every announcement with an oracle policy.
"""

from typing import Any, Callable, Dict, List, Sequence, Tuple

import gymnasium as gym
import numpy as np

from ..env import ZqForcingEnv
from ..game import MoveKind, ZqGame
from ..graph import VertexSet
from ..policies.stalling import stalling_oracle

OraclePolicy = Callable[[ZqGame, Sequence[VertexSet], np.random.Generator], List[VertexSet]]


class OracleWrapper(gym.Wrapper):
    """
    Wrapper that plays the oracle.

    After an announcement the oracle's response is applied within the same
    step, so the agent only ever sees player turns.
    """

    def __init__(self, env: ZqForcingEnv, oracle_policy: OraclePolicy | None = None):
        """
        Args:
            env: Base environment
            oracle_policy: Function returning the oracle's response (default: stalling_oracle)
        """
        super().__init__(env)
        self.oracle_policy = oracle_policy if oracle_policy is not None else stalling_oracle

    def step(
        self, action: Dict[str, Any]
    ) -> Tuple[Dict[str, np.ndarray], float, bool, bool, Dict[str, Any]]:
        """
        Take the agent's move, then the oracle's response if one is due.

        Raises:
            ValueError: If the agent tries to answer for the oracle
        """
        if int(action["kind"]) == MoveKind.RESPOND.value:
            raise ValueError("Expected a player move; oracle responses are made by the wrapper")

        obs, reward, term, trunc, info = self.env.step(action)

        base = self.env.unwrapped
        if not (term or trunc) and base.game.pending is not None:
            pending = base.game.pending
            returned = self.oracle_policy(base.game, pending, base.np_random)
            response = {
                "kind": MoveKind.RESPOND.value,
                "vertex": 0,
                "announce": base.encode_components(returned),
            }
            obs, oracle_reward, term, trunc, info = self.env.step(response)
            reward += oracle_reward

        return obs, reward, term, trunc, info

    def get_action_mask(self) -> np.ndarray:
        return self.env.unwrapped.get_action_mask()
