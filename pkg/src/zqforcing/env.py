"""
Z_q-Game Gymnasium Environment

The player's side of the Z_q-Game as a Gymnasium environment.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import gymnasium as gym
import numpy as np
from gymnasium import spaces

from .config import QValue, format_q
from .game import MoveKind, ZqGame
from .graph import Graph, VertexSet


class ZqForcingEnv(gym.Env):
    """
    Z_q-Game environment compatible with Gymnasium.

    Actions are dicts:
    - "kind": 0 token, 1 announce, 2 oracle response
    - "vertex": token target
    - "announce": components to announce (or return), each marked by any member vertex

    The filling rule is applied automatically after every move. Each token
    costs reward -1; the episode terminates when every vertex is filled.
    """

    metadata = {"render_modes": ["ansi", "human"]}

    def __init__(self, graph: Graph, q: QValue = 1, render_mode: Optional[str] = None):
        """
        Initialize the environment.

        Args:
            graph: Graph to play on
            q: Oracle parameter
            render_mode: "ansi", "human" or None
        """
        super().__init__()

        self.render_mode = render_mode
        self.game = ZqGame(graph, q)
        n = graph.n

        self.action_space = spaces.Dict(
            {
                "kind": spaces.Discrete(3),
                "vertex": spaces.Discrete(n),
                "announce": spaces.MultiBinary(n),
            }
        )

        # Observation space:
        #  - "filled": 1 = filled
        #  - "pending": 1 = inside a component waiting for the oracle
        #  - "action_mask": 1 = a token may be spent here
        self.observation_space = spaces.Dict(
            {
                "filled": spaces.MultiBinary(n),
                "pending": spaces.MultiBinary(n),
                "action_mask": spaces.MultiBinary(n),
            }
        )

    def reset(
        self, *, seed: int | None = None, options: dict[str, Any] | None = None
    ) -> Tuple[Dict[str, np.ndarray], dict[str, Any]]:
        """
        Reset to the empty filled set, or to options["filled"] if given.
        """
        super().reset(seed=seed, options=options)

        start = (options or {}).get("filled")
        self.game.reset(VertexSet(start) if start is not None else None)
        self.game.propagate()

        return self._get_observation(), self._get_info()

    def step(
        self, action: Dict[str, Any]
    ) -> Tuple[Dict[str, np.ndarray], float, bool, bool, Dict[str, Any]]:
        """
        Apply one player or oracle move.

        Returns:
            Tuple of (observation, reward, terminated, truncated, info)

        Raises:
            ValueError: If the action is not legal in the current state
        """
        kind = MoveKind(int(action["kind"]))
        reward = 0.0

        if kind is MoveKind.TOKEN:
            self.game.spend_token(int(action["vertex"]))
            reward = -1.0
        elif kind is MoveKind.ANNOUNCE:
            self.game.announce(self._decode(action["announce"], self.game.components))
        elif kind is MoveKind.RESPOND:
            if self.game.pending is None:
                raise ValueError("Invalid response: no announcement is pending")
            self.game.respond(self._decode(action["announce"], self.game.pending))
        else:
            raise ValueError(f"Invalid action kind: {kind}")

        if self.game.pending is None:
            self.game.propagate()

        terminated = self.game.game_over
        return self._get_observation(), reward, terminated, False, self._get_info()

    def render(self) -> Optional[str]:
        text = self.game.render()
        if self.render_mode == "human":
            print(text)
            return None
        if self.render_mode == "ansi":
            return text
        return None

    @staticmethod
    def _decode(marks: Any, candidates: Sequence[VertexSet]) -> List[VertexSet]:
        marked = {int(v) for v in np.flatnonzero(np.asarray(marks))}
        chosen = [comp for comp in candidates if any(v in comp for v in marked)]
        covered = set().union(*(set(comp) for comp in chosen)) if chosen else set()
        if marked - covered:
            raise ValueError(f"Invalid component marks: {sorted(marked - covered)}")
        return chosen

    def encode_components(self, comps: Sequence[VertexSet]) -> np.ndarray:
        """Mark each component by its smallest vertex."""
        marks = np.zeros(self.game.graph.n, dtype=np.int8)
        for comp in comps:
            marks[comp.min()] = 1
        return marks

    def _get_observation(self) -> Dict[str, np.ndarray]:
        n = self.game.graph.n
        filled = np.zeros(n, dtype=np.int8)
        filled[list(self.game.filled)] = 1
        pending = np.zeros(n, dtype=np.int8)
        for comp in self.game.pending or ():
            pending[list(comp)] = 1
        return {"filled": filled, "pending": pending, "action_mask": self._get_action_mask()}

    def _get_info(self) -> Dict[str, Any]:
        return {
            "q": format_q(self.game.q),
            "tokens_spent": self.game.tokens_spent,
            "components": [sorted(c) for c in self.game.components],
            "pending": [sorted(c) for c in self.game.pending] if self.game.pending else None,
            "can_announce": self.game.can_announce,
            "oracle_progressed": self.game.oracle_progressed,
            "game_over": self.game.game_over,
        }

    def _get_action_mask(self) -> np.ndarray:
        mask = np.zeros(self.game.graph.n, dtype=np.int8)
        if self.game.pending is None and not self.game.game_over:
            mask[list(self.game.unfilled)] = 1
        return mask

    def get_action_mask(self) -> np.ndarray:
        return self._get_action_mask()

    def close(self) -> None:
        pass
