"""
Random Policies for the Z_q-Game

Uniform choices for the oracle and for the player.
"""

from typing import Any, Dict, List, Sequence

import numpy as np

from ..game import MoveKind, ZqGame
from ..graph import VertexSet


def random_oracle(
    game: ZqGame, announced: Sequence[VertexSet], rng: np.random.Generator
) -> List[VertexSet]:
    """
    Return a uniformly random nonempty subset of the announced components.

    Args:
        game: Current game state
        announced: Components handed to the oracle
        rng: Random number generator

    Returns:
        Nonempty list of announced components
    """
    k = len(announced)
    pick = int(rng.integers(1, 1 << k))
    return [comp for i, comp in enumerate(announced) if pick >> i & 1]


def random_player(game: ZqGame, rng: np.random.Generator) -> Dict[str, Any]:
    """
    Return a random legal player action in ZqForcingEnv format.

    Announces a random legal announcement half of the time when one exists,
    otherwise spends a token on a random unfilled vertex.
    """
    n = game.graph.n
    action: Dict[str, Any] = {
        "kind": MoveKind.TOKEN.value,
        "vertex": 0,
        "announce": np.zeros(n, dtype=np.int8),
    }
    announcements = list(game.legal_announcements()) if game.can_announce else []
    if announcements and rng.random() < 0.5:
        chosen = announcements[int(rng.integers(len(announcements)))]
        action["kind"] = MoveKind.ANNOUNCE.value
        for comp in chosen:
            action["announce"][comp.min()] = 1
        return action
    unfilled = list(game.unfilled)
    action["vertex"] = int(rng.choice(unfilled))
    return action
