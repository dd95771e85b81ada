"""
Adversarial Oracle

Stall when possible; otherwise answer with the response that leaves the
player the most work.
"""

import functools
import itertools
import logging
from typing import List, Sequence

import numpy as np

from ..config import QValue, SolverConfig
from ..game import ZqGame
from ..graph import Graph, VertexSet, closure_mask
from ..solvers import ZqSolver, stalling_response

logger = logging.getLogger(__name__)

# exact worst-case responses are only searched up to this size
EXACT_ORACLE_LIMIT = 14


@functools.lru_cache(maxsize=32)
def cached_solver(graph: Graph, q: QValue) -> ZqSolver:
    return ZqSolver(graph, SolverConfig(q=q))


def _responses(announced: Sequence[VertexSet]):
    for size in range(1, len(announced) + 1):
        yield from itertools.combinations(announced, size)


def stalling_oracle(
    game: ZqGame, announced: Sequence[VertexSet], rng: np.random.Generator
) -> List[VertexSet]:
    """
    Adversarial oracle response.

    1. If more components are announced than filled vertices touch them,
       the incidence-array response enables no force
    2. Otherwise a response that enables no force, if one exists
    3. Otherwise the response with the largest exact remaining value
       (graphs up to EXACT_ORACLE_LIMIT vertices)
    4. Otherwise the response that fills the fewest vertices
    """
    g = game.graph
    nbr = g.neighbor_masks
    filled = game.filled.mask
    touching = 0
    for comp in announced:
        touching |= comp.mask
    frontier = [v for v in game.filled if nbr[v] & touching]
    if len(announced) > len(frontier):
        return stalling_response(g, frontier, announced)

    outcomes = []
    for response in _responses(announced):
        active = 0
        for comp in response:
            active |= comp.mask
        after = closure_mask(nbr, filled, active)
        if after == filled:
            return list(response)
        outcomes.append((response, after))

    if g.n <= EXACT_ORACLE_LIMIT:
        solver = cached_solver(g, game.q)
        response, _ = max(outcomes, key=lambda item: solver.value(VertexSet.from_mask(item[1])))
        return list(response)

    logger.debug("oracle falls back to the smallest gain on n=%d", g.n)
    response, _ = min(outcomes, key=lambda item: item[1].bit_count())
    return list(response)
