"""
q-analogue zero forcing

Exact solvers for the Z_q forcing game, tree algorithms for Z_1, structural
classification and the tree census, with a Gymnasium environment for
playing the game move by move.
"""

__version__ = "0.1.0"

from .config import INFINITY, SolverConfig
from .env import ZqForcingEnv
from .game import ZqGame
from .graph import Graph, VertexSet
from .solvers import solve_zq, z_number, zq_number
from .trees import z1_tree

__all__ = [
    "INFINITY",
    "Graph",
    "SolverConfig",
    "VertexSet",
    "ZqForcingEnv",
    "ZqGame",
    "solve_zq",
    "z1_tree",
    "z_number",
    "zq_number",
]
