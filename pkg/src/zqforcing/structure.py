"""
Structure

Recognizers for the graph families with small Z_q values.

- Z_0(G) = 1 exactly for trees; Z_q(G) = 1 (q >= 1) exactly for paths
- a tree has Z_1 = 2 exactly when it is a comb that is not a path, and the
  two tokens then sit on a pair of initial vertices
- for q >= 2, Z_q(G) = 2 exactly when Z(G) = 2 (zig-zag paths)
- the remaining Z_1 = 2 graphs are pick combs
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from .config import QValue, SolverConfig, format_q, parse_q
from .errors import ContractViolation
from .graph import Graph, VertexSet, _bits, component_masks
from .policies.stalling import cached_solver
from .solvers import z_number, zq_number
from .trees import RootedTree, z1_tree

logger = logging.getLogger(__name__)


def _require_tree(t: Graph, what: str) -> None:
    if not t.is_tree():
        raise ContractViolation(f"{what} needs a tree, got {t!r}")


@dataclass(frozen=True)
class Tooth:
    """Pendant path hanging from a spine vertex, listed outward."""

    spine_vertex: int
    path: Tuple[int, ...]


@dataclass(frozen=True)
class CombDecomposition:
    """
    A comb: spine path through every degree-3 vertex plus pendant teeth.

    Attributes:
        spine: Ordered spine vertices (between the outermost degree-3 vertices,
            or the whole tree for a path)
        teeth: Pendant paths off the spine
        initial_pairs: Every pair (u, v), u < v, whose connecting path has all
            degree-3 vertices as internal vertices
    """

    spine: Tuple[int, ...]
    teeth: Tuple[Tooth, ...]
    initial_pairs: Tuple[Tuple[int, int], ...]


def _tree_path(t: Graph, u: int, v: int) -> List[int]:
    return RootedTree.from_graph(t, u).path_to_root(v)[::-1]


def is_initial_pair(t: Graph, u: int, v: int) -> bool:
    """Whether every degree-3 vertex is internal to the u-v path."""
    _require_tree(t, "is_initial_pair")
    if u == v:
        return False
    internal = set(_tree_path(t, u, v)[1:-1])
    return all(w in internal for w in range(t.n) if t.degree(w) == 3)


def initial_pairs(t: Graph) -> List[Tuple[int, int]]:
    """All initial pairs (u, v) with u < v."""
    _require_tree(t, "initial_pairs")
    deg3 = {w for w in range(t.n) if t.degree(w) == 3}
    pairs = []
    for u in range(t.n):
        rooted = RootedTree.from_graph(t, u)
        for v in range(u + 1, t.n):
            internal = set(rooted.path_to_root(v)[1:-1])
            if deg3 <= internal:
                pairs.append((u, v))
    return pairs


def _steiner_mask(t: Graph, terminals: int) -> int:
    """Smallest subtree containing the terminals (repeated leaf pruning)."""
    nbr = t.neighbor_masks
    keep = t.full_mask
    changed = True
    while changed:
        changed = False
        for w in _bits(keep & ~terminals):
            if (nbr[w] & keep).bit_count() <= 1:
                keep &= ~(1 << w)
                changed = True
    return keep


def _order_path(t: Graph, mask: int) -> Tuple[int, ...]:
    nbr = t.neighbor_masks
    members = list(_bits(mask))
    ends = [w for w in members if (nbr[w] & mask).bit_count() <= 1]
    order = [ends[0]]
    prev = -1
    while len(order) < len(members):
        step = [x for x in _bits(nbr[order[-1]] & mask) if x != prev]
        prev = order[-1]
        order.append(step[0])
    return tuple(order)


def comb_decompose(t: Graph) -> Optional[CombDecomposition]:
    """
    Decompose a tree as a comb.

    Returns:
        The decomposition with all initial pairs, or None if some vertex has
        degree >= 4 or the degree-3 vertices do not lie on one path

    Raises:
        ContractViolation: If t is not a tree
    """
    _require_tree(t, "comb_decompose")
    if t.max_degree() >= 4:
        return None
    deg3 = 0
    for w in range(t.n):
        if t.degree(w) == 3:
            deg3 |= 1 << w

    spine_mask = _steiner_mask(t, deg3) if deg3 else t.full_mask
    nbr = t.neighbor_masks
    if any((nbr[w] & spine_mask).bit_count() > 2 for w in _bits(spine_mask)):
        return None
    spine = _order_path(t, spine_mask)

    teeth = []
    for comp in component_masks(nbr, t.full_mask & ~spine_mask):
        anchor = next(s for s in spine if nbr[s] & comp)
        start = next(w for w in _bits(comp) if nbr[w] >> anchor & 1)
        path = [start]
        prev = anchor
        while True:
            step = [x for x in _bits(nbr[path[-1]] & comp) if x != prev]
            if not step:
                break
            prev = path[-1]
            path.append(step[0])
        teeth.append(Tooth(anchor, tuple(path)))

    teeth.sort(key=lambda tooth: (spine.index(tooth.spine_vertex), tooth.path))
    return CombDecomposition(spine, tuple(teeth), tuple(initial_pairs(t)))


class Label(Enum):
    PATH = "path"
    TREE = "tree"
    COMB = "comb"
    ZIGZAG = "zigzag"
    PICK_COMB = "pick-comb"
    OTHER = "other"


@dataclass(frozen=True)
class Classification:
    """
    Structural label of a connected graph with the values supporting it.

    Attributes:
        label: Family label
        q: Oracle parameter the value refers to
        value: Z_q of the graph
        witnesses: Certificates such as "z", "comb" or "initial_pair"
    """

    label: Label
    q: QValue
    value: int
    witnesses: Dict[str, Any] = field(default_factory=dict)

    def describe(self) -> str:
        parts = [f"label={self.label.value}", f"Z_{format_q(self.q)}={self.value}"]
        for key, item in self.witnesses.items():
            if isinstance(item, CombDecomposition):
                parts.append(f"spine={list(item.spine)}")
            else:
                parts.append(f"{key}={item}")
        return " ".join(parts)


def classify(g: Graph, q: QValue, config: Optional[SolverConfig] = None) -> Classification:
    """
    Compute Z_q and label the graph.

    Labels are chosen in priority order path, comb, zigzag, pick-comb,
    tree, other. Zig-zag and pick-comb labels are operational: they rest on
    solver values, not on a structural decomposition.

    Raises:
        ContractViolation: If g is disconnected
    """
    if not g.is_connected():
        raise ContractViolation("classify needs a connected graph")
    q = parse_q(q)
    cfg = (config or SolverConfig()).with_q(q)

    if g.is_tree() and q == 1:
        value = z1_tree(g)
    elif g.is_tree() and q == 0:
        value = 1
    else:
        value = zq_number(g, q, cfg)

    witnesses: Dict[str, Any] = {}
    if g.is_path():
        label = Label.PATH
    elif g.is_tree():
        label = Label.TREE
        if q == 1 and value == 2:
            decomposition = comb_decompose(g)
            if decomposition is not None:
                label = Label.COMB
                witnesses["comb"] = decomposition
                witnesses["initial_pair"] = decomposition.initial_pairs[0]
        elif q >= 2 and value == 2:
            z = value if math.isinf(q) else z_number(g, cfg)
            witnesses["z"] = z
            if z == 2:
                label = Label.ZIGZAG
    elif value == 2 and q >= 1:
        z = value if math.isinf(q) else z_number(g, cfg)
        witnesses["z"] = z
        if z == 2:
            label = Label.ZIGZAG
        elif q == 1:
            label = Label.PICK_COMB
        else:
            label = Label.OTHER
    else:
        label = Label.OTHER

    logger.debug("classified n=%d as %s (Z_%s=%d)", g.n, label.value, format_q(q), value)
    return Classification(label, q, value, witnesses)


def initial_pair_wins(t: Graph, u: int, v: int) -> bool:
    """Whether tokens on exactly {u, v} win the Z_1-Game with no further tokens."""
    return cached_solver(t, 1).value(VertexSet((u, v))) == 0
