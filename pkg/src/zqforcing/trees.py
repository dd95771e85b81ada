"""
Tree Algorithms

Z_1 on trees in polynomial time.

For a tree T rooted at v and a vertex w with child subtrees valued
c_0 >= c_1 >= ... >= c_k:

    f_{T,v}(w) = max_i (i + c_i)        (0 when w has no children)

and Z_1(T) = max_v f_{T,v}(v) = 1 + min_v f_{T,v}(v) for |T| >= 3.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ContractViolation, ResourceLimitExceeded
from .game import ZqGame
from .graph import Graph, VertexSet, _bits

logger = logging.getLogger(__name__)

DEFAULT_EQ1_LIMIT = 12

OraclePolicy = Callable[[ZqGame, Sequence[VertexSet], np.random.Generator], List[VertexSet]]


def _require_tree(t: Graph, what: str) -> None:
    if not t.is_tree():
        raise ContractViolation(f"{what} needs a tree, got {t!r}")


@dataclass(frozen=True)
class RootedTree:
    """
    A tree with a chosen root.

    Attributes:
        tree: Underlying tree
        root: Root vertex
        parent: parent[w] for every vertex (-1 at the root)
        children: children[w] in ascending vertex order
        order: Vertices in breadth-first order from the root
    """

    tree: Graph
    root: int
    parent: Tuple[int, ...]
    children: Tuple[Tuple[int, ...], ...]
    order: Tuple[int, ...]

    @classmethod
    def from_graph(cls, t: Graph, root: int) -> "RootedTree":
        _require_tree(t, "RootedTree")
        if not 0 <= root < t.n:
            raise ContractViolation(f"root {root} is not a vertex")
        parent = [-1] * t.n
        children: List[List[int]] = [[] for _ in range(t.n)]
        order = [root]
        for w in order:
            for x in t.neighbors(w):
                if x != parent[w]:
                    parent[x] = w
                    children[w].append(x)
                    order.append(x)
        return cls(t, root, tuple(parent), tuple(map(tuple, children)), tuple(order))

    def path_to_root(self, w: int) -> List[int]:
        path = [w]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path


@dataclass(frozen=True)
class FTable:
    """Per-vertex values f_{T,root}(w)."""

    root: int
    values: Tuple[int, ...]

    def __getitem__(self, w: int) -> int:
        return self.values[w]


def _combine_children(child_values: Sequence[int]) -> int:
    """max_i (i + c_i) over child values sorted descending; 0 without children."""
    best = 0
    for i, c in enumerate(sorted(child_values, reverse=True)):
        best = max(best, i + c)
    return best


def f_values(t: RootedTree) -> FTable:
    """
    Bottom-up evaluation of f_{T,root} at every vertex.

    Children are ranked by (value desc, vertex asc); the result does not
    depend on how ties are ordered.
    """
    values = [0] * t.tree.n
    for w in reversed(t.order):
        values[w] = _combine_children([values[c] for c in t.children[w]])
    return FTable(t.root, tuple(values))


def root_values(t: Graph) -> Dict[int, int]:
    """
    The map v -> f_{T,v}(v) for every vertex, by rerooting.

    Each neighbor's value is the value of its branch away from v, so all
    roots come out of one downward and one upward pass.
    """
    _require_tree(t, "root_values")
    rooted = RootedTree.from_graph(t, 0)
    down = f_values(rooted).values
    up = [0] * t.n
    result: Dict[int, int] = {}
    for v in rooted.order:
        outer = [up[v]] if v != rooted.root else []
        branch = [down[c] for c in rooted.children[v]]
        result[v] = _combine_children(branch + outer)
        for i, c in enumerate(rooted.children[v]):
            up[c] = _combine_children(branch[:i] + branch[i + 1 :] + outer)
    return dict(sorted(result.items()))


def z1_tree(t: Graph) -> int:
    """
    Z_1(T) = max_v f_{T,v}(v).

    Raises:
        ContractViolation: If t is not a tree
    """
    _require_tree(t, "z1_tree")
    if t.n <= 2:
        return 1
    return max(root_values(t).values())


def z1_strategy_root(t: Graph) -> int:
    """First token of the optimal tree strategy: a vertex minimizing f_{T,v}(v)."""
    _require_tree(t, "z1_strategy_root")
    values = root_values(t)
    return min(values, key=lambda v: (values[v], v))


# ---------------------------------------------------------------------------
# closed-form cross-checks
# ---------------------------------------------------------------------------


def _connected_subsets(nbr: Sequence[int], v: int) -> List[int]:
    """All connected vertex sets containing v, each generated once."""
    found: List[int] = []

    def grow(s: int, ext: int, banned: int) -> None:
        found.append(s)
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            new_s = s | low
            grow(new_s, (ext | nbr[w]) & ~new_s & ~banned, banned)
            banned |= low

    grow(1 << v, nbr[v], 1 << v)
    return found


def _min_leaf_path(nbr: Sequence[int], s: int, v: int) -> int:
    """min over paths from v to a leaf of S (other than v) of sum(deg_S(w) - 2)."""
    if s == 1 << v:
        return -2
    best = math.inf
    stack = [(v, -1, (nbr[v] & s).bit_count() - 2)]
    while stack:
        w, parent, acc = stack.pop()
        nexts = [x for x in _bits(nbr[w] & s) if x != parent]
        if not nexts and w != v:
            best = min(best, acc)
            continue
        for x in nexts:
            stack.append((x, w, acc + (nbr[x] & s).bit_count() - 2))
    return int(best)


def eq1_direct(t: Graph, limit: int = DEFAULT_EQ1_LIMIT) -> int:
    """
    Z_1(T) = 2 + max_v max_{S ∋ v} min_P sum_{w ∈ P} (deg_S(w) - 2).

    S ranges over subtrees containing v and P over paths from v to a leaf
    of S; S = {v} counts as -2. Exponential in n.

    Raises:
        ContractViolation: If t is not a tree on at least 3 vertices
        ResourceLimitExceeded: If t.n > limit
    """
    _require_tree(t, "eq1_direct")
    if t.n < 3:
        raise ContractViolation("eq1_direct needs at least 3 vertices")
    if t.n > limit:
        raise ResourceLimitExceeded("eq1_direct vertex count", limit, t.n)
    nbr = t.neighbor_masks
    best = -2
    for v in range(t.n):
        for s in _connected_subsets(nbr, v):
            best = max(best, _min_leaf_path(nbr, s, v))
    return 2 + best


def _best_subtree_value(t: Graph, keep: int, v: int) -> int:
    """
    max over subtrees S' of T[keep] containing v of the min leaf-path sum.

    A non-root vertex with j chosen children contributes j - 1 (-1 as a
    leaf); the root contributes j - 2. Keeping the j best children is optimal.
    """
    nbr = t.neighbor_masks
    order = [v]
    parent = {v: -1}
    for w in order:
        for x in _bits(nbr[w] & keep):
            if x != parent[w]:
                parent[x] = w
                order.append(x)

    g: Dict[int, int] = {}
    for w in reversed(order):
        kids = sorted((g[x] for x in _bits(nbr[w] & keep) if x != parent[w]), reverse=True)
        base = -2 if w == v else -1
        best = base
        for j, value in enumerate(kids, start=1):
            best = max(best, base + j + value)
        g[w] = best
    return g[v]


def leafpair_formula(t: Graph) -> int:
    """
    Z_1(T) = 2 + min over leaf pairs (u1, u2) of max over internal vertices v
    of the u1-u2 path of (2 + best subtree value of S at v), where S is T
    without the branches at v containing u1 and u2.

    Raises:
        ContractViolation: If t is not a tree or is a path
    """
    _require_tree(t, "leafpair_formula")
    if t.is_path():
        raise ContractViolation("leafpair_formula is defined for trees that are not paths")
    leaves = t.leaves()
    nbr = t.neighbor_masks
    full = t.full_mask
    best = math.inf
    for i, u1 in enumerate(leaves):
        rooted = RootedTree.from_graph(t, u1)
        for u2 in leaves[i + 1 :]:
            path = rooted.path_to_root(u2)
            worst = -math.inf
            for k in range(1, len(path) - 1):
                v = path[k]
                cut = (1 << path[k - 1]) | (1 << path[k + 1])
                removed = 0
                for side in _bits(cut):
                    removed |= _branch_mask(nbr, side, v)
                value = 2 + _best_subtree_value(t, full & ~removed, v)
                worst = max(worst, value)
                if worst >= best:
                    break
            best = min(best, worst)
    return 2 + int(best)


def _branch_mask(nbr: Sequence[int], start: int, blocked: int) -> int:
    """Vertices reachable from start without passing through blocked."""
    seen = 1 << start
    frontier = seen
    while frontier:
        grow = 0
        for w in _bits(frontier):
            grow |= nbr[w]
        frontier = grow & ~seen & ~(1 << blocked)
        seen |= frontier
    return seen


def path_cover_number(t: Graph) -> int:
    """
    Minimum number of vertex-disjoint paths covering a tree.

    n minus the largest edge set with every vertex of degree at most 2,
    computed leaf-up with per-vertex states for 0, 1 or 2 chosen child edges.
    """
    _require_tree(t, "path_cover_number")
    rooted = RootedTree.from_graph(t, 0)
    best: List[Tuple[float, float, float]] = [(0, -math.inf, -math.inf)] * t.n
    for w in reversed(rooted.order):
        base = 0.0
        gains = []
        for c in rooted.children[w]:
            b0, b1, b2 = best[c]
            whole = max(b0, b1, b2)
            base += whole
            gains.append(1 + max(b0, b1) - whole)
        gains.sort(reverse=True)
        one = base + gains[0] if gains else -math.inf
        two = base + gains[0] + gains[1] if len(gains) >= 2 else -math.inf
        best[w] = (base, one, two)
    return t.n - int(max(best[rooted.root]))


# ---------------------------------------------------------------------------
# free-move normalization
# ---------------------------------------------------------------------------


def _hubs(game: ZqGame) -> List[int]:
    unfilled = game.unfilled.mask
    nbr = game.graph.neighbor_masks
    return [v for v in game.filled if (nbr[v] & unfilled).bit_count() >= 2]


def is_normalized(t: Graph, filled: VertexSet) -> bool:
    """All filled, or exactly one filled vertex with >= 2 unfilled neighbors and no force."""
    if filled.mask == t.full_mask:
        return True
    nbr = t.neighbor_masks
    unfilled = t.full_mask & ~filled.mask
    counts = [(nbr[v] & unfilled).bit_count() for v in filled]
    return counts.count(1) == 0 and sum(1 for c in counts if c >= 2) == 1


def _progressive_pair(game: ZqGame) -> Optional[Tuple[VertexSet, VertexSet]]:
    """Two unfilled components with disjoint sets of filled neighbors."""
    nbr = game.graph.neighbor_masks
    filled = game.filled.mask
    comps = game.components
    touching = []
    for comp in comps:
        around = 0
        for w in comp:
            around |= nbr[w]
        touching.append(around & filled)
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if not touching[i] & touching[j]:
                return comps[i], comps[j]
    return None


def normalize_tree_state(
    t: Graph,
    filled: VertexSet,
    oracle: Optional[OraclePolicy] = None,
    rng: Optional[np.random.Generator] = None,
) -> VertexSet:
    """
    Apply free moves until the tree state is normalized.

    Free moves are forces and announcements of two components whose filled
    neighborhoods are disjoint; every response to such an announcement
    fills something. The oracle (stalling_oracle by default) picks the
    responses.

    Returns:
        The enlarged filled set: everything, or a state where exactly one
        filled vertex has two or more unfilled neighbors and no force exists

    Raises:
        ContractViolation: If t is not a tree or filled is empty
    """
    _require_tree(t, "normalize_tree_state")
    if not filled:
        raise ContractViolation("normalize_tree_state needs a nonempty filled set")
    if oracle is None:
        from .policies.stalling import stalling_oracle

        oracle = stalling_oracle
    rng = rng if rng is not None else np.random.default_rng()

    game = ZqGame(t, 1, filled)
    while True:
        game.propagate()
        if game.game_over or len(_hubs(game)) <= 1:
            break
        pair = _progressive_pair(game)
        if pair is None:
            break
        game.announce(pair)
        game.respond(oracle(game, pair, rng))

    result = game.filled
    if not is_normalized(t, result):
        raise RuntimeError(f"normalization stopped early at {result}")
    logger.debug("normalized %s -> %s", filled, result)
    return result
