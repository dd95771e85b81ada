"""
Graph family generators with deterministic labels.
"""

from dataclasses import dataclass
from typing import List, Tuple, Union

from .errors import ContractViolation
from .graph import Graph
from .structure import is_initial_pair


def _positive(name: str, value: int, minimum: int = 1) -> None:
    if not isinstance(value, int) or value < minimum:
        raise ContractViolation(f"{name} must be an integer >= {minimum}, got {value!r}")


def gen_path(n: int) -> Graph:
    """P_n on 0..n-1 in order."""
    _positive("n", n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    _positive("n", n, 3)
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_star(k: int) -> Graph:
    """K_{1,k} with center 0."""
    _positive("k", k)
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def gen_ladder(m: int, last_rung: bool = True) -> Graph:
    """
    Ladder with rails a_i = i and b_i = m + i.

    Without the last rung the graph is a zig-zag path whose forcing from
    {a_0, b_0} ends at a_{m-1} and b_{m-1}.
    """
    _positive("m", m, 2)
    edges = [(i, i + 1) for i in range(m - 1)] + [(m + i, m + i + 1) for i in range(m - 1)]
    rungs = m if last_rung else m - 1
    edges += [(i, m + i) for i in range(rungs)]
    return Graph(2 * m, edges)


def gen_spider(k: int) -> Graph:
    """
    k+1 copies of K_{1,3} glued at a leaf.

    Center 0, hubs 1..k+1, then two leaves per hub in hub order
    (3k+4 vertices, 2k+2 leaves).
    """
    _positive("k", k)
    hubs = list(range(1, k + 2))
    edges = [(0, h) for h in hubs]
    nxt = k + 2
    for h in hubs:
        edges += [(h, nxt), (h, nxt + 1)]
        nxt += 2
    return Graph(nxt, edges)


def gen_double_star(a: int, b: int) -> Graph:
    """
    Two adjacent centers with a and b pendant leaves.

    Leaves 0..a-1 hang from center a, leaves a+2..a+b+1 from center a+1.
    """
    _positive("a", a)
    _positive("b", b)
    left, right = a, a + 1
    edges = [(i, left) for i in range(a)] + [(left, right)]
    edges += [(right, right + 1 + j) for j in range(b)]
    return Graph(a + b + 2, edges)


def gen_complete_binary(d: int) -> Graph:
    """Complete binary tree of depth d in heap order (children of i: 2i+1, 2i+2)."""
    _positive("d", d, 0)
    n = (1 << (d + 1)) - 1
    return Graph(n, [((i - 1) // 2, i) for i in range(1, n)])


@dataclass(frozen=True)
class CombSpec:
    """
    Spine 0..spine_length-1 with teeth (spine index, tooth length).

    Tooth vertices are numbered after the spine in the order given.
    """

    spine_length: int
    teeth: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        _positive("spine_length", self.spine_length)
        degree = [0] * self.spine_length
        for i in range(self.spine_length - 1):
            degree[i] += 1
            degree[i + 1] += 1
        for index, length in self.teeth:
            if not 0 <= index < self.spine_length:
                raise ContractViolation(f"tooth attached to missing spine index {index}")
            _positive("tooth length", length)
            degree[index] += 1
        if max(degree) > 3:
            raise ContractViolation("comb spine vertices can have degree at most 3")


def gen_comb(spec: CombSpec) -> Graph:
    edges = [(i, i + 1) for i in range(spec.spine_length - 1)]
    nxt = spec.spine_length
    for index, length in spec.teeth:
        prev = index
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt, edges)


@dataclass(frozen=True)
class PathAttachment:
    """A path of `length` new vertices whose ends join the initial pair."""

    length: int

    def __post_init__(self) -> None:
        _positive("path length", self.length)


@dataclass(frozen=True)
class LadderAttachment:
    """A ladder of `m` rungs minus its last one, far rail ends identified with the pair."""

    m: int

    def __post_init__(self) -> None:
        _positive("ladder length", self.m, 2)


Attachment = Union[PathAttachment, LadderAttachment]


def gen_pick_comb(comb: CombSpec, pair: Tuple[int, int], attachment: Attachment) -> Graph:
    """
    Comb with a path or zig-zag path attached at a pair of initial vertices.

    Comb vertices keep their gen_comb labels; new vertices follow.

    Raises:
        ContractViolation: If pair is not an initial pair of the comb
    """
    base = gen_comb(comb)
    u, v = pair
    if not (0 <= u < base.n and 0 <= v < base.n) or not is_initial_pair(base, u, v):
        raise ContractViolation(f"{pair} is not a pair of initial vertices of the comb")

    edges: List[Tuple[int, int]] = list(base.edges)
    nxt = base.n
    if isinstance(attachment, PathAttachment):
        chain = list(range(nxt, nxt + attachment.length))
        edges += [(u, chain[0]), (chain[-1], v)]
        edges += [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
        nxt += attachment.length
    else:
        m = attachment.m
        # rails a_0..a_{m-2}, b_0..b_{m-2}; a_{m-1} = u, b_{m-1} = v
        a = list(range(nxt, nxt + m - 1)) + [u]
        b = list(range(nxt + m - 1, nxt + 2 * (m - 1))) + [v]
        edges += [(a[i], a[i + 1]) for i in range(m - 1)]
        edges += [(b[i], b[i + 1]) for i in range(m - 1)]
        edges += [(a[i], b[i]) for i in range(m - 1)]
        nxt += 2 * (m - 1)
    return Graph(nxt, edges)


FAMILIES = ("path", "cycle", "star", "ladder", "spider", "double-star", "binary", "comb", "pick-comb")
