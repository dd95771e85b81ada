"""
Graph Core

Graph representation and the forcing primitives every solver builds on.

Forcing rules:
1. A filled vertex with exactly one unfilled neighbor fills that neighbor
2. Inside an induced subgraph G[F ∪ U] only vertices of F ∪ U count; vertices
   outside never block or enable a force
3. PSD rule: a filled vertex fills u when u is its only neighbor inside u's
   unfilled component
4. A fort is a vertex set W with G[W] in at most two components such that no
   vertex outside W has exactly one neighbor in W
"""

import itertools
import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import ContractViolation, GraphValidationError, ResourceLimitExceeded

logger = logging.getLogger(__name__)

DEFAULT_FORT_LIMIT = 16


def _bits(mask: int) -> Iterator[int]:
    """Vertex indices of a bitmask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class VertexSet:
    """
    Immutable set of vertex indices backed by an integer bitmask.

    Supports two initialization methods:
    - VertexSet(iterable): from vertex indices
    - VertexSet.from_mask(mask): from a bitmask (bit i set <=> vertex i present)
    """

    __slots__ = ("_mask",)

    def __init__(self, members: Iterable[int] = ()):
        mask = 0
        for v in members:
            if v < 0:
                raise ContractViolation(f"vertex index must be non-negative, got {v}")
            mask |= 1 << v
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        if mask < 0:
            raise ContractViolation("vertex mask must be non-negative")
        vs = cls.__new__(cls)
        vs._mask = mask
        return vs

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls.from_mask((1 << n) - 1)

    @property
    def mask(self) -> int:
        return self._mask

    def complement(self, n: int) -> "VertexSet":
        """Vertices of 0..n-1 not in this set."""
        return VertexSet.from_mask(((1 << n) - 1) & ~self._mask)

    def min(self) -> int:
        if not self._mask:
            raise ContractViolation("min() of an empty VertexSet")
        return (self._mask & -self._mask).bit_length() - 1

    def max_index(self) -> int:
        """Largest member, or -1 for the empty set."""
        return self._mask.bit_length() - 1

    def isdisjoint(self, other: "VertexSet") -> bool:
        return not (self._mask & other._mask)

    def __iter__(self) -> Iterator[int]:
        return _bits(self._mask)

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self._mask >> v & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask | other._mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & other._mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & ~other._mask)

    def __le__(self, other: "VertexSet") -> bool:
        return not (self._mask & ~other._mask)

    def __lt__(self, other: "VertexSet") -> bool:
        return self <= other and self._mask != other._mask

    def __ge__(self, other: "VertexSet") -> bool:
        return other <= self

    def __gt__(self, other: "VertexSet") -> bool:
        return other < self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexSet):
            return self._mask == other._mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._mask)

    def __reduce__(self):
        return (VertexSet.from_mask, (self._mask,))

    def __repr__(self) -> str:
        return f"VertexSet({{{', '.join(map(str, self))}}})"


class Graph:
    """
    Immutable simple undirected graph on vertices 0..n-1.

    Adjacency is stored twice: sorted neighbor tuples for iteration and
    neighbor bitmasks for the set-based forcing code.
    """

    __slots__ = ("_n", "_adjacency", "_neighbor_masks", "_edges")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        """
        Build and validate a graph.

        Args:
            n: Vertex count
            edges: Pairs (u, v) with 0 <= u, v < n

        Raises:
            GraphValidationError: On negative n, out-of-range endpoints,
                self-loops or duplicate edges
        """
        if not isinstance(n, int) or n < 0:
            raise GraphValidationError(f"vertex count must be a non-negative integer, got {n!r}")

        neighbors: List[set] = [set() for _ in range(n)]
        edge_list: List[Tuple[int, int]] = []
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if v in neighbors[u]:
                raise GraphValidationError(f"duplicate edge ({min(u, v)}, {max(u, v)})")
            neighbors[u].add(v)
            neighbors[v].add(u)
            edge_list.append((min(u, v), max(u, v)))

        self._n = n
        self._adjacency: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(sorted(nbrs)) for nbrs in neighbors
        )
        self._neighbor_masks: Tuple[int, ...] = tuple(
            sum(1 << w for w in nbrs) for nbrs in neighbors
        )
        self._edges: Tuple[Tuple[int, int], ...] = tuple(sorted(edge_list))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """
        Convert a networkx graph, relabelling nodes 0..n-1 in sorted order.

        Raises:
            GraphValidationError: If the graph is directed, a multigraph or has self-loops
        """
        if g.is_directed() or g.is_multigraph():
            raise GraphValidationError("only simple undirected graphs are supported")
        try:
            nodes = sorted(g.nodes())
        except TypeError:
            nodes = list(g.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls(len(nodes), ((index[u], index[v]) for u, v in g.edges()))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self._edges)
        return g

    @property
    def n(self) -> int:
        """Vertex count."""
        return self._n

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Sorted neighbor tuple of every vertex."""
        return self._adjacency

    @property
    def neighbor_masks(self) -> Tuple[int, ...]:
        """Neighbor bitmask of every vertex."""
        return self._neighbor_masks

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as sorted (u, v) pairs with u < v."""
        return self._edges

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.full(self._n)

    @property
    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degrees(self) -> List[int]:
        return [len(nbrs) for nbrs in self._adjacency]

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self._adjacency), default=0)

    def is_connected(self) -> bool:
        if self._n == 0:
            return False
        return len(components(self, self.vertices)) == 1

    def is_tree(self) -> bool:
        return self._n >= 1 and len(self._edges) == self._n - 1 and self.is_connected()

    def is_path(self) -> bool:
        return self.is_tree() and self.max_degree() <= 2

    def leaves(self) -> List[int]:
        return [v for v in range(self._n) if len(self._adjacency[v]) == 1]

    def induced_subgraph(self, vertices: VertexSet) -> Tuple["Graph", List[int]]:
        """
        Induced subgraph relabelled to 0..k-1.

        Returns:
            Tuple of (subgraph, mapping) where mapping[new_index] = old_index
        """
        mapping = list(vertices)
        index = {old: new for new, old in enumerate(mapping)}
        edges = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        return Graph(len(mapping), edges), mapping

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self._n
        edges = list(self._edges) + [(u + shift, v + shift) for u, v in other.edges]
        return Graph(self._n + other.n, edges)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Graph):
            return self._n == other._n and self._edges == other._edges
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __reduce__(self):
        return (Graph, (self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={list(self._edges)})"


def _check_subset(g: Graph, vs: VertexSet, name: str) -> None:
    if vs.mask & ~g.full_mask:
        raise ContractViolation(f"{name} contains vertices outside 0..{g.n - 1}")


# ---------------------------------------------------------------------------
# mask-level primitives (shared with the solvers)
# ---------------------------------------------------------------------------


def component_masks(neighbor_masks: Sequence[int], active: int) -> List[int]:
    """Connected components of G[active] as masks, ordered by smallest vertex."""
    result = []
    remaining = active
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for v in _bits(frontier):
                grow |= neighbor_masks[v]
            frontier = grow & remaining & ~comp
            comp |= frontier
        result.append(comp)
        remaining &= ~comp
    return result


def closure_mask(neighbor_masks: Sequence[int], filled: int, active: int) -> int:
    """Fixed point of the filling rule inside G[filled ∪ active]."""
    unfilled = active & ~filled
    changed = True
    while changed and unfilled:
        changed = False
        for v in _bits(filled):
            open_nbrs = neighbor_masks[v] & unfilled
            if open_nbrs and not (open_nbrs & (open_nbrs - 1)):
                filled |= open_nbrs
                unfilled ^= open_nbrs
                changed = True
    return filled


def psd_closure_mask(neighbor_masks: Sequence[int], filled: int, full: int) -> int:
    """Fixed point of the PSD filling rule (forcing per unfilled component)."""
    changed = True
    while changed:
        changed = False
        unfilled = full & ~filled
        if not unfilled:
            break
        for comp in component_masks(neighbor_masks, unfilled):
            for v in _bits(filled):
                open_nbrs = neighbor_masks[v] & comp
                if open_nbrs and not (open_nbrs & (open_nbrs - 1)):
                    filled |= open_nbrs
                    changed = True
                    # the component splits; recompute from the new filled set
                    break
            if changed:
                break
    return filled


def available_forces(neighbor_masks: Sequence[int], filled: int, active: int) -> List[Tuple[int, int]]:
    """All single forces (forcer, forced) available inside G[filled ∪ active]."""
    forces = []
    unfilled = active & ~filled
    for v in _bits(filled):
        open_nbrs = neighbor_masks[v] & unfilled
        if open_nbrs and not (open_nbrs & (open_nbrs - 1)):
            forces.append((v, open_nbrs.bit_length() - 1))
    return forces


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def components(g: Graph, active: VertexSet) -> List[VertexSet]:
    """
    Connected components of the induced subgraph g[active].

    Args:
        g: Host graph
        active: Vertices to keep

    Returns:
        Pairwise disjoint components ordered by their smallest vertex
    """
    _check_subset(g, active, "active")
    return [VertexSet.from_mask(m) for m in component_masks(g.neighbor_masks, active.mask)]


def induced_closure(g: Graph, filled: VertexSet, active: VertexSet) -> VertexSet:
    """
    Apply the filling rule inside g[filled ∪ active] until nothing changes.

    Args:
        g: Host graph
        filled: Currently filled vertices
        active: Unfilled vertices taking part; everything else is ignored

    Returns:
        The final filled set (a superset of filled, inside filled ∪ active)

    Raises:
        ContractViolation: If filled and active overlap
    """
    _check_subset(g, filled, "filled")
    _check_subset(g, active, "active")
    if not filled.isdisjoint(active):
        raise ContractViolation("filled and active vertex sets must be disjoint")
    return VertexSet.from_mask(closure_mask(g.neighbor_masks, filled.mask, active.mask))


def closure(g: Graph, filled: VertexSet) -> VertexSet:
    """Filling-rule closure on the whole graph."""
    _check_subset(g, filled, "filled")
    return VertexSet.from_mask(
        closure_mask(g.neighbor_masks, filled.mask, g.full_mask & ~filled.mask)
    )


def psd_closure(g: Graph, filled: VertexSet) -> VertexSet:
    """PSD filling-rule closure (forces judged per unfilled component)."""
    _check_subset(g, filled, "filled")
    return VertexSet.from_mask(psd_closure_mask(g.neighbor_masks, filled.mask, g.full_mask))


def is_fort(g: Graph, w: VertexSet) -> bool:
    """
    Check the fort condition.

    Returns:
        True iff g[w] has at most two components and no vertex outside w has
        exactly one neighbor in w

    Raises:
        ContractViolation: If w is empty
    """
    _check_subset(g, w, "w")
    if not w:
        raise ContractViolation("a fort must be nonempty")
    if len(component_masks(g.neighbor_masks, w.mask)) > 2:
        return False
    for v in _bits(g.full_mask & ~w.mask):
        if (g.neighbor_masks[v] & w.mask).bit_count() == 1:
            return False
    return True


def find_unfilled_fort(
    g: Graph, filled: VertexSet, limit: int = DEFAULT_FORT_LIMIT
) -> Optional[VertexSet]:
    """
    Exhaustive search for a fort disjoint from filled.

    Subsets of the unfilled vertices are tried by increasing size, so the
    returned fort is a smallest one (lexicographically first among those).

    Args:
        g: Host graph
        filled: Filled vertices
        limit: Maximum vertex count accepted

    Returns:
        A fort W with W ∩ filled = ∅, or None

    Raises:
        ResourceLimitExceeded: If g.n > limit
    """
    _check_subset(g, filled, "filled")
    if g.n > limit:
        raise ResourceLimitExceeded("fort search vertex count", limit, g.n)

    unfilled = list(filled.complement(g.n))
    for size in range(1, len(unfilled) + 1):
        for combo in itertools.combinations(unfilled, size):
            w = VertexSet(combo)
            if is_fort(g, w):
                logger.debug("fort %s found among %d unfilled vertices", w, len(unfilled))
                return w
    return None
