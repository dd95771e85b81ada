"""
Forcing Solvers

Exact Z(G), Z_0(G) and Z_q(G).

Z_q is the value V(∅) of the minimax recursion over filled sets F:
- V(V) = 0
- token move:  1 + V(F ∪ {v})
- force move:  V(F ∪ {u}) for each single available force
- oracle move: for an announcement A of q+1 (or more) unfilled components,
  max over nonempty B ⊆ A of V(F'(B)), F'(B) the closure inside G[F ∪ ⋃B]

An announcement only counts when every response B strictly enlarges F, so
each move grows F and the recursion terminates. Excluded announcements have
minimax value V(F) and never help the player.
"""

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import QValue, SolverConfig, format_q
from .errors import ContractViolation, ResourceLimitExceeded
from .game import MoveKind
from .graph import (
    Graph,
    VertexSet,
    _bits,
    available_forces,
    closure_mask,
    component_masks,
    psd_closure_mask,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Move:
    """
    A player move chosen by the solver.

    Attributes:
        kind: TOKEN, FORCE or ANNOUNCE
        vertex: Token target or forced vertex (None for a whole-closure jump)
        forcer: Forcing vertex of a single force
        announced: Components handed to the oracle
    """

    kind: MoveKind
    vertex: Optional[int] = None
    forcer: Optional[int] = None
    announced: Tuple[VertexSet, ...] = ()

    def describe(self) -> str:
        if self.kind is MoveKind.TOKEN:
            return f"spend a token on vertex {self.vertex}"
        if self.kind is MoveKind.FORCE:
            if self.vertex is None:
                return "apply the filling rule"
            return f"force {self.vertex} from {self.forcer}"
        comps = ", ".join("{" + ", ".join(map(str, c)) + "}" for c in self.announced)
        return f"announce {comps}"


@dataclass(frozen=True)
class MemoEntry:
    value: int
    move: Optional[Move]


class MemoTable:
    """Exact game values keyed by filled-set bitmask."""

    def __init__(self) -> None:
        self._entries: Dict[int, MemoEntry] = {}

    def get(self, key: int) -> Optional[MemoEntry]:
        return self._entries.get(key)

    def store(self, key: int, value: int, move: Optional[Move]) -> None:
        self._entries[key] = MemoEntry(value, move)

    def items(self) -> Iterator[Tuple[VertexSet, MemoEntry]]:
        for key, entry in self._entries.items():
            yield VertexSet.from_mask(key), entry

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, filled: object) -> bool:
        return isinstance(filled, VertexSet) and filled.mask in self._entries

    def monotonicity_violations(self) -> List[Tuple[VertexSet, VertexSet]]:
        """
        Pairs (F, F') with F ⊆ F' but V(F) < V(F').

        Quadratic in the table size; meant for small graphs.
        """
        keys = sorted(self._entries, key=int.bit_count)
        bad = []
        for i, small in enumerate(keys):
            v_small = self._entries[small].value
            for big in keys[i + 1 :]:
                if small & ~big == 0 and v_small < self._entries[big].value:
                    bad.append((VertexSet.from_mask(small), VertexSet.from_mask(big)))
        return bad


@dataclass(frozen=True)
class SolveResult:
    value: int
    first_move: Optional[Move]
    states: int


class ZqSolver:
    """
    Memoized minimax solver for the Z_q-Game on one graph.

    Each instance owns its memo table; instances are not shared between
    workers.
    """

    def __init__(self, graph: Graph, config: Optional[SolverConfig] = None):
        if graph.n == 0:
            raise ContractViolation("the Z_q-Game needs a nonempty graph")
        self._graph = graph
        self._config = config if config is not None else SolverConfig()
        self._q: QValue = self._config.q
        self._nbr = graph.neighbor_masks
        self._full = graph.full_mask
        self._memo = MemoTable()

    @property
    def memo(self) -> MemoTable:
        return self._memo

    @property
    def q(self) -> QValue:
        return self._q

    def value(self, filled: VertexSet) -> int:
        """Minimum further tokens that guarantee a win from filled set F."""
        if filled.mask & ~self._full:
            raise ContractViolation("filled contains vertices outside the graph")
        return self._value(filled.mask)

    def solve(self) -> SolveResult:
        value = self._value(0)
        entry = self._memo.get(0)
        logger.debug(
            "Z_%s solved on n=%d: value=%d, %d states",
            format_q(self._q),
            self._graph.n,
            value,
            len(self._memo),
        )
        return SolveResult(value, entry.move if entry else None, len(self._memo))

    def best_move(self, filled: VertexSet) -> Optional[Move]:
        """An optimal move from F (None when F is everything)."""
        self.value(filled)
        entry = self._memo.get(filled.mask)
        return entry.move if entry else None

    def announcements(self, filled: VertexSet) -> List[Tuple[VertexSet, ...]]:
        """Admissible announcements from F (every response makes progress)."""
        comps = self._announceable(filled.mask)
        result = []
        for combo in self._combos(len(comps)):
            chosen = [comps[i] for i in combo]
            if self._admissible(filled.mask, chosen) is not None:
                result.append(tuple(VertexSet.from_mask(c) for c in chosen))
        return result

    # ------------------------------------------------------------------

    def _announceable(self, filled: int) -> List[int]:
        if math.isinf(self._q):
            return []
        comps = component_masks(self._nbr, self._full & ~filled)
        if len(comps) < self._q + 1:
            return []
        if len(comps) > self._config.announcement_limit:
            raise ResourceLimitExceeded(
                "unfilled component count for announcements",
                self._config.announcement_limit,
                len(comps),
            )
        return comps

    def _combos(self, k: int) -> Iterator[Tuple[int, ...]]:
        smallest = int(self._q) + 1
        largest = k if self._config.all_announcements else smallest
        for size in range(smallest, largest + 1):
            yield from itertools.combinations(range(k), size)

    def _admissible(self, filled: int, chosen: Sequence[int]) -> Optional[List[int]]:
        """
        Union masks of all nonempty responses, or None if one makes no progress.

        A response B progresses iff some filled vertex has exactly one
        neighbor in ⋃B.
        """
        touching = 0
        for c in chosen:
            touching |= c
        open_masks = [
            self._nbr[v] & touching for v in _bits(filled) if self._nbr[v] & touching
        ]
        k = len(chosen)
        unions = [0] * (1 << k)
        for b in range(1, 1 << k):
            low = b & -b
            unions[b] = unions[b ^ low] | chosen[low.bit_length() - 1]
            u = unions[b]
            if not any((m & u).bit_count() == 1 for m in open_masks):
                return None
        return unions

    def _value(self, filled: int) -> int:
        if filled == self._full:
            return 0
        entry = self._memo.get(filled)
        if entry is not None:
            return entry.value
        if len(self._memo) >= self._config.state_limit:
            raise ResourceLimitExceeded("memoized game states", self._config.state_limit)

        unfilled = self._full & ~filled
        if self._config.jump_closure:
            closed = closure_mask(self._nbr, filled, unfilled)
            if closed != filled:
                value = self._value(closed)
                self._memo.store(filled, value, Move(MoveKind.FORCE))
                return value

        best = self._graph.n + 1
        best_move: Optional[Move] = None

        if not self._config.jump_closure:
            for forcer, forced in available_forces(self._nbr, filled, unfilled):
                value = self._value(filled | 1 << forced)
                if value < best:
                    best, best_move = value, Move(MoveKind.FORCE, vertex=forced, forcer=forcer)

        for v in _bits(unfilled):
            if best == 0:
                break
            value = 1 + self._value(filled | 1 << v)
            if value < best:
                best, best_move = value, Move(MoveKind.TOKEN, vertex=v)

        if best > 0:
            comps = self._announceable(filled)
            for combo in self._combos(len(comps)) if comps else ():
                chosen = [comps[i] for i in combo]
                unions = self._admissible(filled, chosen)
                if unions is None:
                    continue
                worst = 0
                for u in unions[1:]:
                    worst = max(worst, self._value(closure_mask(self._nbr, filled, u)))
                    if worst >= best:
                        break
                if worst < best:
                    best = worst
                    best_move = Move(
                        MoveKind.ANNOUNCE,
                        announced=tuple(VertexSet.from_mask(c) for c in chosen),
                    )
                    if best == 0:
                        break

        self._memo.store(filled, best, best_move)
        return best


def _connected_parts(g: Graph) -> List[Tuple[Graph, List[int]]]:
    return [g.induced_subgraph(comp) for comp in _components_of(g)]


def _components_of(g: Graph) -> List[VertexSet]:
    return [VertexSet.from_mask(m) for m in component_masks(g.neighbor_masks, g.full_mask)]


def _lift_move(move: Move, mapping: List[int]) -> Move:
    """Relabel a move found on an induced part back to the parent graph."""
    return replace(
        move,
        vertex=None if move.vertex is None else mapping[move.vertex],
        forcer=None if move.forcer is None else mapping[move.forcer],
        announced=tuple(VertexSet(mapping[v] for v in comp) for comp in move.announced),
    )


def solve_zq(g: Graph, q: QValue, config: Optional[SolverConfig] = None) -> SolveResult:
    """
    Solve the Z_q-Game on g and keep the optimal first move.

    Disconnected graphs are split into parts only for q = 0 and q = inf,
    where announcements cannot combine parts; otherwise the whole graph is
    searched. The first move of a split graph is the first part's, relabelled.
    """
    if g.n == 0:
        raise ContractViolation("the Z_q-Game needs a nonempty graph")
    cfg = (config or SolverConfig()).with_q(q)
    qv = cfg.q
    if (qv == 0 or math.isinf(qv)) and not g.is_connected():
        solved = [(ZqSolver(part, cfg).solve(), mapping) for part, mapping in _connected_parts(g)]
        first = next((_lift_move(r.first_move, m) for r, m in solved if r.first_move is not None), None)
        return SolveResult(sum(r.value for r, _ in solved), first, sum(r.states for r, _ in solved))
    return ZqSolver(g, cfg).solve()


def zq_number(g: Graph, q: QValue, config: Optional[SolverConfig] = None) -> int:
    """
    Exact Z_q(G).

    Args:
        g: Nonempty graph
        q: Oracle parameter (math.inf for Z(G))
        config: Solver limits

    Returns:
        Minimum token count guaranteeing a win against any oracle

    Raises:
        ContractViolation: If g is empty
        ResourceLimitExceeded: If a state or announcement cap is hit
    """
    return solve_zq(g, q, config).value


def _subset_search(g: Graph, closure_fn, limit: int, what: str) -> VertexSet:
    if g.n == 0:
        raise ContractViolation(f"{what} needs a nonempty graph")
    if g.n > limit:
        raise ResourceLimitExceeded(f"{what} vertex count", limit, g.n)
    full = g.full_mask
    for size in range(0, g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if closure_fn(mask) == full:
                return VertexSet.from_mask(mask)
    raise AssertionError("unreachable: the full vertex set always forces")


def zero_forcing_set(g: Graph, config: Optional[SolverConfig] = None) -> VertexSet:
    """A minimum zero forcing set (lexicographically first by size)."""
    cfg = config or SolverConfig()
    nbr = g.neighbor_masks
    full = g.full_mask
    return _subset_search(
        g, lambda m: closure_mask(nbr, m, full & ~m), cfg.exhaustive_limit, "z_number"
    )


def z_number(g: Graph, config: Optional[SolverConfig] = None) -> int:
    """Z(G) by subset search in increasing size."""
    return len(zero_forcing_set(g, config))


def psd_forcing_set(g: Graph, config: Optional[SolverConfig] = None) -> VertexSet:
    """A minimum PSD forcing set."""
    cfg = config or SolverConfig()
    nbr = g.neighbor_masks
    full = g.full_mask
    return _subset_search(
        g, lambda m: psd_closure_mask(nbr, m, full), cfg.exhaustive_limit, "z0_number"
    )


def z0_number(g: Graph, config: Optional[SolverConfig] = None) -> int:
    """Z_0(G): subset search with the PSD filling rule."""
    return len(psd_forcing_set(g, config))


def zq_static(g: Graph, q: QValue, config: Optional[SolverConfig] = None) -> int:
    """
    Tokens needed when every token is spent before any oracle interaction.

    Returns:
        min |S| such that closure(S) wins using forces and oracle moves only

    Raises:
        ResourceLimitExceeded: If g.n exceeds the exhaustive limit or a solver cap
    """
    cfg = (config or SolverConfig()).with_q(q)
    if g.n == 0:
        raise ContractViolation("zq_static needs a nonempty graph")
    if g.n > cfg.exhaustive_limit:
        raise ResourceLimitExceeded("zq_static vertex count", cfg.exhaustive_limit, g.n)
    solver = ZqSolver(g, cfg)
    nbr = g.neighbor_masks
    full = g.full_mask
    for size in range(0, g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            start = closure_mask(nbr, mask, full & ~mask)
            if solver._value(start) == 0:
                return size
    raise AssertionError("unreachable: spending on every vertex wins")


def stalling_response(
    g: Graph, frontier: Sequence[int], announced: Sequence[VertexSet]
) -> List[VertexSet]:
    """
    Oracle response that enables no force.

    Rows of the incidence array are frontier vertices, columns announced
    components. All-zero columns are returned if any exist; otherwise rows
    with row sum 1 are deleted together with the column holding their 1
    until none is left, and the surviving columns are returned.

    Args:
        g: Host graph
        frontier: Filled vertices adjacent to unfilled vertices
        announced: Pairwise disjoint unfilled components

    Returns:
        Nonempty sub-list of announced

    Raises:
        ContractViolation: If len(announced) <= len(frontier) or components overlap
    """
    if len(announced) < len(frontier) + 1:
        raise ContractViolation(
            f"need more announced components ({len(announced)}) than frontier "
            f"vertices ({len(frontier)})"
        )
    seen = 0
    for comp in announced:
        if not comp or comp.mask & seen or comp.mask & ~g.full_mask:
            raise ContractViolation("announced components must be nonempty, disjoint and in the graph")
        seen |= comp.mask

    incidence = np.array(
        [[1 if g.neighbor_masks[f] & comp.mask else 0 for comp in announced] for f in frontier],
        dtype=np.int8,
    ).reshape(len(frontier), len(announced))

    zero_columns = np.flatnonzero(incidence.sum(axis=0) == 0)
    if zero_columns.size:
        return [announced[j] for j in zero_columns]

    rows = np.ones(len(frontier), dtype=bool)
    cols = np.ones(len(announced), dtype=bool)
    while True:
        row_sums = incidence[:, cols].sum(axis=1)
        single = np.flatnonzero(rows & (row_sums == 1))
        if single.size == 0:
            break
        i = single[0]
        j = np.flatnonzero(incidence[i] * cols)[0]
        rows[i] = False
        cols[j] = False

    survivors = [announced[j] for j in np.flatnonzero(cols)]
    logger.debug("stalling response keeps %d of %d components", len(survivors), len(announced))
    return survivors


__all__ = [
    "Move",
    "MemoEntry",
    "MemoTable",
    "SolveResult",
    "ZqSolver",
    "psd_forcing_set",
    "solve_zq",
    "stalling_response",
    "z0_number",
    "z_number",
    "zero_forcing_set",
    "zq_number",
    "zq_static",
]
