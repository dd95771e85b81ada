"""
Z_q Game Board

Mutable state of one play of the Z_q-Game.

Rules:
1. All vertices start unfilled; the player has tokens
2. For one token any unfilled vertex becomes filled
3. At no cost a filled vertex with exactly one unfilled neighbor fills it
4. If the unfilled vertices form k >= q+1 components, the player may announce
   at least q+1 of them; the oracle answers with a nonempty subset and the
   filling rule is applied on G[F ∪ returned components]
5. The game ends when every vertex is filled; q = inf disables rule 4
"""

import itertools
import math
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

from .config import QValue, format_q, parse_q
from .graph import (
    Graph,
    VertexSet,
    available_forces,
    closure_mask,
    component_masks,
)


class MoveKind(Enum):
    """Kinds of moves in the Z_q-Game."""

    TOKEN = 0
    ANNOUNCE = 1
    RESPOND = 2
    FORCE = 3


class ZqGame:
    """
    One Z_q-Game in progress.

    The filled set only grows. While an announcement is pending, the only
    legal move is the oracle's response.
    """

    def __init__(
        self,
        graph: Graph,
        q: QValue = 1,
        filled: Optional[VertexSet] = None,
        tokens_spent: int = 0,
    ):
        """
        Initialize a game.

        Args:
            graph: Graph being played on
            q: Oracle parameter (math.inf for the classic Z-Game)
            filled: Initially filled vertices (default: none)
            tokens_spent: Tokens already paid for the initial filled set
        """
        if graph.n == 0:
            raise ValueError("cannot play on the empty graph")
        self._graph = graph
        self._q: QValue = parse_q(q)
        self._filled: int = 0 if filled is None else filled.mask
        if self._filled & ~graph.full_mask:
            raise ValueError("filled contains vertices outside the graph")
        self._tokens_spent = tokens_spent
        self._pending: Optional[Tuple[VertexSet, ...]] = None
        self._oracle_progressed = False

    @property
    def graph(self) -> Graph:
        return self._graph

    @property
    def q(self) -> QValue:
        return self._q

    @property
    def filled(self) -> VertexSet:
        return VertexSet.from_mask(self._filled)

    @property
    def unfilled(self) -> VertexSet:
        return VertexSet.from_mask(self._graph.full_mask & ~self._filled)

    @property
    def tokens_spent(self) -> int:
        return self._tokens_spent

    @property
    def pending(self) -> Optional[Tuple[VertexSet, ...]]:
        """Components announced to the oracle and awaiting its response."""
        return self._pending

    @property
    def oracle_progressed(self) -> bool:
        """Whether some oracle response so far has led to a force."""
        return self._oracle_progressed

    @property
    def game_over(self) -> bool:
        return self._filled == self._graph.full_mask

    @property
    def components(self) -> List[VertexSet]:
        """Components of the unfilled subgraph, ordered by smallest vertex."""
        masks = component_masks(self._graph.neighbor_masks, self._graph.full_mask & ~self._filled)
        return [VertexSet.from_mask(m) for m in masks]

    @property
    def frontier(self) -> List[int]:
        """Filled vertices adjacent to at least one unfilled vertex."""
        unfilled = self._graph.full_mask & ~self._filled
        return [v for v in self.filled if self._graph.neighbor_masks[v] & unfilled]

    def available_forces(self) -> List[Tuple[int, int]]:
        """Single forces (forcer, forced) on the whole graph."""
        return available_forces(
            self._graph.neighbor_masks, self._filled, self._graph.full_mask & ~self._filled
        )

    @property
    def can_announce(self) -> bool:
        if self._pending is not None or math.isinf(self._q):
            return False
        return len(self.components) >= self._q + 1

    def _require_turn(self) -> None:
        if self.game_over:
            raise RuntimeError("Cannot move: every vertex is already filled")
        if self._pending is not None:
            raise RuntimeError("Cannot move: waiting for the oracle's response")

    def spend_token(self, v: int) -> None:
        """
        Spend one token to fill vertex v.

        Raises:
            RuntimeError: If the game is over or an announcement is pending
            ValueError: If v is not an unfilled vertex
        """
        self._require_turn()
        if not (0 <= v < self._graph.n) or self._filled >> v & 1:
            raise ValueError(f"Invalid token move: vertex {v} is not unfilled")
        self._filled |= 1 << v
        self._tokens_spent += 1

    def apply_force(self, forcer: int, forced: int) -> None:
        """
        Apply a single force.

        Raises:
            RuntimeError: If the game is over or an announcement is pending
            ValueError: If forcer does not have forced as its unique unfilled neighbor
        """
        self._require_turn()
        if (forcer, forced) not in self.available_forces():
            raise ValueError(f"Invalid force: {forcer} cannot force {forced}")
        self._filled |= 1 << forced

    def propagate(self) -> VertexSet:
        """
        Apply the filling rule until nothing changes.

        Returns:
            The vertices filled by this call
        """
        if self._pending is not None:
            raise RuntimeError("Cannot propagate: waiting for the oracle's response")
        before = self._filled
        self._filled = closure_mask(
            self._graph.neighbor_masks, self._filled, self._graph.full_mask & ~self._filled
        )
        return VertexSet.from_mask(self._filled & ~before)

    def legal_announcements(self, size: Optional[int] = None) -> Iterator[Tuple[VertexSet, ...]]:
        """
        Announcements available in the current state.

        Args:
            size: Number of components to announce (default q+1)

        Returns:
            Iterator of component tuples in lexicographic order of component index
        """
        if not self.can_announce:
            return iter(())
        comps = self.components
        k = len(comps)
        size = int(self._q) + 1 if size is None else size
        if size < self._q + 1 or size > k:
            return iter(())
        return (tuple(c) for c in itertools.combinations(comps, size))

    def announce(self, announced: Sequence[VertexSet]) -> None:
        """
        Hand at least q+1 unfilled components to the oracle.

        Raises:
            RuntimeError: If the game is over, a response is pending or q = inf
            ValueError: If the announcement is not q+1 or more distinct current components
        """
        self._require_turn()
        if math.isinf(self._q):
            raise RuntimeError("Cannot announce: q = inf has no oracle")
        current = set(self.components)
        chosen = tuple(announced)
        if len(set(chosen)) != len(chosen):
            raise ValueError("Invalid announcement: components repeated")
        if any(c not in current for c in chosen):
            raise ValueError("Invalid announcement: not a component of the unfilled subgraph")
        if len(chosen) < self._q + 1:
            raise ValueError(
                f"Invalid announcement: need at least {format_q(self._q + 1)} components, "
                f"got {len(chosen)}"
            )
        self._pending = tuple(sorted(chosen, key=lambda c: c.min()))

    def respond(self, returned: Sequence[VertexSet]) -> VertexSet:
        """
        Oracle's answer: fill inside G[F ∪ returned components].

        Returns:
            The vertices filled by the response

        Raises:
            RuntimeError: If nothing is pending
            ValueError: If returned is empty or not a subset of the announcement
        """
        if self._pending is None:
            raise RuntimeError("Cannot respond: no announcement is pending")
        chosen = set(returned)
        if not chosen:
            raise ValueError("Invalid response: the oracle must return a nonempty subset")
        if not chosen <= set(self._pending):
            raise ValueError("Invalid response: not a subset of the announced components")

        active = 0
        for comp in chosen:
            active |= comp.mask
        before = self._filled
        self._filled = closure_mask(self._graph.neighbor_masks, self._filled, active)
        self._pending = None
        gained = self._filled & ~before
        if gained:
            self._oracle_progressed = True
        return VertexSet.from_mask(gained)

    def reset(self, filled: Optional[VertexSet] = None) -> None:
        """Reset to the given filled set with no tokens spent."""
        self._filled = 0 if filled is None else filled.mask
        self._tokens_spent = 0
        self._pending = None
        self._oracle_progressed = False

    def copy(self) -> "ZqGame":
        new_game = ZqGame(self._graph, self._q, self.filled, self._tokens_spent)
        new_game._pending = self._pending
        new_game._oracle_progressed = self._oracle_progressed
        return new_game

    def render(self) -> str:
        """
        Render the state as text.

        Returns:
            One line per vertex: "#" filled, "." unfilled, "?" announced, then its neighbors
        """
        announced = 0
        for comp in self._pending or ():
            announced |= comp.mask
        lines = [f"q={format_q(self._q)} tokens={self._tokens_spent}"]
        for v in range(self._graph.n):
            if self._filled >> v & 1:
                mark = "#"
            elif announced >> v & 1:
                mark = "?"
            else:
                mark = "."
            nbrs = " ".join(str(w) for w in self._graph.neighbors(v))
            lines.append(f"{mark} {v}: {nbrs}")
        return "\n".join(lines)
