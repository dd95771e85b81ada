"""
Verify

Cross-validation suite: independent computations of the same quantity must
agree on every graph of a family. Each check returns a CheckResult; a
mismatch carries the offending graph so the smallest one can be reported.
"""

import dataclasses
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import networkx as nx
import numpy as np
from tqdm import tqdm

from .census import census, compare_with_published, count_nonpath_combs, enumerate_trees
from .config import AppConfig, SolverConfig, VerifyConfig, format_q
from .env import ZqForcingEnv
from .errors import ResourceLimitExceeded
from .formats import emit_graph
from .game import MoveKind, ZqGame
from .generators import (
    CombSpec,
    LadderAttachment,
    PathAttachment,
    gen_complete_binary,
    gen_double_star,
    gen_pick_comb,
    gen_spider,
)
from .graph import (
    Graph,
    VertexSet,
    _bits,
    available_forces,
    closure,
    closure_mask,
    component_masks,
    induced_closure,
    is_fort,
)
from .policies import random_oracle, stalling_oracle
from .solvers import (
    ZqSolver,
    stalling_response,
    z0_number,
    z_number,
    zq_number,
    zq_static,
)
from .structure import comb_decompose, initial_pair_wins, initial_pairs
from .trees import (
    RootedTree,
    eq1_direct,
    f_values,
    leafpair_formula,
    path_cover_number,
    root_values,
    z1_tree,
)
from .wrappers import OracleWrapper

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mismatch:
    check: str
    graph: Optional[Graph]
    detail: str

    def describe(self) -> str:
        where = f" on {emit_graph(self.graph)}" if self.graph is not None else ""
        return f"[{self.check}]{where}: {self.detail}"


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def expect(self, condition: bool, graph: Optional[Graph], detail: str) -> None:
        self.cases += 1
        if not condition:
            self.mismatches.append(Mismatch(self.name, graph, detail))

    def expect_equal(self, what: str, actual: object, expected: object, graph: Optional[Graph]) -> None:
        self.expect(actual == expected, graph, f"{what}: got {actual}, expected {expected}")


@dataclass
class VerifyReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def mismatches(self) -> List[Mismatch]:
        return [m for r in self.results for m in r.mismatches]

    def minimal_counterexample(self) -> Optional[Mismatch]:
        """The mismatch on the smallest graph (by vertex then edge count)."""
        with_graph = [m for m in self.mismatches if m.graph is not None]
        if not with_graph:
            return self.mismatches[0] if self.mismatches else None
        return min(with_graph, key=lambda m: (m.graph.n, len(m.graph.edges), emit_graph(m.graph)))


def _timed(name: str, body: Callable[[CheckResult], None]) -> CheckResult:
    result = CheckResult(name)
    start = time.perf_counter()
    body(result)
    result.seconds = time.perf_counter() - start
    logger.info("check %s: %d cases, %d mismatches", name, result.cases, len(result.mismatches))
    return result


def _trees(n_min: int, n_max: int, progress: bool, desc: str) -> Iterable[Graph]:
    for n in range(n_min, n_max + 1):
        yield from tqdm(enumerate_trees(n), desc=f"{desc} n={n}", disable=not progress, leave=False)


def graph_atlas(n_max: int, connected: bool = False) -> List[Graph]:
    """All graphs on 1..n_max vertices (n_max <= 7), up to isomorphism."""
    if n_max > 7:
        raise ResourceLimitExceeded("graph atlas vertex count", 7, n_max)
    graphs = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() > n_max:
            break
        if g.number_of_nodes() >= 1 and (not connected or nx.is_connected(g)):
            graphs.append(Graph.from_networkx(g))
    return graphs


def connected_atlas(n_max: int) -> List[Graph]:
    return graph_atlas(n_max, connected=True)


# ---------------------------------------------------------------------------
# tree checks
# ---------------------------------------------------------------------------


def check_tree_oracle(n_max: int, solver_config: Optional[SolverConfig] = None, progress: bool = False) -> CheckResult:
    """z1_tree against the exact game solver on every tree with 3 <= n <= n_max."""

    def body(res: CheckResult) -> None:
        for t in _trees(3, n_max, progress, "tree-oracle"):
            res.expect_equal("z1_tree vs Z_1", z1_tree(t), zq_number(t, 1, solver_config), t)

    return _timed("tree-oracle", body)


def check_formulas(n_max: int, progress: bool = False) -> CheckResult:
    """Subtree formula and leaf-pair formula against z1_tree."""

    def body(res: CheckResult) -> None:
        for t in _trees(3, n_max, progress, "formulas"):
            expected = z1_tree(t)
            res.expect_equal("eq1_direct", eq1_direct(t), expected, t)
            if not t.is_path():
                res.expect_equal("leafpair_formula", leafpair_formula(t), expected, t)

    return _timed("formulas", body)


def check_root_values(n_max: int, progress: bool = False) -> CheckResult:
    """1 + min_v f = max_v f, non-constancy, rerooting and child monotonicity."""

    def body(res: CheckResult) -> None:
        for t in _trees(3, n_max, progress, "root-values"):
            values = root_values(t)
            low, high = min(values.values()), max(values.values())
            res.expect_equal("1 + min f vs max f", 1 + low, high, t)
            res.expect(low != high, t, "root values are constant")
            for v in range(t.n):
                rooted = RootedTree.from_graph(t, v)
                table = f_values(rooted)
                res.expect_equal(f"rerooted value at {v}", values[v], table[v], t)
                for w in range(t.n):
                    for c in rooted.children[w]:
                        res.expect(table[w] >= table[c], t, f"f({w}) < f({c}) rooted at {v}")

    return _timed("root-values", body)


def check_path_cover(n_max: int, solver_config: Optional[SolverConfig] = None, progress: bool = False) -> CheckResult:
    """Path cover number equals Z on trees."""

    def body(res: CheckResult) -> None:
        for t in _trees(1, n_max, progress, "path-cover"):
            res.expect_equal("path cover vs Z", path_cover_number(t), z_number(t, solver_config), t)

    return _timed("path-cover", body)


def check_binary_trees(depth_max: int) -> CheckResult:
    def body(res: CheckResult) -> None:
        for d in range(2, depth_max + 1):
            t = gen_complete_binary(d)
            res.expect_equal(f"z1_tree of binary depth {d}", z1_tree(t), d, t)

    return _timed("binary-trees", body)


def check_combs(n_max: int, progress: bool = False) -> CheckResult:
    """
    Trees with Z_1 = 2 are exactly the non-path combs; tokens on {u, v}
    win outright exactly when (u, v) is an initial pair.
    """

    def body(res: CheckResult) -> None:
        for t in _trees(3, n_max, progress, "combs"):
            is_comb = comb_decompose(t) is not None and not t.is_path()
            res.expect_equal("Z_1 = 2 vs non-path comb", z1_tree(t) == 2, is_comb, t)
            if not is_comb:
                continue
            pairs = set(initial_pairs(t))
            for u in range(t.n):
                for v in range(u + 1, t.n):
                    res.expect_equal(
                        f"tokens on ({u}, {v}) win", initial_pair_wins(t, u, v), (u, v) in pairs, t
                    )
        for n in range(3, n_max + 1):
            from_census = census(n, n)[0].counts.get(2, 0)
            res.expect_equal(f"Z_1 = 2 count at n={n}", from_census, count_nonpath_combs(n), None)

    return _timed("combs", body)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def check_families(solver_config: Optional[SolverConfig] = None, spider_max: int = 3) -> CheckResult:
    """Double star, spiders and pick combs with known values."""

    def body(res: CheckResult) -> None:
        ds = gen_double_star(3, 3)
        res.expect_equal("Z(double star)", z_number(ds, solver_config), 4, ds)
        res.expect_equal("Z_1(double star)", zq_number(ds, 1, solver_config), 3, ds)
        res.expect_equal("static Z_1(double star)", zq_static(ds, 1, solver_config), 4, ds)

        for k in range(1, spider_max + 1):
            sp = gen_spider(k)
            res.expect_equal(f"Z(spider {k})", z_number(sp, solver_config), k + 2, sp)
            res.expect_equal(f"path cover(spider {k})", path_cover_number(sp), k + 2, sp)
            res.expect_equal(f"Z_{k}(spider {k})", zq_number(sp, k, solver_config), k + 1, sp)
            if k >= 2:
                res.expect_equal(f"Z_{k - 1}(spider {k})", zq_number(sp, k - 1, solver_config), k + 1, sp)

        claw = CombSpec(1, ((0, 1), (0, 1), (0, 1)))
        long_comb = CombSpec(3, ((0, 1), (1, 1), (2, 1)))
        instances = [
            gen_pick_comb(claw, (1, 2), PathAttachment(1)),
            gen_pick_comb(claw, (1, 2), PathAttachment(3)),
            gen_pick_comb(claw, (2, 3), LadderAttachment(3)),
            gen_pick_comb(long_comb, (3, 5), PathAttachment(2)),
            gen_pick_comb(long_comb, (3, 5), LadderAttachment(2)),
        ]
        for g in instances:
            res.expect_equal("Z_1(pick comb)", zq_number(g, 1, solver_config), 2, g)

    return _timed("families", body)


# ---------------------------------------------------------------------------
# exhaustive small graphs
# ---------------------------------------------------------------------------


def check_atlas(n_max: int, solver_config: Optional[SolverConfig] = None, progress: bool = False) -> CheckResult:
    """
    Over all connected graphs with n <= n_max:
    - Z_0 <= Z_1 <= Z_2 <= Z_3 <= Z
    - Z_k <= k implies Z_k = Z, and Z_k = k implies Z_{k-1} = k
    - Z_0 = 1 iff tree; Z_q = 1 iff path (q = 1, 2, 3)
    - Z_q = 2 iff Z = 2 (q = 2, 3)
    """

    def body(res: CheckResult) -> None:
        for g in tqdm(connected_atlas(n_max), desc="atlas", disable=not progress, leave=False):
            z = z_number(g, solver_config)
            zq = [z0_number(g, solver_config)] + [zq_number(g, q, solver_config) for q in (1, 2, 3)]
            res.expect_equal("Z_0 via game", zq_number(g, 0, solver_config), zq[0], g)
            res.expect_equal("Z_inf via game", zq_number(g, math.inf, solver_config), z, g)
            chain = zq + [z]
            res.expect(all(a <= b for a, b in zip(chain, chain[1:])), g, f"chain not monotone: {chain}")
            for k in (1, 2, 3):
                if zq[k] <= k:
                    res.expect_equal(f"Z_{k} <= {k} forces Z_{k} = Z", zq[k], z, g)
                if zq[k] == k:
                    res.expect_equal(f"Z_{k} = {k} forces Z_{k - 1}", zq[k - 1], k, g)
            res.expect_equal("Z_0 = 1 iff tree", zq[0] == 1, g.is_tree(), g)
            for q in (1, 2, 3):
                res.expect_equal(f"Z_{q} = 1 iff path", zq[q] == 1, g.is_path(), g)
            for q in (2, 3):
                res.expect_equal(f"Z_{q} = 2 iff Z = 2", zq[q] == 2, z == 2, g)

    return _timed("atlas", body)


def _random_tree(n: int, rng: np.random.Generator) -> Graph:
    if n <= 2:
        return Graph(n, [(0, 1)] if n == 2 else [])
    sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
    return Graph.from_networkx(nx.from_prufer_sequence(sequence))


def check_stalling(samples: int, n_max: int, seed: int) -> CheckResult:
    """
    Sampled states with at most q tokens spent, no force available and an
    announcement of at least q+1 components: the stalling response is a
    nonempty sub-list of the announcement and fills nothing.
    """

    def body(res: CheckResult) -> None:
        rng = np.random.default_rng(seed)
        collected = 0
        attempts = 0
        while collected < samples and attempts < 50 * samples:
            attempts += 1
            t = _random_tree(int(rng.integers(3, n_max + 1)), rng)
            q = int(rng.integers(1, 4))
            game = ZqGame(t, q)
            for v in rng.choice(t.n, size=int(rng.integers(1, q + 1)), replace=False):
                if int(v) not in game.filled:
                    game.spend_token(int(v))
                    game.propagate()
            if game.game_over or not game.can_announce:
                continue
            comps = game.components
            size = int(rng.integers(q + 1, len(comps) + 1))
            picks = rng.choice(len(comps), size=size, replace=False)
            announced = [comps[int(i)] for i in sorted(picks)]
            response = stalling_response(t, game.frontier, announced)
            active = 0
            for comp in response:
                active |= comp.mask
            filled = game.filled.mask
            ok = (
                bool(response)
                and all(c in announced for c in response)
                and closure_mask(t.neighbor_masks, filled, active) == filled
            )
            res.expect(ok, t, f"q={q} filled={game.filled} announced={announced} response={response}")
            collected += 1
        res.expect(collected == samples, None, f"only {collected} of {samples} qualifying states sampled")

    return _timed("stalling", body)


def _random_order_closure(nbr: Sequence[int], full: int, filled: int, rng: np.random.Generator) -> int:
    """Apply one uniformly chosen single force at a time until none is left."""
    mask = filled
    while True:
        forces = available_forces(nbr, mask, full & ~mask)
        if not forces:
            return mask
        mask |= 1 << forces[int(rng.integers(len(forces)))][1]


def check_confluence(samples: int, n_max: int, orders: int, seed: int) -> CheckResult:
    """
    Random graphs on 2..n_max vertices with random filled sets: single
    forces applied in `orders` random orders all stop at the closure.
    """

    def body(res: CheckResult) -> None:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            n = int(rng.integers(2, n_max + 1))
            g = Graph.from_networkx(
                nx.gnp_random_graph(n, float(rng.uniform(0.2, 0.7)), seed=int(rng.integers(1 << 31)))
            )
            filled = int(rng.integers(0, 1 << n))
            nbr = g.neighbor_masks
            expected = closure_mask(nbr, filled, g.full_mask & ~filled)
            ends = {_random_order_closure(nbr, g.full_mask, filled, rng) for _ in range(orders)}
            res.expect(
                ends == {expected},
                g,
                f"filled={VertexSet.from_mask(filled)}: {len(ends)} fixed point(s) over {orders} orders",
            )

    return _timed("confluence", body)


def check_closure_laws(n_max: int, progress: bool = False) -> CheckResult:
    """
    Every graph with n <= n_max and every filled set F:
    - induced_closure(g, F, V minus F) equals closure(g, F)
    - closure(F) ⊆ closure(F ∪ {v}) for each v; chaining gives monotonicity
    """

    def body(res: CheckResult) -> None:
        for g in tqdm(graph_atlas(n_max), desc="closure laws", disable=not progress, leave=False):
            closed = [closure(g, VertexSet.from_mask(m)).mask for m in range(1 << g.n)]
            for m in range(1 << g.n):
                filled = VertexSet.from_mask(m)
                restricted = induced_closure(g, filled, filled.complement(g.n)).mask
                res.expect_equal(f"restricted closure of {filled}", restricted, closed[m], g)
                for v in _bits(g.full_mask & ~m):
                    res.expect(
                        closed[m] & ~closed[m | 1 << v] == 0,
                        g,
                        f"closure of {filled} not inside closure after adding {v}",
                    )

    return _timed("closure-laws", body)


def check_game_values(
    samples: int, n_max: int, seed: int, solver_config: Optional[SolverConfig] = None
) -> CheckResult:
    """
    Game values never increase when the filled set grows, and announcement
    sizes beyond q+1 never change a value.
    """

    def body(res: CheckResult) -> None:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            n = int(rng.integers(2, n_max + 1))
            g = Graph.from_networkx(
                nx.gnp_random_graph(n, float(rng.uniform(0.2, 0.7)), seed=int(rng.integers(1 << 31)))
            )
            q = int(rng.integers(0, 3))
            cfg = (solver_config or SolverConfig()).with_q(q)
            solver = ZqSolver(g, cfg)
            value = solver.solve().value
            bad = solver.memo.monotonicity_violations()
            res.expect(not bad, g, f"Z_{q} value increases from {bad[:1]}")
            if g.n <= 6:
                wide = ZqSolver(g, dataclasses.replace(cfg, all_announcements=True))
                res.expect_equal(f"Z_{q} with all announcement sizes", wide.solve().value, value, g)

    return _timed("game-values", body)


def _subset_unions(comps: Sequence[int]) -> List[int]:
    """unions[b] = union of comps[i] over the bits i of b."""
    unions = [0] * (1 << len(comps))
    for b in range(1, len(unions)):
        low = b & -b
        unions[b] = unions[b ^ low] | comps[low.bit_length() - 1]
    return unions


def check_forts(n_max: int, progress: bool = False) -> CheckResult:
    """
    Over all connected graphs with n <= n_max and every fort W:
    - F missing W implies closure(F) misses W
    - from a closed state C missing W, a response whose components cover W
      forces nothing into W
    - every announcement of two or more components from C has a response
      that leaves W unfilled
    - the Z_1 game from C still needs a token
    """

    def body(res: CheckResult) -> None:
        for g in tqdm(connected_atlas(n_max), desc="forts", disable=not progress, leave=False):
            nbr = g.neighbor_masks
            full = g.full_mask
            forts = [w for w in range(1, 1 << g.n) if is_fort(g, VertexSet.from_mask(w))]
            if not forts:
                continue
            solver = ZqSolver(g, SolverConfig(q=1))

            closed_states = set()
            for f in range(1 << g.n):
                c = closure_mask(nbr, f, full & ~f)
                for w in forts:
                    if not w & f:
                        res.expect(
                            not c & w,
                            g,
                            f"closure of {VertexSet.from_mask(f)} enters fort {VertexSet.from_mask(w)}",
                        )
                closed_states.add(c)

            for c in sorted(closed_states):
                blocked = [w for w in forts if not w & c]
                if not blocked:
                    continue
                state = VertexSet.from_mask(c)
                res.expect(solver.value(state) >= 1, g, f"Z_1 game won from {state} with an unfilled fort")

                unions = _subset_unions(component_masks(nbr, full & ~c))
                after = [closure_mask(nbr, c, u) for u in unions]
                size = len(unions)
                for w in blocked:
                    fort = VertexSet.from_mask(w)
                    # stall[b]: some nonempty response inside b keeps W unfilled
                    stall = [False] * size
                    for b in range(1, size):
                        if not w & ~unions[b]:
                            res.expect(
                                not after[b] & w, g, f"response covering fort {fort} from {state} fills it"
                            )
                        stall[b] = not after[b] & w or any(stall[b & ~(1 << i)] for i in _bits(b))
                        if b & (b - 1):
                            res.expect(
                                stall[b],
                                g,
                                f"announcement {VertexSet.from_mask(unions[b])} from {state} "
                                f"cannot keep fort {fort} unfilled",
                            )

    return _timed("forts", body)


def check_single_forces(
    n_max: int,
    qs: Sequence[float] = (0, 1, 2, 3, math.inf),
    solver_config: Optional[SolverConfig] = None,
    progress: bool = False,
) -> CheckResult:
    """Closure jumps and one-force-at-a-time play give the same Z_q on every connected graph."""

    def body(res: CheckResult) -> None:
        base = solver_config or SolverConfig()
        for g in tqdm(connected_atlas(n_max), desc="single forces", disable=not progress, leave=False):
            for q in qs:
                cfg = base.with_q(q)
                jumped = ZqSolver(g, dataclasses.replace(cfg, jump_closure=True)).solve().value
                single = ZqSolver(g, dataclasses.replace(cfg, jump_closure=False)).solve().value
                res.expect_equal(f"Z_{format_q(cfg.q)} with single forces", single, jumped, g)

    return _timed("single-forces", body)



def check_playouts(samples: int, n_max: int, seed: int) -> CheckResult:
    """
    Playing the solver's moves in the environment never spends more than
    the game value, whichever oracle answers.
    """

    def body(res: CheckResult) -> None:
        rng = np.random.default_rng(seed)
        for i in range(samples):
            t = _random_tree(int(rng.integers(3, n_max + 1)), rng) if i % 2 else Graph.from_networkx(
                nx.connected_watts_strogatz_graph(int(rng.integers(4, n_max + 1)), 2, 0.5, seed=int(rng.integers(1 << 31)))
            )
            q = int(rng.integers(1, 3))
            solver = ZqSolver(t, SolverConfig(q=q))
            value = solver.solve().value
            oracle = stalling_oracle if i % 3 else random_oracle
            env = OracleWrapper(ZqForcingEnv(t, q), oracle)
            env.reset(seed=int(rng.integers(1 << 31)))
            base = env.unwrapped
            spent = 0
            terminated = base.game.game_over
            while not terminated:
                move = solver.best_move(base.game.filled)
                action = {"kind": move.kind.value, "vertex": 0, "announce": np.zeros(t.n, dtype=np.int8)}
                if move.kind is MoveKind.TOKEN:
                    action["vertex"] = move.vertex
                else:
                    action["announce"] = base.encode_components(move.announced)
                _, reward, terminated, _, _ = env.step(action)
                spent -= int(reward)
            res.expect(spent <= value, t, f"q={q}: spent {spent} tokens, value {value}")

    return _timed("playouts", body)


def check_census(n_max: int, workers: int = 1, progress: bool = False) -> CheckResult:
    def body(res: CheckResult) -> None:
        rows = census(3, n_max, workers=workers, progress=progress)
        bad = compare_with_published(rows)
        res.cases = sum(len(r.counts) for r in rows)
        for n, k, expected, actual in bad:
            cell = "row total" if k == 0 else f"k={k}"
            res.mismatches.append(Mismatch("census", None, f"n={n} {cell}: got {actual}, expected {expected}"))

    return _timed("census", body)


# ---------------------------------------------------------------------------


CHECKS = (
    "tree-oracle",
    "formulas",
    "root-values",
    "path-cover",
    "binary-trees",
    "combs",
    "families",
    "atlas",
    "stalling",
    "confluence",
    "closure-laws",
    "game-values",
    "forts",
    "single-forces",
    "playouts",
    "census",
)


def run_verify(
    config: Optional[AppConfig] = None,
    only: Optional[Sequence[str]] = None,
    progress: bool = False,
) -> VerifyReport:
    """
    Run the selected checks (all by default) at the configured scales.

    Raises:
        ValueError: On an unknown check name
    """
    app = config or AppConfig()
    v: VerifyConfig = app.verify
    s: SolverConfig = app.solver
    runners: Dict[str, Callable[[], CheckResult]] = {
        "tree-oracle": lambda: check_tree_oracle(v.tree_oracle_n, s, progress),
        "formulas": lambda: check_formulas(v.formula_n, progress),
        "root-values": lambda: check_root_values(min(v.formula_n + 3, 12), progress),
        "path-cover": lambda: check_path_cover(v.tree_oracle_n, s, progress),
        "binary-trees": lambda: check_binary_trees(v.binary_depth),
        "combs": lambda: check_combs(v.comb_n, progress),
        "families": lambda: check_families(s),
        "atlas": lambda: check_atlas(v.atlas_n, s, progress),
        "stalling": lambda: check_stalling(v.stalling_samples, v.stalling_tree_n, v.seed),
        "confluence": lambda: check_confluence(
            v.confluence_samples, v.confluence_n, v.confluence_orders, v.seed
        ),
        "closure-laws": lambda: check_closure_laws(v.property_n, progress),
        "game-values": lambda: check_game_values(v.confluence_samples, v.property_n, v.seed, s),
        "forts": lambda: check_forts(v.fort_n, progress),
        "single-forces": lambda: check_single_forces(v.single_force_n, solver_config=s, progress=progress),
        "playouts": lambda: check_playouts(v.confluence_samples, v.property_n + 2, v.seed),
        "census": lambda: check_census(v.census_n, app.workers, progress),
    }
    selected = list(only) if only else list(CHECKS)
    unknown = [name for name in selected if name not in runners]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")

    report = VerifyReport()
    for name in selected:
        report.results.append(runners[name]())
    return report
