"""
Census

Histogram of Z_1 over all non-isomorphic free trees on n vertices.
"""

import csv
import io
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import networkx as nx
from tqdm import tqdm

from .config import CensusConfig
from .errors import ContractViolation, ResourceLimitExceeded
from .graph import Graph
from .structure import comb_decompose
from .trees import z1_tree

logger = logging.getLogger(__name__)

# number of free trees on n = 1..20 vertices
FREE_TREE_COUNTS: Dict[int, int] = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47, 10: 106,
    11: 235, 12: 551, 13: 1301, 14: 3159, 15: 7741, 16: 19320,
    17: 48629, 18: 123867, 19: 317955, 20: 823065,
}  # fmt: skip

# published counts of trees with Z_1 = k, k = 1..11
PUBLISHED_COUNTS: Dict[int, Tuple[int, ...]] = {
    3: (1,),
    4: (1, 1),
    5: (1, 1, 1),
    6: (1, 3, 1, 1),
    7: (1, 5, 3, 1, 1),
    8: (1, 10, 7, 3, 1, 1),
    9: (1, 17, 17, 7, 3, 1, 1),
    10: (1, 35, 39, 19, 7, 3, 1, 1),
    11: (1, 63, 95, 45, 19, 7, 3, 1, 1),
    12: (1, 126, 228, 118, 47, 19, 7, 3, 1, 1),
    13: (1, 240, 559, 298, 125, 47, 19, 7, 3, 1, 1),
    14: (1, 479, 1372, 781, 321, 127, 47, 19, 7, 3, 1),
    15: (1, 934, 3387, 2031, 855, 328, 127, 47, 19, 7, 3),
    16: (1, 1867, 8399, 5372, 2266, 880, 330, 127, 47, 19, 7),
    17: (1, 3687, 20871, 14223, 6081, 2344, 887, 330, 127, 47, 19),
    18: (1, 7372, 52010, 38002, 16353, 6336, 2369, 889, 330, 127, 47),
    19: (1, 14654, 129792, 101844, 44312, 17136, 6416, 2376, 889, 330, 127),
    20: (1, 29304, 324514, 274449, 120437, 46721, 17396, 6441, 2378, 889, 330),
}


@dataclass(frozen=True)
class CensusRow:
    """Number of trees on n vertices with each Z_1 value k."""

    n: int
    counts: Dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _tree_centers(t: Graph) -> List[int]:
    """Center (or bicenter) by repeated leaf peeling."""
    deg = t.degrees()
    leaves = [v for v, d in enumerate(deg) if d <= 1]
    removed = len(leaves)
    while removed < t.n:
        new_leaves = []
        for u in leaves:
            deg[u] = 0
            for v in t.neighbors(u):
                if deg[v] > 0:
                    deg[v] -= 1
                    if deg[v] == 1:
                        new_leaves.append(v)
        removed += len(new_leaves)
        leaves = new_leaves
    return leaves


def _ahu_code(t: Graph, root: int) -> str:
    codes: Dict[int, str] = {}
    parent = {root: -1}
    order = [root]
    for w in order:
        for x in t.neighbors(w):
            if x != parent[w]:
                parent[x] = w
                order.append(x)
    for w in reversed(order):
        inner = sorted(codes[x] for x in t.neighbors(w) if x != parent[w])
        codes[w] = "(" + "".join(inner) + ")"
    return codes[root]


def canonical_form(t: Graph) -> str:
    """
    Isomorphism-invariant code of a tree: the AHU code rooted at the
    center, the smaller of the two for a bicenter.
    """
    if not t.is_tree():
        raise ContractViolation("canonical_form needs a tree")
    return min(_ahu_code(t, c) for c in _tree_centers(t))


def enumerate_trees(n: int, limit: Optional[int] = None) -> Iterator[Graph]:
    """
    One tree per isomorphism class on n vertices.

    Raises:
        ContractViolation: If n < 1
        ResourceLimitExceeded: If n exceeds limit (default: the census cap)
    """
    limit = CensusConfig().n_limit if limit is None else limit
    if n < 1:
        raise ContractViolation(f"trees need at least one vertex, got n={n}")
    if n > limit:
        raise ResourceLimitExceeded("tree enumeration vertex count", limit, n)
    if n == 1:
        yield Graph(1)
        return
    if n == 2:
        yield Graph(2, [(0, 1)])
        return
    for tree in nx.nonisomorphic_trees(n):
        yield Graph.from_networkx(tree)


def _histogram(edge_lists: Sequence[Tuple[int, Tuple[Tuple[int, int], ...]]]) -> Counter:
    counts: Counter = Counter()
    for n, edges in edge_lists:
        counts[z1_tree(Graph(n, edges))] += 1
    return counts


def _batches(trees: Iterable[Graph], size: int) -> Iterator[List[Tuple[int, Tuple[Tuple[int, int], ...]]]]:
    batch = []
    for t in trees:
        batch.append((t.n, t.edges))
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def census_row(
    n: int,
    workers: int = 1,
    config: Optional[CensusConfig] = None,
    progress: bool = False,
) -> CensusRow:
    """Z_1 histogram over all trees on n vertices."""
    cfg = config or CensusConfig()
    trees = enumerate_trees(n, cfg.n_limit)
    batches = _batches(trees, cfg.chunk_size)
    total_batches = -(-FREE_TREE_COUNTS.get(n, 0) // cfg.chunk_size) or None

    counts: Counter = Counter()
    if workers <= 1:
        results: Iterable[Counter] = map(_histogram, batches)
        for part in tqdm(results, total=total_batches, desc=f"n={n}", disable=not progress):
            counts.update(part)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_histogram, batches)
            for part in tqdm(results, total=total_batches, desc=f"n={n}", disable=not progress):
                counts.update(part)

    row = CensusRow(n, dict(sorted(counts.items())))
    logger.info("census n=%d: %d trees", n, row.total)
    return row


def census(
    n_min: int,
    n_max: int,
    workers: int = 1,
    config: Optional[CensusConfig] = None,
    progress: bool = False,
) -> List[CensusRow]:
    """
    Census rows for n_min..n_max.

    The result does not depend on the worker count.

    Raises:
        ContractViolation: Unless 3 <= n_min <= n_max
        ResourceLimitExceeded: If n_max exceeds the configured cap
    """
    cfg = config or CensusConfig()
    if not 3 <= n_min <= n_max:
        raise ContractViolation(f"census needs 3 <= n_min <= n_max, got {n_min}..{n_max}")
    if n_max > cfg.n_limit:
        raise ResourceLimitExceeded("census vertex count", cfg.n_limit, n_max)
    return [census_row(n, workers, cfg, progress) for n in range(n_min, n_max + 1)]


def count_nonpath_combs(n: int, limit: Optional[int] = None) -> int:
    """Number of trees on n vertices that are combs but not paths."""
    return sum(
        1 for t in enumerate_trees(n, limit) if not t.is_path() and comb_decompose(t) is not None
    )


def compare_with_published(rows: Sequence[CensusRow]) -> List[Tuple[int, int, int, int]]:
    """
    Cells that differ from the published counts.

    Returns:
        (n, k, expected, actual) for every mismatching cell with k <= 11,
        plus (n, 0, expected total, actual total) for wrong row sums
    """
    mismatches = []
    for row in rows:
        expected_total = FREE_TREE_COUNTS.get(row.n)
        if expected_total is not None and row.total != expected_total:
            mismatches.append((row.n, 0, expected_total, row.total))
        for k, expected in enumerate(PUBLISHED_COUNTS.get(row.n, ()), start=1):
            actual = row.counts.get(k, 0)
            if actual != expected:
                mismatches.append((row.n, k, expected, actual))
    return mismatches


def write_census_csv(rows: Sequence[CensusRow], out: Union[str, Path, TextIO, None] = None) -> str:
    """
    Write rows as CSV with header n,k,count sorted by (n, k).

    Returns:
        The CSV text
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "k", "count"])
    for row in sorted(rows, key=lambda r: r.n):
        for k in sorted(row.counts):
            writer.writerow([row.n, k, row.counts[k]])
    text = buffer.getvalue()

    if isinstance(out, (str, Path)):
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    elif out is not None:
        out.write(text)
    return text
