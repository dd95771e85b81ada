"""
Graph input and output: graph6 and 0-based edge lists.
"""

import logging
import re
from typing import List, Union

import networkx as nx

from .errors import GraphFormatError
from .graph import Graph

logger = logging.getLogger(__name__)

FORMATS = ("graph6", "edgelist")
GRAPH6_HEADER = b">>graph6<<"

_TOKEN = re.compile(rb"\S+")


def _as_bytes(data: Union[bytes, str]) -> bytes:
    if not isinstance(data, str):
        return data
    try:
        return data.encode("ascii")
    except UnicodeEncodeError as exc:
        # everything before exc.start is ASCII, so the character index is the byte offset
        raise GraphFormatError(f"non-ASCII character {data[exc.start]!r}", exc.start) from None


def _graph6_size(line: bytes, base: int = 0) -> tuple[int, int]:
    """(n, header length) of a graph6 string."""
    if not line:
        raise GraphFormatError("empty graph6 string", base)
    if line[0] != 126:
        return line[0] - 63, 1
    if len(line) >= 2 and line[1] == 126:
        if len(line) < 8:
            raise GraphFormatError("truncated graph6 size header", base + len(line))
        n = 0
        for byte in line[2:8]:
            n = (n << 6) | (byte - 63)
        return n, 8
    if len(line) < 4:
        raise GraphFormatError("truncated graph6 size header", base + len(line))
    n = 0
    for byte in line[1:4]:
        n = (n << 6) | (byte - 63)
    return n, 4


def _parse_graph6_line(line: bytes, base_offset: int = 0) -> Graph:
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER) :]
        base_offset += len(GRAPH6_HEADER)
    for i, byte in enumerate(line):
        if not 63 <= byte <= 126:
            raise GraphFormatError(f"byte {byte!r} outside the graph6 range 63..126", base_offset + i)
    n, header = _graph6_size(line, base_offset)
    expected = header + (n * (n - 1) // 2 + 5) // 6
    if len(line) != expected:
        offset = min(len(line), expected)
        raise GraphFormatError(
            f"graph6 body has {len(line) - header} bytes, expected {expected - header}",
            base_offset + offset,
        )
    return Graph.from_networkx(nx.from_graph6_bytes(line))


def _parse_edgelist(data: bytes) -> Graph:
    tokens = list(_TOKEN.finditer(data))
    values = []
    for match in tokens:
        try:
            values.append(int(match.group()))
        except ValueError:
            raise GraphFormatError(f"expected an integer, got {match.group()!r}", match.start()) from None

    first_line = data.split(b"\n", 1)[0].split()
    n = None
    if len(first_line) == 1 and values:
        n = values.pop(0)
        tokens.pop(0)
        if n < 0:
            raise GraphFormatError("vertex count must be non-negative", 0)
    if len(values) % 2:
        raise GraphFormatError("edge list ends with an unpaired vertex", tokens[-1].start())
    for value, match in zip(values, tokens):
        if value < 0:
            raise GraphFormatError("vertex indices are 0-based and non-negative", match.start())
    edges = list(zip(values[0::2], values[1::2]))
    if n is None:
        n = max(values) + 1 if values else 0
    return Graph(n, edges)


def parse_graph(data: Union[bytes, str], fmt: str = "graph6") -> Graph:
    """
    Parse one graph.

    Args:
        data: graph6 string or edge list ("u v" pairs, optional first line n)
        fmt: "graph6" or "edgelist"

    Raises:
        GraphFormatError: On malformed input (with byte offset)
        GraphValidationError: On self-loops, duplicate edges or bad endpoints
    """
    graphs = parse_graphs(data, fmt)
    if len(graphs) != 1:
        raise GraphFormatError(f"expected one graph, found {len(graphs)}", 0)
    return graphs[0]


def parse_graphs(data: Union[bytes, str], fmt: str = "graph6") -> List[Graph]:
    """
    Parse one graph per graph6 line, or a single edge list.

    Raises:
        GraphFormatError: On an unknown format or malformed input
    """
    raw = _as_bytes(data)
    if fmt == "edgelist":
        return [_parse_edgelist(raw)]
    if fmt != "graph6":
        raise GraphFormatError(f"unknown format {fmt!r} (choose from {', '.join(FORMATS)})", 0)

    graphs = []
    offset = 0
    for line in raw.split(b"\n"):
        stripped = line.rstrip(b"\r \t")
        if stripped:
            graphs.append(_parse_graph6_line(stripped, offset))
        offset += len(line) + 1
    logger.debug("parsed %d graph6 graph(s)", len(graphs))
    return graphs


def emit_graph(g: Graph, fmt: str = "graph6") -> str:
    """
    Serialize a graph.

    graph6 without header; edgelist with the vertex count on the first line.
    """
    if fmt == "graph6":
        return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").strip()
    if fmt == "edgelist":
        return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges])
    raise GraphFormatError(f"unknown format {fmt!r} (choose from {', '.join(FORMATS)})", 0)
