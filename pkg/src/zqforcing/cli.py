"""
Command-line front end.

    zqforcing compute  --q 1 --input "0 1,1 2,1 3" --format edgelist
    zqforcing classify --q 2 --input graphs.g6
    zqforcing census   --n 3..8 --output results/table.csv
    zqforcing generate --family spider --param k=2
    zqforcing verify   --checks tree-oracle,formulas

Exit status: 0 success, 2 invalid input or config, 3 resource cap hit,
4 verification mismatch.
"""

import argparse
import dataclasses
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from . import __version__
from .census import census, compare_with_published, write_census_csv
from .config import AppConfig, QValue, format_q, load_config, parse_q
from .errors import (
    ConfigError,
    ContractViolation,
    GraphFormatError,
    ResourceLimitExceeded,
    VerificationFailed,
)
from .formats import FORMATS, emit_graph, parse_graphs
from .generators import (
    FAMILIES,
    CombSpec,
    LadderAttachment,
    PathAttachment,
    gen_comb,
    gen_complete_binary,
    gen_cycle,
    gen_double_star,
    gen_ladder,
    gen_path,
    gen_pick_comb,
    gen_spider,
    gen_star,
)
from .graph import Graph
from .solvers import solve_zq
from .structure import classify
from .verify import CHECKS, run_verify

logger = logging.getLogger(__name__)

COMMANDS = ("compute", "classify", "census", "verify", "generate")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_MISMATCH = 4


@dataclass(frozen=True)
class CliConfig:
    """
    One parsed command line.

    Attributes:
        command: compute, classify, census, verify or generate
        q: Oracle parameter
        input: File path, "-" for stdin, or an inline graph
        format: graph6 or edgelist (input and output)
        output: Output file (None: stdout)
        n_range: (n_min, n_max) for census
        workers: Worker processes (None: config / ZQ_WORKERS)
        cap_states: Solver state cap override
        family: Generator family
        params: Generator parameters
        config_path: YAML config file
        checks: Subset of verify checks
        progress: Show progress bars
        verbose: Debug logging
    """

    command: str
    q: QValue = 1
    input: Optional[str] = None
    format: str = "graph6"
    output: Optional[str] = None
    n_range: Optional[Tuple[int, int]] = None
    workers: Optional[int] = None
    cap_states: Optional[int] = None
    family: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    config_path: Optional[str] = None
    checks: Tuple[str, ...] = ()
    progress: bool = False
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.command in ("compute", "classify") and self.input is None:
            raise ConfigError(f"{self.command} needs --input")
        if self.command == "census" and self.n_range is None:
            raise ConfigError("census needs --n (e.g. 3..8)")
        if self.command == "generate" and self.family is None:
            raise ConfigError("generate needs --family")
        for name in ("workers", "cap_states"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive, got {value}")


def parse_n_range(text: str) -> Tuple[int, int]:
    """ "3..8" -> (3, 8); "7" -> (7, 7)."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return int(low), int(high)
        return int(text), int(text)
    except ValueError:
        raise ConfigError(f"--n expects N or N_MIN..N_MAX, got {text!r}") from None


def parse_params(items: Sequence[str]) -> Dict[str, str]:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _read_input(source: str, fmt: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    path = Path(source)
    if path.is_file():
        return path.read_bytes()
    if fmt == "edgelist":
        # inline edge lists separate pairs with "," or ";"
        return source.replace(";", "\n").replace(",", "\n").encode()
    return source.encode()


def _int_param(params: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in params:
        if default is None:
            raise ConfigError(f"family needs --param {key}=...")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise ConfigError(f"--param {key} must be an integer, got {params[key]!r}") from None


def _comb_spec(params: Dict[str, str]) -> CombSpec:
    teeth = []
    for item in filter(None, params.get("teeth", "").split(",")):
        index, _, length = item.partition(":")
        try:
            teeth.append((int(index), int(length or 1)))
        except ValueError:
            raise ConfigError(f"teeth expects INDEX:LENGTH items, got {item!r}") from None
    return CombSpec(_int_param(params, "spine", 1), tuple(teeth))


def generate_family(family: str, params: Dict[str, str]) -> Graph:
    """
    Build a family member from --param values.

    Families and parameters:
        path n, cycle n, star k, ladder m, spider k, double-star a b,
        binary d, comb spine teeth=I:L,..., pick-comb (comb params) pair=U,V
        and path=L or ladder=M
    """
    if family == "path":
        return gen_path(_int_param(params, "n"))
    if family == "cycle":
        return gen_cycle(_int_param(params, "n"))
    if family == "star":
        return gen_star(_int_param(params, "k"))
    if family == "ladder":
        return gen_ladder(_int_param(params, "m"))
    if family == "spider":
        return gen_spider(_int_param(params, "k"))
    if family == "double-star":
        return gen_double_star(_int_param(params, "a", 3), _int_param(params, "b", 3))
    if family == "binary":
        return gen_complete_binary(_int_param(params, "d"))
    if family == "comb":
        return gen_comb(_comb_spec(params))
    if family == "pick-comb":
        try:
            u, v = (int(x) for x in params.get("pair", "").split(","))
        except ValueError:
            raise ConfigError("pick-comb needs --param pair=U,V") from None
        if "ladder" in params:
            attachment = LadderAttachment(_int_param(params, "ladder"))
        else:
            attachment = PathAttachment(_int_param(params, "path", 1))
        return gen_pick_comb(_comb_spec(params), (u, v), attachment)
    raise ConfigError(f"unknown family {family!r} (choose from {', '.join(FAMILIES)})")


def _app_config(config: CliConfig) -> AppConfig:
    app = load_config(config.config_path)
    if config.workers is not None:
        app = dataclasses.replace(app, workers=config.workers)
    if config.cap_states is not None:
        app = dataclasses.replace(
            app, solver=dataclasses.replace(app.solver, state_limit=config.cap_states)
        )
    return dataclasses.replace(app, solver=app.solver.with_q(config.q))


def _compute(config: CliConfig, app: AppConfig, out: TextIO) -> int:
    graphs = parse_graphs(_read_input(config.input, config.format), config.format)
    many = len(graphs) > 1
    for g in graphs:
        result = solve_zq(g, config.q, app.solver)
        prefix = f"{emit_graph(g)}\t" if many else ""
        print(f"{prefix}Z_{format_q(config.q)}: {result.value}", file=out)
        if result.first_move is not None and not many:
            print(f"first move: {result.first_move.describe()}", file=out)
    return EXIT_OK


def _classify(config: CliConfig, app: AppConfig, out: TextIO) -> int:
    graphs = parse_graphs(_read_input(config.input, config.format), config.format)
    for g in graphs:
        result = classify(g, config.q, app.solver)
        prefix = f"{emit_graph(g)}\t" if len(graphs) > 1 else ""
        print(f"{prefix}{result.describe()}", file=out)
    return EXIT_OK


def _census(config: CliConfig, app: AppConfig, out: TextIO) -> int:
    n_min, n_max = config.n_range
    rows = census(n_min, n_max, workers=app.workers, config=app.census, progress=config.progress)
    write_census_csv(rows, out)
    for n, k, expected, actual in compare_with_published(rows):
        logger.warning("census n=%d k=%d: %d differs from the published %d", n, k, actual, expected)
    return EXIT_OK


def _generate(config: CliConfig, app: AppConfig, out: TextIO) -> int:
    g = generate_family(config.family, config.params)
    print(emit_graph(g, config.format), file=out)
    return EXIT_OK


def _verify(config: CliConfig, app: AppConfig, out: TextIO) -> int:
    unknown = [c for c in config.checks if c not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown check(s): {', '.join(unknown)} (choose from {', '.join(CHECKS)})")
    report = run_verify(app, config.checks or None, progress=config.progress)

    print("=" * 50, file=out)
    print("VERIFICATION SUMMARY", file=out)
    print("=" * 50, file=out)
    for result in report.results:
        mark = "✓" if result.ok else "✗"
        print(
            f"{mark} {result.name}: {result.cases} cases, "
            f"{len(result.mismatches)} mismatches ({result.seconds:.1f}s)",
            file=out,
        )
    print("=" * 50, file=out)
    if not report.ok:
        worst = report.minimal_counterexample()
        print(f"Minimal counterexample: {worst.describe()}", file=out)
        raise VerificationFailed(report.mismatches)
    return EXIT_OK


_HANDLERS = {
    "compute": _compute,
    "classify": _classify,
    "census": _census,
    "generate": _generate,
    "verify": _verify,
}


def run(config: CliConfig, stdout: Optional[TextIO] = None) -> int:
    """
    Execute one command.

    Returns:
        Exit status (0, 2, 3 or 4); errors are reported on stderr
    """
    out = stdout if stdout is not None else sys.stdout
    handle: Optional[TextIO] = None
    try:
        app = _app_config(config)
        if config.output is not None:
            Path(config.output).parent.mkdir(parents=True, exist_ok=True)
            handle = open(config.output, "w", encoding="utf-8", newline="")
        return _HANDLERS[config.command](config, app, handle or out)
    except VerificationFailed as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ResourceLimitExceeded as exc:
        print(f"Error: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (GraphFormatError, ContractViolation, ConfigError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        if handle is not None:
            handle.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zqforcing", description="Exact q-analogue zero forcing numbers and tree census"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS, help="What to run")
    parser.add_argument("--q", default="1", help="Oracle parameter: non-negative integer or 'inf' (default: 1)")
    parser.add_argument("--format", default="graph6", choices=FORMATS, help="Graph format (default: graph6)")
    parser.add_argument("--input", help="Graph file, '-' for stdin, or an inline graph")
    parser.add_argument("--output", help="Output file (default: stdout)")
    parser.add_argument("--n", help="Census vertex range, e.g. 3..8")
    parser.add_argument("--workers", type=int, help="Worker processes (default: $ZQ_WORKERS or config)")
    parser.add_argument("--cap-states", type=int, help="Maximum memoized game states")
    parser.add_argument("--family", choices=FAMILIES, help="Generator family")
    parser.add_argument("--param", action="append", default=[], help="Generator parameter key=value (repeatable)")
    parser.add_argument("--config", help="YAML config file (default: ./config.yaml if present)")
    parser.add_argument("--checks", help=f"Comma-separated verify checks ({', '.join(CHECKS)})")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    return CliConfig(
        command=args.command,
        q=parse_q(args.q),
        input=args.input,
        format=args.format,
        output=args.output,
        n_range=parse_n_range(args.n) if args.n else None,
        workers=args.workers,
        cap_states=args.cap_states,
        family=args.family,
        params=parse_params(args.param),
        config_path=args.config,
        checks=tuple(c.strip() for c in (args.checks or "").split(",") if c.strip()),
        progress=args.progress,
        verbose=args.verbose,
    )


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = config_from_args(argv)
    except (ConfigError, ContractViolation) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
