"""
Configuration for solvers, census runs and the verification suite.

Values come from (lowest to highest priority) the dataclass defaults, the
project ``config.yaml``, the ``ZQ_WORKERS`` environment variable and finally
command-line flags.
"""

import dataclasses
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from .errors import ConfigError

# q = inf is the classic Z-Game: the oracle can never be consulted.
INFINITY = math.inf
QValue = Union[int, float]

DEFAULT_CONFIG_PATH = "config.yaml"
WORKERS_ENV = "ZQ_WORKERS"


def parse_q(value: Union[str, int, float]) -> QValue:
    """
    Parse a q parameter.

    Args:
        value: Non-negative integer, or one of "inf" / "infinity"

    Returns:
        int for finite q, math.inf otherwise

    Raises:
        ConfigError: If the value is negative or not understood
    """
    if isinstance(value, float) and math.isinf(value) and value > 0:
        return INFINITY
    if isinstance(value, bool):
        raise ConfigError(f"q must be a non-negative integer or 'inf', got {value!r}")
    if isinstance(value, int):
        if value < 0:
            raise ConfigError(f"q must be non-negative, got {value}")
        return value
    text = str(value).strip().lower()
    if text in ("inf", "infinity", "∞"):
        return INFINITY
    try:
        parsed = int(text)
    except ValueError:
        raise ConfigError(
            f"q must be a non-negative integer or 'inf', got {value!r}"
        ) from None
    if parsed < 0:
        raise ConfigError(f"q must be non-negative, got {parsed}")
    return parsed


def format_q(q: QValue) -> str:
    return "inf" if math.isinf(q) else str(int(q))


def _require_positive(owner: str, **values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or value <= 0:
            raise ConfigError(f"{owner}.{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class SolverConfig:
    """
    Limits and switches for the exact game solvers.

    Attributes:
        q: Oracle parameter (non-negative int or math.inf)
        state_limit: Maximum number of memoized game states
        announcement_limit: Maximum number of unfilled components for which
            oracle announcements are enumerated
        exhaustive_limit: Maximum vertex count for subset searches
            (z_number, z0_number, zq_static, fort search)
        jump_closure: Evaluate a state through its full closure instead of
            enumerating single forces one at a time
        all_announcements: Enumerate announcements of every size >= q+1
            instead of exactly q+1
    """

    q: QValue = 1
    state_limit: int = 2_000_000
    announcement_limit: int = 16
    exhaustive_limit: int = 16
    jump_closure: bool = True
    all_announcements: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", parse_q(self.q))
        _require_positive(
            "solver",
            state_limit=self.state_limit,
            announcement_limit=self.announcement_limit,
            exhaustive_limit=self.exhaustive_limit,
        )

    def with_q(self, q: QValue) -> "SolverConfig":
        return dataclasses.replace(self, q=parse_q(q))


@dataclass(frozen=True)
class CensusConfig:
    """Limits for free-tree enumeration and census runs."""

    n_limit: int = 20
    chunk_size: int = 2000

    def __post_init__(self) -> None:
        _require_positive("census", n_limit=self.n_limit, chunk_size=self.chunk_size)


@dataclass(frozen=True)
class VerifyConfig:
    """
    Scales of the cross-validation suite.

    The defaults are the sizes a full `zqforcing verify` run covers: every
    tree up to tree_oracle_n vertices, every connected graph up to atlas_n
    vertices and the census up to census_n.
    """

    tree_oracle_n: int = 10
    formula_n: int = 9
    atlas_n: int = 7
    stalling_samples: int = 1000
    stalling_tree_n: int = 10
    binary_depth: int = 10
    comb_n: int = 10
    property_n: int = 6
    confluence_samples: int = 200
    confluence_n: int = 10
    confluence_orders: int = 100
    fort_n: int = 7
    single_force_n: int = 7
    census_n: int = 16
    seed: int = 42

    def __post_init__(self) -> None:
        _require_positive(
            "verify",
            tree_oracle_n=self.tree_oracle_n,
            formula_n=self.formula_n,
            atlas_n=self.atlas_n,
            stalling_samples=self.stalling_samples,
            stalling_tree_n=self.stalling_tree_n,
            binary_depth=self.binary_depth,
            comb_n=self.comb_n,
            property_n=self.property_n,
            confluence_samples=self.confluence_samples,
            confluence_n=self.confluence_n,
            confluence_orders=self.confluence_orders,
            fort_n=self.fort_n,
            single_force_n=self.single_force_n,
            census_n=self.census_n,
        )


@dataclass(frozen=True)
class AppConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    census: CensusConfig = field(default_factory=CensusConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    workers: int = 1
    output_dir: str = "results"

    def __post_init__(self) -> None:
        _require_positive("app", workers=self.workers)


def default_workers(environ: Optional[Mapping[str, str]] = None) -> Optional[int]:
    """
    Worker count from the ZQ_WORKERS environment variable.

    Returns:
        The parsed count, or None when the variable is unset

    Raises:
        ConfigError: If the variable is set to something other than a positive integer
    """
    env = os.environ if environ is None else environ
    raw = env.get(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if workers <= 0:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return workers


def _section(cls: type, data: Any, name: str) -> Any:
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section '{name}' must be a mapping")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"invalid section '{name}': {exc}") from exc


def config_from_dict(cfg: Dict[str, Any]) -> AppConfig:
    known = {"solver", "census", "verify", "workers", "output_dir"}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")

    workers = cfg.get("workers", 1)
    env_workers = default_workers()
    if env_workers is not None:
        workers = env_workers

    return AppConfig(
        solver=_section(SolverConfig, cfg.get("solver"), "solver"),
        census=_section(CensusConfig, cfg.get("census"), "census"),
        verify=_section(VerifyConfig, cfg.get("verify"), "verify"),
        workers=workers,
        output_dir=str(cfg.get("output_dir", "results")),
    )


def load_config(path: Union[str, Path, None] = None) -> AppConfig:
    """
    Load the YAML configuration.

    Args:
        path: Config file; None means ``config.yaml`` in the working directory
            if present, built-in defaults otherwise

    Returns:
        AppConfig with ZQ_WORKERS applied

    Raises:
        ConfigError: If an explicit path is missing or the file is invalid
    """
    explicit = path is not None
    config_path = Path(path if explicit else DEFAULT_CONFIG_PATH)

    if not config_path.exists():
        if explicit:
            raise ConfigError(f"config file not found: {config_path}")
        return config_from_dict({})

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            cfg = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {config_path}: {exc}") from exc

    if not isinstance(cfg, dict):
        raise ConfigError(f"{config_path} must contain a mapping")
    return config_from_dict(cfg)
