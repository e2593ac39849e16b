"""Threshold curves of the critical (CKN) phase diagram, theta = vartheta(p, d)."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__, constants, gn
from ..errors import CKNError, ConvergenceError, DomainError

log = logging.getLogger(__name__)

COLUMNS = ("a_bar", "a_star_ckn", "a_1", "a_0", "a_c")


def a_star_ckn(d: int, p: float, cgn_value: float | None = None, tol: float = 1e-12) -> float:
    """a at which C*_CKN(vartheta, p, a) = C_GN(p).

    Inverts the exact power law C*(a) = C*(a_c - 1) Lambda^e with
    e = (p - 2)(1 - d)/(2p) < 0.
    """
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    th = constants.vartheta(p, d)
    constants.check_ckn(d, p, th)
    value = gn.cgn(d, p, tol=tol) if cgn_value is None else cgn_value
    k = constants.ckn_star(d, p, th, constants.critical_a(d) - 1.0)
    e = (p - 2.0) * (1.0 - d) / (2.0 * p)
    return constants.a_of_lambda((value / k) ** (1.0 / e), d)


def default_p_range(d: int) -> tuple[float, float]:
    """[2.05, 2*(d) - 0.05]; for d = 2 (2* = inf) the upper end is 6."""
    ts = constants.two_star(d)
    return 2.05, (ts - 0.05 if math.isfinite(ts) else 6.0)


@dataclass
class RunConfig:
    d: int = 5
    p_min: float | None = None
    p_max: float | None = None
    steps: int = 100
    tol: float = 1e-12
    out: Path | None = None
    svg: Path | None = None
    workers: int = 1

    def __post_init__(self):
        self.d = int(self.d)
        lo, hi = default_p_range(self.d)
        self.p_min = lo if self.p_min is None else float(self.p_min)
        self.p_max = hi if self.p_max is None else float(self.p_max)
        self.steps = int(self.steps)
        self.tol = float(self.tol)
        self.workers = int(self.workers)
        if self.out is not None:
            self.out = Path(self.out)
        if self.svg is not None:
            self.svg = Path(self.svg)
        self.validate()

    def validate(self):
        if self.d < 2:
            raise DomainError(f"curves need d >= 2, got {self.d}")
        if not 2.0 < self.p_min < self.p_max < constants.two_star(self.d):
            raise DomainError(
                f"need 2 < p_min < p_max < 2* = {constants.two_star(self.d)}, got [{self.p_min}, {self.p_max}]"
            )
        if self.steps < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        if self.tol <= 0:
            raise DomainError("tol must be positive")

    @property
    def p_grid(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.steps)


_CONFIG_KEYS = {"d": int, "p_min": float, "p_max": float, "steps": int, "tol": float,
                "out": str, "svg": str, "workers": int}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, '-' in keys reads as '_'."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](val)
        except ValueError as exc:
            raise DomainError(f"config line {lineno}: bad value for {key}: {val!r}") from exc
    return values


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Defaults, then the config file, then non-None ``overrides``."""
    values = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise DomainError(f"cannot read config file {path}: {exc}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


@dataclass
class CurveTable:
    d: int
    p_grid: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p_grid = np.asarray(self.p_grid, dtype=float)
        self.columns = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        if np.any(np.diff(self.p_grid) <= 0):
            raise DomainError("p_grid must be strictly increasing")
        for name, col in self.columns.items():
            if len(col) != len(self.p_grid):
                raise DomainError(f"column {name} has length {len(col)}, expected {len(self.p_grid)}")
        a_c = constants.critical_a(self.d)
        for name, col in self.columns.items():
            if name == "a_c":
                continue
            finite = col[np.isfinite(col)]
            if np.any(finite >= a_c):
                raise DomainError(f"column {name} has entries >= a_c = {a_c}")

    def __len__(self):
        return len(self.p_grid)

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]


def _grid_point(args) -> dict:
    d, p, tol = args
    row = {"a_c": constants.critical_a(d)}
    th = constants.vartheta(p, d)
    try:
        row["a_bar"] = constants.a_bar(d, p, th)
    except CKNError as exc:
        log.warning("a_bar failed at p=%s: %s", p, exc)
    try:
        row["a_star_ckn"] = a_star_ckn(d, p, tol=tol)
    except CKNError as exc:
        log.warning("a_star_ckn failed at p=%s: %s", p, exc)
    if d >= 3:
        try:
            rec = constants.existence_thresholds(d, p)
            row["a_1"], row["a_0"] = rec.a_1, rec.a_0
        except CKNError as exc:
            log.warning("existence thresholds failed at p=%s: %s", p, exc)
    return row


def curve_scan(config: RunConfig) -> CurveTable:
    """Fill a_bar, a_star_ckn, a_1, a_0 and a_c over the p grid.

    Failed entries are NaN. More than 10% failed grid points raises
    ConvergenceError with the partial table attached.
    """
    config.validate()
    grid = config.p_grid
    jobs = [(config.d, float(p), config.tol) for p in grid]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_grid_point, jobs))
    else:
        rows = [_grid_point(job) for job in jobs]
    columns = {name: np.array([row.get(name, math.nan) for row in rows]) for name in COLUMNS}
    table = CurveTable(
        config.d, grid, columns,
        metadata={"tool_version": __version__, "d": config.d, "theta_mode": "critical"},
    )
    expected = ["a_bar", "a_star_ckn"] + (["a_1", "a_0"] if config.d >= 3 else [])
    failed = sum(1 for row in rows if any(name not in row for name in expected))
    if failed > 0.1 * len(rows):
        raise ConvergenceError(f"{failed} of {len(rows)} grid points failed", best_estimate=table)
    return table
