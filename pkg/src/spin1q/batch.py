"""Batch experiments: quantumness of many random states written as CSV.

Every state and every random choice made while processing it derives from
``(seed, index)`` alone, so the CSV is byte-identical for any worker count.
"""

from __future__ import annotations

import concurrent.futures
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .chull import (
    DEFAULT_ATOMS,
    DEFAULT_REFINE_ROUNDS,
    DEFAULT_TOL,
    MIN_ATOMS,
    REPORT_TOL,
    QuantumnessConfig,
    interpolated_state,
    quantumness,
)
from .ensembles import RngStream, random_coherent, random_hs_density, random_pure
from .errors import InvalidInputError
from .numkernel import eigh_hermitian
from .states import SPIN_MATRICES, DensityMatrix, PureSpin1

ENSEMBLES = ("hs_mixed", "haar_pure", "interpolated")
ENSEMBLE_ALIASES = {"hs": "hs_mixed", "haar": "haar_pure", "pure": "haar_pure"}
CSV_HEADER = (
    "index",
    "lambda_min",
    "quantumness",
    "f_lambda",
    "lower_bound",
    "purity",
    "method",
    "converged",
    "excess_over_f",
)
WORKERS_ENV = "SPIN1Q_WORKERS"


def resolve_ensemble(name: str) -> str:
    name = ENSEMBLE_ALIASES.get(name, name)
    if name not in ENSEMBLES:
        raise InvalidInputError(f"unknown ensemble {name!r}; choose from {ENSEMBLES}")
    return name


def default_workers() -> int:
    """Worker count from ``SPIN1Q_WORKERS``, 1 when unset."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInputError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InvalidInputError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class BatchConfig:
    ensemble: str = "hs_mixed"
    count: int = 100
    seed: int = 0
    atoms: int = DEFAULT_ATOMS
    refine_rounds: int = DEFAULT_REFINE_ROUNDS
    tol: float = DEFAULT_TOL
    workers: int = 1
    output_path: str | None = None
    strategy: str = "fibonacci"

    def __post_init__(self):
        object.__setattr__(self, "ensemble", resolve_ensemble(self.ensemble))
        if self.count < 1:
            raise InvalidInputError("count must be at least 1")
        if self.atoms < MIN_ATOMS:
            raise InvalidInputError(f"atoms must be at least {MIN_ATOMS}")
        if not self.tol > 0:
            raise InvalidInputError("tol must be positive")
        if self.workers < 1:
            raise InvalidInputError("workers must be at least 1")
        if self.refine_rounds < 0:
            raise InvalidInputError("refine_rounds must be non-negative")

    def quantumness_config(self) -> QuantumnessConfig:
        return QuantumnessConfig(
            atoms=self.atoms,
            strategy=self.strategy,
            seed=self.seed,
            refine_rounds=self.refine_rounds,
            tol=self.tol,
        )


@dataclass(frozen=True)
class BatchRow:
    index: int
    lambda_min: float
    quantumness: float
    f_lambda: float
    lower_bound: float
    purity: float
    method: str
    converged: bool
    excess_over_f: float

    def csv_line(self) -> str:
        nums = (self.lambda_min, self.quantumness, self.f_lambda, self.lower_bound, self.purity)
        cells = [str(self.index)] + [format(x, ".17g") for x in nums]
        cells += [self.method, "true" if self.converged else "false", format(self.excess_over_f, ".17g")]
        return ",".join(cells)


def rotated_zero_state(n) -> PureSpin1:
    """The ``m = 0`` state quantized along the unit vector ``n``."""
    nj = sum(c * j for c, j in zip(n, SPIN_MATRICES))
    vecs = eigh_hermitian(nj).eigenvectors
    return PureSpin1.from_vector(vecs[:, 1], normalize=True)


def generate_state(ensemble: str, seed: int, index: int, count: int = 1) -> DensityMatrix:
    """State ``index`` of a batch; depends only on the arguments."""
    ensemble = resolve_ensemble(ensemble)
    stream = RngStream(int(seed), int(index))
    if ensemble == "hs_mixed":
        return random_hs_density(stream)
    if ensemble == "haar_pure":
        return random_pure(stream).density()
    # interpolated: a rotated m = 0 state mixed toward its closest classical state
    psi = rotated_zero_state(random_coherent(stream).unit_vector)
    return interpolated_state(psi, (index + 1) / count)


def compute_row(config: BatchConfig, index: int) -> BatchRow:
    rho = generate_state(config.ensemble, config.seed, index, config.count)
    rep = quantumness(rho, config.quantumness_config(), stream_index=index)
    if rep.method == "classical_zero":
        return BatchRow(index, rep.lambda_min, 0.0, 0.0, 0.0, rep.purity, rep.method, True, 0.0)
    return BatchRow(
        index,
        rep.lambda_min,
        rep.value,
        rep.f_lambda_bound,
        rep.lower_bound,
        rep.purity,
        rep.method,
        rep.converged,
        rep.value - rep.f_lambda_bound,
    )


def _compute_chunk(args) -> list[BatchRow]:
    config, indices = args
    return [compute_row(config, i) for i in indices]


def compute_rows(config: BatchConfig) -> list[BatchRow]:
    """All rows in index order; parallel over chunks when ``workers > 1``."""
    indices = list(range(config.count))
    if config.workers == 1 or config.count == 1:
        return _compute_chunk((config, indices))
    size = max(1, math.ceil(config.count / (4 * config.workers)))
    chunks = [(config, indices[i : i + size]) for i in range(0, config.count, size)]
    rows: list[BatchRow] = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
        for part in pool.map(_compute_chunk, chunks):
            rows.extend(part)
    return rows


def write_csv(rows: Iterable[BatchRow], out: TextIO) -> None:
    out.write(",".join(CSV_HEADER) + "\n")
    for row in rows:
        out.write(row.csv_line() + "\n")


@dataclass(frozen=True)
class BatchSummary:
    count: int
    nonclassical: int
    max_excess_over_f: float
    max_excess_index: int | None
    min_margin_over_lower: float
    non_converged: tuple[int, ...]
    violations: tuple[int, ...]
    elapsed: float
    rows: tuple[BatchRow, ...] = field(repr=False, default=())

    def lines(self) -> list[str]:
        out = [
            f"states: {self.count} ({self.nonclassical} non-classical)",
            f"max excess over f(lambda): {self.max_excess_over_f:.6e}"
            + ("" if self.max_excess_index is None else f" at index {self.max_excess_index}"),
            f"min margin above lower bound: {self.min_margin_over_lower:.6e}",
            f"non-converged: {len(self.non_converged)}",
            f"excess above {REPORT_TOL:g}: {len(self.violations)}"
            + (f" (indices {', '.join(map(str, self.violations[:20]))})" if self.violations else ""),
            f"elapsed: {self.elapsed:.2f} s",
        ]
        return out


def summarize(rows: list[BatchRow], elapsed: float) -> BatchSummary:
    nc = [r for r in rows if r.method != "classical_zero"]
    if nc:
        worst = max(nc, key=lambda r: r.excess_over_f)
        max_excess, max_idx = worst.excess_over_f, worst.index
        margin = min(r.quantumness - r.lower_bound for r in nc)
    else:
        max_excess, max_idx, margin = 0.0, None, 0.0
    return BatchSummary(
        count=len(rows),
        nonclassical=len(nc),
        max_excess_over_f=max_excess,
        max_excess_index=max_idx,
        min_margin_over_lower=margin,
        non_converged=tuple(r.index for r in rows if not r.converged),
        violations=tuple(r.index for r in nc if r.excess_over_f > REPORT_TOL),
        elapsed=elapsed,
        rows=tuple(rows),
    )


def run_batch(config: BatchConfig, out: TextIO | None = None) -> BatchSummary:
    """Run the batch and write the CSV to ``config.output_path`` (or ``out``, default stdout).

    The output file is opened before any work starts so an unwritable path
    fails fast.
    """
    start = time.perf_counter()
    if config.output_path is not None:
        try:
            fh = open(config.output_path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise InvalidInputError(f"cannot write {config.output_path}: {exc.strerror}") from None
        with fh:
            rows = compute_rows(config)
            write_csv(rows, fh)
    else:
        rows = compute_rows(config)
        write_csv(rows, out if out is not None else sys.stdout)
    return summarize(rows, time.perf_counter() - start)


def violation_states(config: BatchConfig, summary: BatchSummary) -> list[tuple[int, DensityMatrix]]:
    """Regenerate the states whose excess over f(lambda) was reported."""
    return [(i, generate_state(config.ensemble, config.seed, i, config.count)) for i in summary.violations]


__all__ = [
    "BatchConfig",
    "BatchRow",
    "BatchSummary",
    "CSV_HEADER",
    "ENSEMBLES",
    "WORKERS_ENV",
    "compute_row",
    "compute_rows",
    "default_workers",
    "generate_state",
    "resolve_ensemble",
    "rotated_zero_state",
    "run_batch",
    "summarize",
    "violation_states",
    "write_csv",
]
