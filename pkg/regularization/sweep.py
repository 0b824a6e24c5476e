"""Coupling sweeps of the second iteration.

Rows are evaluated independently, possibly in a process pool, and always
returned in grid order, so the rendered table does not depend on the
number of workers.
"""
import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exceptions import DomainError, RegularizationError
from .quad import DEFAULT_MAX_EVALUATIONS, DEFAULT_REL_TOL
from .second import IterationResult, iterate
from .serializers import SweepRowSerializer, render_json

logger = logging.getLogger(__name__)

COLUMNS = (
    "g",
    "lambda",
    "e0",
    "k0",
    "k0_asym",
    "a_re",
    "a_im",
    "b_re",
    "b_im",
    "e2_re",
    "e2_im",
    "e2_analytic",
    "e2_singular",
    "ratio",
    "w_half",
    "mass0",
    "mass2",
    "error",
)

SCALES = ("linear", "log")

Row = Dict[str, Optional[object]]


def coupling_grid(
    g_min: float, g_max: float, points: int, scale: str = "log"
) -> List[float]:
    if not 0.0 < g_min < g_max < 1.0:
        raise DomainError(f"Sweep needs 0 < g_min < g_max < 1, got {g_min}, {g_max}")
    if points < 2:
        raise DomainError(f"Sweep needs at least 2 points, got {points}")
    if scale == "linear":
        grid = np.linspace(g_min, g_max, points)
    elif scale == "log":
        grid = np.geomspace(g_min, g_max, points)
    else:
        raise DomainError(f"Unknown grid scale {scale!r}, expected one of {SCALES}")
    return [float(g) for g in grid]


def row_from_result(result: IterationResult) -> Row:
    cutoff = result.k0
    return {
        "g": result.params.g,
        "lambda": result.params.lam,
        "e0": result.e0,
        "k0": cutoff.k0 if cutoff else None,
        "k0_asym": cutoff.k0_asymptotic if cutoff else None,
        "a_re": result.a.re,
        "a_im": result.a.im,
        "b_re": result.b.re,
        "b_im": result.b.im,
        "e2_re": result.e2.re,
        "e2_im": result.e2.im,
        "e2_analytic": result.e2_analytic,
        "e2_singular": result.e2_singular,
        "ratio": result.ratio,
        "w_half": result.transition_half_rate,
        "mass0": result.mass0,
        "mass2": result.mass2,
        "error": None,
    }


def failed_row(g: float, error: Exception) -> Row:
    row: Row = dict.fromkeys(COLUMNS)
    row["g"] = g
    row["error"] = f"{type(error).__name__}: {error}"
    return row


def evaluate_row(
    g: float,
    rel_tol: float = DEFAULT_REL_TOL,
    include_j: bool = True,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> Row:
    try:
        result = iterate(
            g, include_j=include_j, rel_tol=rel_tol, max_evaluations=max_evaluations
        )
    except RegularizationError as exc:
        logger.warning("Sweep row g=%r failed: %s", g, exc)
        return failed_row(g, exc)
    return row_from_result(result)


def run_sweep(
    grid: Sequence[float],
    jobs: int = 1,
    rel_tol: float = DEFAULT_REL_TOL,
    include_j: bool = True,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> List[Row]:
    evaluate = partial(
        evaluate_row,
        rel_tol=rel_tol,
        include_j=include_j,
        max_evaluations=max_evaluations,
    )
    logger.info("Sweeping %d coupling values with %d job(s)", len(grid), jobs)
    if jobs <= 1:
        rows = [evaluate(g) for g in grid]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(evaluate, grid))
    return sorted(rows, key=lambda row: row["g"])


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(rows: Sequence[Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in COLUMNS])
    return buffer.getvalue()


def render_json_rows(rows: Sequence[Row]) -> str:
    return render_json(SweepRowSerializer(rows, many=True).data)


def render_rows(rows: Sequence[Row], fmt: str = "csv") -> str:
    if fmt == "csv":
        return render_csv(rows)
    if fmt == "json":
        return render_json_rows(rows)
    raise DomainError(f"Unknown sweep format {fmt!r}")
