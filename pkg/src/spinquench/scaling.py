"""Parameter sweeps and power-law fits of the correlation measures.

`sweep_tau` materializes the measures over a grid of inverse rates;
`sweep_j3` scans the three-spin coupling at fixed rate.  `fit_loglog`
extracts d(ln y)/d(ln x) by ordinary least squares.  Rows can be computed
in parallel; output is always in grid order.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kernels import ProtocolKind, QuenchProtocol, defect_density
from .quench import QuenchMeasureRequest, measures

TAU_COLUMNS = ("tau", "n", "beta0", "I", "C", "Q", "Cnc")
J3_COLUMNS = ("j3", "Q", "Cnc")


@dataclass(frozen=True)
class SweepTable:
    """Grid-ordered sweep results: one abscissa column plus value columns.

    Rows whose computation failed hold NaNs and are listed in `errors`
    as (row_index, message).
    """

    columns: tuple[str, ...]
    data: np.ndarray
    errors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[1] != len(self.columns):
            raise ValueError("data shape does not match columns")
        x = self.data[:, 0]
        good = np.isfinite(x)
        if np.any(np.diff(x[good]) <= 0.0):
            raise ValueError(f"{self.columns[0]} column must be strictly increasing")

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def abscissa(self) -> np.ndarray:
        return self.data[:, 0]

    def valid_rows(self) -> np.ndarray:
        return np.all(np.isfinite(self.data), axis=1)


@dataclass(frozen=True)
class ScalingFit:
    """OLS fit of ln(value) against ln(abscissa) over a window."""

    slope: float
    intercept: float
    r_squared: float
    window: tuple[float, float]
    n_points: int

    def __post_init__(self):
        if self.n_points < 5:
            raise ValueError(f"a fit needs >= 5 points, got {self.n_points}")
        if not (-1e-12 <= self.r_squared <= 1.0 + 1e-12):
            raise ValueError(f"r_squared = {self.r_squared} outside [0, 1]")


def _measure_row(request: QuenchMeasureRequest) -> tuple:
    rep = measures(request.protocol, request.n)
    b0 = defect_density(request.protocol)
    return (
        request.protocol.tau,
        float(request.n),
        b0,
        rep.mutual_information,
        rep.classical_correlation,
        rep.discord,
        rep.concurrence,
    )


def _j3_row(request: QuenchMeasureRequest) -> tuple:
    rep = measures(request.protocol, request.n)
    return (request.protocol.j3, rep.discord, rep.concurrence)


def _run_rows(worker, requests, workers):
    results = []
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(worker, r) for r in requests]
            for i, fut in enumerate(futures):
                try:
                    results.append((i, fut.result(), None))
                except Exception as exc:  # noqa: BLE001 - row failures are data
                    results.append((i, None, str(exc)))
    else:
        for i, req in enumerate(requests):
            try:
                results.append((i, worker(req), None))
            except Exception as exc:  # noqa: BLE001
                results.append((i, None, str(exc)))
    return results


def sweep_tau(
    protocol: QuenchProtocol,
    n: int,
    tau_grid: Sequence[float],
    workers: int | None = None,
) -> SweepTable:
    """Measures along a grid of inverse rates (sorted, positive)."""
    grid = [float(t) for t in tau_grid]
    if any(t <= 0.0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau_grid must be positive and strictly increasing")
    requests = [
        QuenchMeasureRequest(dataclasses.replace(protocol, tau=t), n) for t in grid
    ]
    results = _run_rows(_measure_row, requests, workers)
    data = np.full((len(grid), len(TAU_COLUMNS)), np.nan)
    errors = []
    for i, row, err in results:
        if err is None:
            data[i] = row
        else:
            data[i, 0] = grid[i]
            errors.append((i, err))
    return SweepTable(columns=TAU_COLUMNS, data=data, errors=tuple(errors))


def sweep_j3(
    tau: float,
    n: int,
    j3_grid: Sequence[float],
    workers: int | None = None,
) -> SweepTable:
    """Three-spin measures along a grid of couplings at fixed inverse rate."""
    grid = [float(j) for j in j3_grid]
    if any(j < 0.0 for j in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("j3_grid must be nonnegative and strictly increasing")
    requests = [
        QuenchMeasureRequest(QuenchProtocol(ProtocolKind.THREE_SPIN, tau, j3=j), n)
        for j in grid
    ]
    results = _run_rows(_j3_row, requests, workers)
    data = np.full((len(grid), len(J3_COLUMNS)), np.nan)
    errors = []
    for i, row, err in results:
        if err is None:
            data[i] = row
        else:
            data[i, 0] = grid[i]
            errors.append((i, err))
    return SweepTable(columns=J3_COLUMNS, data=data, errors=tuple(errors))


def fit_loglog(table: SweepTable, column: str, window: tuple[float, float]) -> ScalingFit:
    """Least-squares slope of ln(column) vs ln(abscissa) inside the window.

    Raises if fewer than 5 valid rows fall in the window or if any in-window
    value is non-positive (those rows are named in the error).
    """
    lo, hi = window
    x = table.abscissa
    y = table.column(column)
    mask = (x >= lo) & (x <= hi) & np.isfinite(y) & np.isfinite(x)
    bad = np.nonzero(mask & (y <= 0.0))[0]
    if bad.size:
        raise ValueError(
            f"non-positive {column} values in window at rows {bad.tolist()} "
            f"(abscissa {x[bad].tolist()})"
        )
    idx = np.nonzero(mask)[0]
    if idx.size < 5:
        raise ValueError(f"only {idx.size} valid rows in window {window}; need >= 5")
    lx, ly = np.log(x[idx]), np.log(y[idx])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    if ss_res <= 1e-24 * max(ss_tot, 1.0):  # perfect fit, incl. constant data
        r2 = 1.0
    elif ss_tot == 0.0:
        r2 = 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(r2, 1.0),
        window=(float(lo), float(hi)),
        n_points=int(idx.size),
    )


def peak_location(table: SweepTable, column: str) -> tuple[float, float]:
    """Abscissa and height of the column's peak.

    Quadratic interpolation through the sample maximum and its neighbours
    (in log-abscissa when the grid is positive), so the result does not jump
    with grid resolution.  Boundary maxima are returned as-is.
    """
    x = table.abscissa
    y = table.column(column)
    good = np.isfinite(x) & np.isfinite(y)
    x, y = x[good], y[good]
    if len(y) < 3:
        raise ValueError("need at least 3 valid rows to locate a peak")
    i = int(np.argmax(y))
    if i == 0 or i == len(y) - 1:
        return float(x[i]), float(y[i])
    use_log = np.all(x > 0.0)
    xs = np.log(x[i - 1 : i + 2]) if use_log else x[i - 1 : i + 2]
    ys = y[i - 1 : i + 2]
    # vertex of the parabola through the three points around the maximum
    a, b, c = np.polyfit(xs, ys, 2)
    if a >= 0.0:  # degenerate (flat or non-concave) triple
        return float(x[i]), float(y[i])
    xv = float(np.clip(-b / (2.0 * a), xs[0], xs[2]))
    yv = c - b * b / (4.0 * a)
    return (float(np.exp(xv)) if use_log else xv), float(yv)
