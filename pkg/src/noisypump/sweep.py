"""Parameter grids and entanglement-boundary location.

Grids run one integrate+analyze per cell in deterministic row-major order
(first axis outermost).  Cells are independent; with ``workers > 1`` they are
dispatched to a process pool and merged back in grid order, so the output is
identical to a serial run.  The tau > 0 boundary along a single parameter is
located by bisection on the entanglement predicate, using a shortened horizon
during probing and a full-horizon confirmation run at the found point.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import AnalysisControls, EntanglementReport, run_point
from .integrate import IntegrationControls
from .model import SystemParams

SWEEPABLE_FIELDS = ("quality", "epsilon", "n_thermal", "noise_width", "delta")
CSV_VALUE_COLUMNS = ("tau", "t_onset", "t_death", "e_n_max", "e_n_steady", "flags")


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter range."""

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"  # or "log"

    def __post_init__(self):
        if self.name not in SWEEPABLE_FIELDS:
            raise ValueError(f"unknown sweep axis {self.name!r}; use one of {SWEEPABLE_FIELDS}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ValueError("log spacing requires positive endpoints")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """One or two axes over a fixed base parameter set."""

    axes: tuple[AxisSpec, ...]
    fixed: SystemParams
    outputs: tuple[str, ...] = ("tau", "t_onset", "t_death", "e_n_max", "e_n_steady")

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("axis names must be distinct")

    def cells(self) -> list[dict]:
        """Axis-value dicts in row-major order (first axis outermost)."""
        grids = [axis.values() for axis in self.axes]
        names = [axis.name for axis in self.axes]
        out = []
        if len(grids) == 1:
            for v in grids[0]:
                out.append({names[0]: float(v)})
        else:
            for v0 in grids[0]:
                for v1 in grids[1]:
                    out.append({names[0]: float(v0), names[1]: float(v1)})
        return out


@dataclass
class SweepRow:
    """One grid cell: axis values, report scalars, run diagnostics."""

    values: dict
    tau: float = math.nan
    t_onset: float | None = None
    t_death: float | None = None
    e_n_max: float = math.nan
    e_n_steady: float | None = None
    flags: str = ""
    n_rhs_evals: int = 0
    wall_time: float = 0.0
    error: str | None = None


@dataclass(frozen=True)
class SweepControls:
    analysis: AnalysisControls = field(default_factory=AnalysisControls)
    integration: IntegrationControls = field(default_factory=IntegrationControls)
    workers: int = 1
    probe_horizon_over_gamma: float = 30.0  # shortened horizon during bisection


def _run_cell(args) -> SweepRow:
    values, fixed, controls = args
    row = SweepRow(values=dict(values))
    start = time.perf_counter()
    try:
        params = replace(fixed, **values)
        traj, report = run_point(params, controls.analysis, controls.integration)
        row.tau = report.tau
        row.t_onset = report.t_onset
        row.t_death = report.t_death
        row.e_n_max = report.e_n_max
        row.e_n_steady = report.e_n_steady
        row.flags = ";".join(report.flag_names())
        row.n_rhs_evals = traj.n_rhs_evals
    except Exception as exc:  # isolate per-cell failures
        row.error = f"{type(exc).__name__}: {exc}"
        row.flags = "error"
    row.wall_time = time.perf_counter() - start
    return row


def run_grid(spec: SweepSpec, controls: SweepControls = SweepControls()) -> list[SweepRow]:
    """Integrate and analyze every grid cell; failures are recorded per cell."""
    jobs = [(values, spec.fixed, controls) for values in spec.cells()]
    if controls.workers <= 1:
        return [_run_cell(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=controls.workers) as pool:
        return list(pool.map(_run_cell, jobs, chunksize=1))


@dataclass
class BoundaryResult:
    axis: str
    value: float
    bracket: tuple[float, float]
    iterations: int
    entangled_low: bool            # tau > 0 on the low side of the bracket
    confirmation: EntanglementReport


def _entangled_at(params: SystemParams, controls: SweepControls,
                  horizon: float | None) -> bool:
    analysis = controls.analysis
    if horizon is not None:
        analysis = replace(analysis, horizon=horizon)
    _, report = run_point(params, analysis, controls.integration)
    return report.entangled


def find_boundary(
    fixed: SystemParams,
    axis: str,
    bracket: tuple[float, float],
    tol: float = 1e-3,
    controls: SweepControls = SweepControls(),
) -> BoundaryResult:
    """Bisect the tau > 0 predicate along one parameter axis.

    ``tol`` is relative to the midpoint.  The bracket endpoints must classify
    differently.  Probing uses a shortened horizon for speed; the returned
    result carries a full-horizon confirmation report at the located value.
    """
    if axis not in SWEEPABLE_FIELDS:
        raise ValueError(f"unknown axis {axis!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket}")

    gamma = replace(fixed, **{axis: lo}).gamma
    probe_horizon = (
        controls.probe_horizon_over_gamma / gamma if gamma > 0 else None
    )

    ent_lo = _entangled_at(replace(fixed, **{axis: lo}), controls, probe_horizon)
    ent_hi = _entangled_at(replace(fixed, **{axis: hi}), controls, probe_horizon)
    if ent_lo == ent_hi:
        raise ValueError(
            f"bracket does not straddle the boundary: tau>0 is {ent_lo} at both ends"
        )

    iterations = 0
    while hi - lo > tol * 0.5 * (lo + hi):
        mid = 0.5 * (lo + hi)
        if _entangled_at(replace(fixed, **{axis: mid}), controls, probe_horizon) == ent_lo:
            lo = mid
        else:
            hi = mid
        iterations += 1
        if iterations > 200:
            raise RuntimeError("bisection failed to converge")

    value = 0.5 * (lo + hi)
    _, confirmation = run_point(
        replace(fixed, **{axis: value}), controls.analysis, controls.integration
    )
    return BoundaryResult(
        axis=axis,
        value=value,
        bracket=(lo, hi),
        iterations=iterations,
        entangled_low=ent_lo,
        confirmation=confirmation,
    )
