"""Entanglement events extracted from a moment trajectory.

The logarithmic negativity E_N(t) is evaluated along a trajectory and scanned
for onset, death, lifetime, peak and (for coherent pumping) the steady-state
plateau.  Threshold crossings found on the sample grid are refined by
bisection on the dense output down to a time resolution of 1e-3 (in units of
1/omega).

Above the instability threshold the raw moments grow exponentially forever
while E_N saturates; once components reach ~1e11 the cancellations inside the
symplectic invariants exhaust double precision.  E_N is therefore only
evaluated on the prefix of the trajectory whose moments stay below
``moment_cap``, and runs driven by this module stop integrating there.  All
entanglement events of interest (onset, peak, death, plateau) occur well
inside that window for the parameter ranges this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .integrate import IntegrationControls, Trajectory, integrate
from .model import SystemParams
from .negativity import negativity_from_moments

REFINE_RESOLUTION = 1e-3


@dataclass(frozen=True)
class AnalysisControls:
    """Thresholds and horizons of the event scan.

    ``eps_on`` is the numerical floor standing in for "strictly nonzero";
    crossings switch on at eps_on and off below eps_on/hysteresis to suppress
    chatter.  ``horizon=None`` selects 100/gamma, ``plateau_window=None``
    selects 5/gamma shortened to what fits inside the trusted time span.
    """

    eps_on: float = 1e-10
    hysteresis: float = 2.0
    horizon: float | None = None
    plateau_window: float | None = None
    plateau_rtol: float = 1e-4
    moment_cap: float = 1e11

    def horizon_for(self, params: SystemParams) -> float:
        if self.horizon is not None:
            return self.horizon
        if params.gamma == 0:
            raise ValueError("explicit horizon required for undamped systems")
        return 100.0 / params.gamma


@dataclass
class EntanglementReport:
    """Scalar summary of one E_N(t) trace.

    ``tau`` is the total time during which E_N exceeds the numerical floor;
    math.inf marks entanglement surviving to the (trusted) end of the run
    with a detected plateau.  ``t_death`` is None when entanglement never
    occurs or the run ends unclassified, math.inf for the plateau case.
    """

    t_onset: float | None
    t_death: float | None
    tau: float
    e_n_max: float
    t_peak: float | None
    e_n_steady: float | None
    overflow_truncated: bool = False
    horizon_truncated: bool = False
    precision_truncated: bool = False
    multiple_intervals: bool = False

    @property
    def entangled(self) -> bool:
        return self.tau > 0

    def flag_names(self) -> list[str]:
        return [
            name
            for name in (
                "overflow_truncated",
                "horizon_truncated",
                "precision_truncated",
                "multiple_intervals",
            )
            if getattr(self, name)
        ]


def negativity_series(traj: Trajectory, moment_cap: float = math.inf):
    """E_N, nu_minus and nbar at each trusted sample of a trajectory.

    Returns (times, e_n, nu_minus, nbar, truncated) where ``truncated`` tells
    whether samples beyond the moment cap were dropped.
    """
    mags = np.max(np.abs(traj.states), axis=(1, 2))
    trusted = mags <= moment_cap
    if trusted.all():
        n_keep = len(traj.times)
        truncated = False
    else:
        n_keep = int(np.argmin(trusted))  # first untrusted sample
        truncated = True
    times = traj.times[:n_keep]
    e_n = np.empty(n_keep)
    nu = np.empty(n_keep)
    nbar = np.empty(n_keep)
    for i in range(n_keep):
        moments = traj.moment_state(i).physical_moments()
        res = negativity_from_moments(moments)
        e_n[i] = res.e_n
        nu[i] = res.nu_minus
        nbar[i] = moments.nbar
    return times, e_n, nu, nbar, truncated


def _e_n_at(traj: Trajectory, t: float) -> float:
    from .model import MomentState

    return negativity_from_moments(MomentState(traj.state_at(t)).physical_moments()).e_n


def _refine_crossing(traj: Trajectory, t_lo: float, t_hi: float, level: float,
                     rising: bool) -> float:
    """Bisect the dense output for the time where E_N crosses ``level``."""
    lo, hi = t_lo, t_hi
    while hi - lo > REFINE_RESOLUTION:
        mid = 0.5 * (lo + hi)
        above = _e_n_at(traj, mid) >= level
        if above == rising:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _refine_peak(times: np.ndarray, e_n: np.ndarray, i: int):
    """Parabolic refinement of a sampled maximum."""
    if i == 0 or i == len(times) - 1:
        return float(times[i]), float(e_n[i])
    t0, t1, t2 = times[i - 1: i + 2]
    y0, y1, y2 = e_n[i - 1: i + 2]
    denom = (y0 - 2.0 * y1 + y2)
    if denom >= 0 or not np.isfinite(denom):
        return float(times[i]), float(e_n[i])
    # Uniform-spacing parabola through the three samples.
    h = 0.5 * (t2 - t0)
    shift = 0.5 * (y0 - y2) / denom
    shift = float(np.clip(shift, -1.0, 1.0))
    t_pk = t1 + shift * h
    y_pk = y1 - 0.25 * (y0 - y2) * shift
    return float(t_pk), float(y_pk)


def _segments(e_n: np.ndarray, eps_on: float, hysteresis: float):
    """Index intervals where E_N is on, with hysteresis on the off switch."""
    segments = []
    on = False
    start = 0
    off_level = eps_on / hysteresis
    for i, value in enumerate(e_n):
        if not on and value >= eps_on:
            on = True
            start = i
        elif on and value < off_level:
            segments.append((start, i))
            on = False
    if on:
        segments.append((start, None))  # still on at the end
    return segments


def analyze_trajectory(
    traj: Trajectory, controls: AnalysisControls = AnalysisControls()
) -> EntanglementReport:
    """Scan one trajectory for entanglement onset, death, peak and plateau."""
    if len(traj.times) == 0:
        raise ValueError("empty trajectory")
    if not controls.eps_on > 0:
        raise ValueError("eps_on must be positive")

    times, e_n, _, _, precision_truncated = negativity_series(
        traj, controls.moment_cap
    )
    report = EntanglementReport(
        t_onset=None,
        t_death=None,
        tau=0.0,
        e_n_max=float(e_n.max(initial=0.0)),
        t_peak=None,
        e_n_steady=None,
        overflow_truncated=traj.overflow,
        precision_truncated=precision_truncated,
    )
    if len(times) == 0:
        report.horizon_truncated = True
        return report

    segments = _segments(e_n, controls.eps_on, controls.hysteresis)
    if not segments:
        return report

    # Refine each segment boundary at the eps_on level on the dense output.
    refined = []
    for start, stop in segments:
        t_on = times[start]
        if start > 0:
            t_on = _refine_crossing(traj, times[start - 1], times[start],
                                    controls.eps_on, rising=True)
        if stop is None:
            refined.append((t_on, None))
        else:
            t_off = _refine_crossing(traj, times[stop - 1], times[stop],
                                     controls.eps_on, rising=False)
            refined.append((t_on, t_off))

    i_peak = int(np.argmax(e_n))
    t_peak, e_max = _refine_peak(times, e_n, i_peak)
    report.t_peak = t_peak
    report.e_n_max = e_max
    report.multiple_intervals = len(refined) > 1
    report.t_onset = refined[0][0]

    closed = sum(t1 - t0 for t0, t1 in refined if t1 is not None)
    last_on, last_off = refined[-1]

    if last_off is not None:
        report.t_death = refined[-1][1]
        report.tau = closed
        return report

    # Entanglement alive at the trusted end: plateau or unclassified.  The
    # change over the window is estimated from a least-squares slope, which
    # averages out the floating-point jitter E_N picks up once the raw
    # moments get large.
    t_last = times[-1]
    available = t_last - last_on
    window = controls.plateau_window
    if window is None:
        window = 5.0 / traj.params.gamma if traj.params.gamma > 0 else available
    window = min(window, 0.5 * available)
    in_window = times >= t_last - window
    plateaued = False
    e_fit_end = float(e_n[-1])
    if available > 0 and int(np.count_nonzero(in_window)) >= 5:
        tw = times[in_window]
        ew = e_n[in_window]
        slope, intercept = np.polyfit(tw, ew, 1)
        e_fit_end = float(slope * t_last + intercept)
        change = abs(slope) * window
        plateaued = change <= controls.plateau_rtol * max(e_fit_end, controls.eps_on)
    if plateaued:
        report.t_death = math.inf
        report.tau = math.inf
        report.e_n_steady = e_fit_end
    else:
        report.horizon_truncated = True
        report.tau = closed + (t_last - last_on)
    return report


def run_point(
    params: SystemParams,
    controls: AnalysisControls = AnalysisControls(),
    integration: IntegrationControls = IntegrationControls(),
    t_end: float | None = None,
) -> tuple[Trajectory, EntanglementReport]:
    """Integrate to the horizon (or caps) and analyze in one step.

    Integration stops at the analysis moment cap rather than the hard
    overflow cap: samples beyond it cannot be scored anyway.
    """
    horizon = t_end if t_end is not None else controls.horizon_for(params)
    hard_cap = integration.overflow_cap
    effective_cap = min(hard_cap, controls.moment_cap)
    traj = integrate(params, horizon, replace(integration, overflow_cap=effective_cap))
    report = analyze_trajectory(traj, controls)
    if traj.overflow and effective_cap < hard_cap:
        # Truncation by the precision cap, not a genuine overflow.
        report.overflow_truncated = False
        report.precision_truncated = True
    return traj, report


class SteadyStateError(RuntimeError):
    """Raised when no plateau is reached; carries the best-effort value."""

    def __init__(self, message: str, partial: float | None):
        super().__init__(message)
        self.partial = partial


def steady_state_negativity(
    params: SystemParams,
    controls: AnalysisControls = AnalysisControls(),
    integration: IntegrationControls = IntegrationControls(),
) -> float:
    """Plateau value of E_N for coherent pumping (noise_width = 0).

    Returns 0 for sub-threshold parameters (E_N never lifts off).  Raises
    SteadyStateError when the run ends before a plateau can be confirmed.
    """
    if params.noise_width != 0:
        raise ValueError("steady state is defined for coherent pumping only (D=0)")
    _, report = run_point(params, controls, integration)
    if report.tau == 0.0 and not report.horizon_truncated:
        return 0.0
    if report.e_n_steady is not None:
        return report.e_n_steady
    raise SteadyStateError(
        "no plateau before the run was truncated", partial=report.e_n_max or None
    )
