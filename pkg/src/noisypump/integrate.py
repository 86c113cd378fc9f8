"""Adaptive integration of the averaged second-moment equations.

The fifteen complex components form a block-diagonal linear system (five
independent 3-vectors with a shared drift structure) driven by a constant
forcing in block 1 and an exponentially decaying forcing in block 4.  An
embedded Runge-Kutta 4(5) pair with dense output does the work; the system is
linear and non-stiff for the noise widths of interest (D/omega << 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    SYSTEM_COUNT,
    MomentState,
    SystemParams,
    build_generator,
    forcing_base,
    thermal_initial_state,
)

DEFAULT_OVERFLOW_CAP = 1e100


@dataclass(frozen=True)
class IntegrationControls:
    """Error tolerances and sampling of one integration run.

    ``sample_interval=None`` selects (1/gamma)/200, falling back to t_end/400
    for undamped systems.  Any moment component exceeding ``overflow_cap`` in
    magnitude terminates the run early and flags the trajectory.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = math.inf
    sample_interval: float | None = None
    overflow_cap: float = DEFAULT_OVERFLOW_CAP


@dataclass
class Trajectory:
    """Densely sampled solution of the averaged moment equations."""

    times: np.ndarray            # (T,) strictly increasing, starts at 0
    states: np.ndarray           # (T, 5, 3) complex
    params: SystemParams
    overflow: bool               # overflow cap reached; trajectory truncated
    n_rhs_evals: int
    _interp: object = None       # scipy OdeSolution for dense evaluation

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def moment_state(self, i: int) -> MomentState:
        return MomentState(self.states[i].copy())

    def state_at(self, t: float) -> np.ndarray:
        """Dense-output state (5, 3) at an arbitrary time inside the run."""
        if self._interp is None:
            raise ValueError("trajectory carries no dense interpolant")
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise ValueError(f"t={t} outside trajectory range [0, {self.t_end}]")
        return np.asarray(self._interp(t)).reshape(SYSTEM_COUNT, 3)


def _sample_times(t_end: float, interval: float) -> np.ndarray:
    n = int(math.floor(t_end / interval))
    times = interval * np.arange(n + 1, dtype=float)
    if times[-1] < t_end - 1e-9 * max(1.0, t_end):
        times = np.append(times, t_end)
    else:
        times[-1] = t_end
    return times


def integrate(
    params: SystemParams,
    t_end: float,
    controls: IntegrationControls = IntegrationControls(),
    initial_state: MomentState | None = None,
) -> Trajectory:
    """Integrate the five averaged moment systems from 0 to t_end.

    Starts from the thermal equilibrium state unless ``initial_state`` is
    given.  Raises RuntimeError on solver failure (step-size underflow); an
    overflow-cap hit is not an error but truncates the trajectory and sets
    the ``overflow`` flag.
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not (controls.rel_tol > 0 and controls.abs_tol > 0):
        raise ValueError("tolerances must be positive")

    state0 = thermal_initial_state(params) if initial_state is None else initial_state
    y0 = state0.u.reshape(-1).astype(complex)

    drift = np.zeros((3 * SYSTEM_COUNT, 3 * SYSTEM_COUNT), dtype=complex)
    for n in range(1, SYSTEM_COUNT + 1):
        drift[3 * (n - 1): 3 * n, 3 * (n - 1): 3 * n] = build_generator(n, params).drift
    r1 = forcing_base(params)
    width = params.noise_width

    def rhs(t, y):
        dy = drift @ y
        dy[0:3] += r1
        dy[9:12] += r1 * math.exp(-width * t)
        return dy

    cap = controls.overflow_cap

    def overflow_event(t, y):
        return float(np.max(np.abs(y))) - cap

    overflow_event.terminal = True
    overflow_event.direction = 1

    interval = controls.sample_interval
    if interval is None:
        gamma = params.gamma
        interval = (1.0 / gamma) / 200.0 if gamma > 0 else t_end / 400.0
    interval = min(interval, t_end)

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        y0,
        method="RK45",
        rtol=controls.rel_tol,
        atol=controls.abs_tol,
        max_step=controls.max_step,
        t_eval=_sample_times(t_end, interval),
        dense_output=True,
        events=[overflow_event],
    )
    overflowed = sol.status == 1
    if not sol.success and not overflowed:
        raise RuntimeError(f"integration failed: {sol.message}")

    times = sol.t
    states = sol.y.T.reshape(-1, SYSTEM_COUNT, 3)
    if overflowed and sol.t_events[0].size:
        t_ev = sol.t_events[0][0]
        if times.size == 0 or t_ev > times[-1] + 1e-12:
            times = np.append(times, t_ev)
            states = np.concatenate(
                [states, sol.y_events[0][0].reshape(1, SYSTEM_COUNT, 3)], axis=0
            )

    return Trajectory(
        times=times,
        states=states,
        params=params,
        overflow=overflowed,
        n_rhs_evals=sol.nfev,
        _interp=sol.sol,
    )
