"""Model of two parametrically coupled oscillators in independent thermal baths.

Two identical harmonic oscillators of frequency ``omega`` are coupled through
a pump modulated near twice the eigenfrequency.  The pump phase diffuses as a
Wiener process whose derivative is white noise of spectral width ``D``; each
oscillator is damped at rate ``gamma`` into its own bath with mean occupation
``n_thermal``.  In the rotating-wave approximation the quantum- and
phase-averaged second moments close into five independent complex 3-vectors
u_1 .. u_5 obeying linear equations with a common drift,

    d<u_n>/dt = (V + D * diag(-k_n**2)) <u_n> + r_n(t),

where ``V`` is a constant 3x3 matrix, ``k_n`` are the integer winding numbers
of the pump-phase factor carried by each component (``PHASE_WINDING``), and
``r_n`` are the forcing means (constant for n=1, decaying like exp(-D*t) for
n=4, zero otherwise).

The physically meaningful (phase-undressed) entries of the averaged state are

    u[0, 1] = <A1'A1 + A2'A2>/2      (mean occupation per mode, by symmetry)
    u[1, 1] = <A1'A2>                (beam-splitter correlation)
    u[2, 0] = <A1 A1>                (single-mode anomalous moment, mode 1)
    u[3, 0] = <A1 A2>                (two-mode anomalous moment)
    u[4, 0] = <A2 A2>                (single-mode anomalous moment, mode 2)

with A_j the slow (rotating-frame) annihilation operators and ' denoting the
adjoint.  Everything is expressed in units of ``omega``: rates, the detuning
``delta`` (pump frequency minus twice the eigenfrequency) and times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

SYSTEM_COUNT = 5

# Integer winding numbers k of the pump-phase factor attached to each moment
# component.  The pathwise noise term is i*k*phidot per component; averaging
# over the Wiener phase turns it into the diagonal damping -D*k**2.
PHASE_WINDING = np.array(
    [
        [-1, 0, 1],
        [-1, 0, 1],
        [0, 1, 2],
        [0, 1, 2],
        [0, 1, 2],
    ],
    dtype=int,
)


@dataclass(frozen=True)
class SystemParams:
    """Physical and numerical parameters of one simulation.

    ``quality`` is the oscillator quality factor omega/gamma; the damping rate
    ``gamma`` is always derived from it so that quality*gamma == omega holds
    exactly.  ``math.inf`` is a valid quality (undamped oscillators).
    """

    quality: float
    epsilon: float
    n_thermal: float
    noise_width: float = 0.0
    delta: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.quality > 0:
            raise ValueError(f"quality must be positive, got {self.quality}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.noise_width < 0:
            raise ValueError(f"noise_width must be >= 0, got {self.noise_width}")
        if self.n_thermal < 0:
            raise ValueError(f"n_thermal must be >= 0, got {self.n_thermal}")
        for name in ("quality", "epsilon", "n_thermal", "noise_width", "delta", "omega"):
            v = getattr(self, name)
            if name != "quality" and not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")

    @property
    def gamma(self) -> float:
        """Damping rate omega/quality (0 for infinite quality)."""
        if math.isinf(self.quality):
            return 0.0
        return self.omega / self.quality

    @classmethod
    def from_gamma(cls, gamma: float, epsilon: float, n_thermal: float,
                   noise_width: float = 0.0, delta: float = 0.0,
                   omega: float = 1.0) -> "SystemParams":
        if gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {gamma}")
        quality = math.inf if gamma == 0 else omega / gamma
        return cls(quality=quality, epsilon=epsilon, n_thermal=n_thermal,
                   noise_width=noise_width, delta=delta, omega=omega)


@dataclass
class MomentState:
    """The fifteen averaged second-moment components, complex array (5, 3).

    Row n-1 holds the 3-vector <u_n>; see the module docstring for the
    operator content of each slot.
    """

    u: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex)
        if self.u.shape != (SYSTEM_COUNT, 3):
            raise ValueError(f"moment state must have shape (5, 3), got {self.u.shape}")

    @classmethod
    def zeros(cls) -> "MomentState":
        return cls(np.zeros((SYSTEM_COUNT, 3), dtype=complex))

    def copy(self) -> "MomentState":
        return MomentState(self.u.copy())

    @property
    def nbar(self) -> float:
        """Mean occupation per mode (real part of the symmetric slot)."""
        return float(self.u[0, 1].real)

    def physical_moments(self) -> "PhysicalMoments":
        return PhysicalMoments(
            nbar=float(self.u[0, 1].real),
            s1=complex(self.u[2, 0]),
            s2=complex(self.u[4, 0]),
            c=complex(self.u[3, 0]),
            d=complex(self.u[1, 1]),
        )


@dataclass(frozen=True)
class PhysicalMoments:
    """Phase-undressed rotating-frame second moments entering the covariance.

    nbar is the per-mode occupation (equal for both modes by the 1<->2
    symmetry of identical oscillators), s1/s2 the single-mode anomalous
    moments, c the two-mode anomalous moment and d the beam-splitter
    correlation.
    """

    nbar: float
    s1: complex
    s2: complex
    c: complex
    d: complex

    def validate(self, tol: float = 1e-8):
        """Check physicality: nbar >= 0 and |d| <= nbar (Cauchy-Schwarz)."""
        scale = max(1.0, abs(self.nbar))
        if self.nbar < -tol * scale:
            raise ValueError(f"negative occupation nbar={self.nbar}")
        if abs(self.d) > self.nbar + tol * scale:
            raise ValueError(f"|d|={abs(self.d)} exceeds nbar={self.nbar}")


@dataclass(frozen=True)
class Generator:
    """Drift matrix and forcing mean of one closed 3-vector system."""

    drift: np.ndarray
    forcing: Callable[[float], np.ndarray]


def drift_matrix(params: SystemParams) -> np.ndarray:
    """Common 3x3 drift V of the five moment systems (before noise damping)."""
    g = params.gamma
    de = params.delta
    we = params.omega * params.epsilon
    return np.array(
        [
            [1j * de - g, -0.5j * we, 0.0],
            [0.25j * we, -g, -0.25j * we],
            [0.0, 0.5j * we, -1j * de - g],
        ],
        dtype=complex,
    )


def forcing_base(params: SystemParams) -> np.ndarray:
    """Constant forcing mean of the n=1 system."""
    we = params.omega * params.epsilon
    return np.array(
        [-0.25j * we, params.gamma * params.n_thermal, 0.25j * we], dtype=complex
    )


def forcing_mean(n: int, params: SystemParams, t: float) -> np.ndarray:
    """Forcing mean <r_n>(t) of system n (1-based).

    n=1 is driven by a constant vector, n=4 by the same vector damped by
    exp(-D*t): at D=0 the dressed products coincide with the bare ones, so the
    n=4 forcing must reduce exactly to the n=1 forcing.  Systems 2, 3 and 5
    are unforced.
    """
    if n not in (1, 2, 3, 4, 5):
        raise ValueError(f"system index must be 1..5, got {n}")
    if n == 1:
        return forcing_base(params)
    if n == 4:
        return forcing_base(params) * math.exp(-params.noise_width * t)
    return np.zeros(3, dtype=complex)


def build_generator(n: int, params: SystemParams) -> Generator:
    """Drift V + D*diag(-k_n**2) and forcing mean of system n (1-based)."""
    if n not in (1, 2, 3, 4, 5):
        raise ValueError(f"system index must be 1..5, got {n}")
    k = PHASE_WINDING[n - 1]
    drift = drift_matrix(params) + params.noise_width * np.diag(-(k.astype(float) ** 2))
    return Generator(drift=drift, forcing=lambda t, _n=n: forcing_mean(_n, params, t))


def thermal_initial_state(params: SystemParams) -> MomentState:
    """Non-entangled thermal equilibrium initial condition.

    Occupations equal n_thermal, all anomalous and cross moments vanish.  The
    pump phase starts at zero, so the dressed systems 4 and 5 start equal to
    the bare systems 1 and 2.
    """
    state = MomentState.zeros()
    state.u[0, 1] = params.n_thermal
    state.u[3, 1] = params.n_thermal
    return state


def boson_number(x: float) -> float:
    """Mean thermal boson number 1/(exp(x) - 1) for x = (level spacing)/(k_B T)."""
    if not x > 0:
        raise ValueError(f"energy/temperature ratio must be positive, got {x}")
    if x > 40:
        # 1/(e^x - 1) = e^-x / (1 - e^-x); the correction is below 1e-17 here.
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def boson_number_inverse(n: float) -> float:
    """Inverse of :func:`boson_number`: x = ln(1 + 1/n)."""
    if not n > 0:
        raise ValueError(f"boson number must be positive, got {n}")
    return math.log1p(1.0 / n)


def delta_star(params: SystemParams) -> float:
    """Half-width of the detuning interval with parametric instability.

    Returns sqrt((omega*epsilon)**2 - 4*gamma**2)/2, or 0 when damping
    suppresses the instability entirely.
    """
    disc = (params.omega * params.epsilon) ** 2 - 4.0 * params.gamma**2
    if disc <= 0:
        return 0.0
    return 0.5 * math.sqrt(disc)
