"""Two-mode Gaussian covariance matrices and logarithmic negativity.

Quadratures follow the variance-1/2 convention: q = (a + a')/sqrt(2),
p = i(a' - a)/sqrt(2), so the vacuum covariance is I/2 and the commutation
relations read [q_j, p_j] = i.  The quadrature ordering is (q1, p1, q2, p2)
with the canonical symplectic form block-diagonal in the modes.

The logarithmic negativity of a two-mode Gaussian state is determined by the
smallest symplectic eigenvalue of the partially transposed covariance matrix.
Two independent routes are provided: the symplectic-invariant (determinant)
formula and the eigenvalue spectrum of J*sigma.  The invariant route uses the
rationalized form

    nu_minus**2 = 2*Sigma / (Dt + sqrt(Dt**2 - 4*Sigma)),   Dt = A + B - 2*C,

which stays accurate when the raw moments grow exponentially large while
nu_minus itself stays of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PhysicalMoments

VACUUM_VARIANCE = 0.5

_OMEGA_2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
# Symplectic form on (q1, p1, q2, p2): one rotation block per mode.
SYMPLECTIC_FORM = np.block(
    [[_OMEGA_2, np.zeros((2, 2))], [np.zeros((2, 2)), _OMEGA_2]]
)
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


class NonPhysicalCovarianceError(ValueError):
    """The covariance matrix violates the uncertainty principle."""


@dataclass(frozen=True)
class SymplecticInvariants:
    """Determinants of the covariance blocks and of the full matrix."""

    A: float
    B: float
    C: float
    Sigma: float


@dataclass(frozen=True)
class NegativityResult:
    e_n: float
    nu_minus: float
    invariants: SymplecticInvariants


def covariance_from_moments(m: PhysicalMoments) -> np.ndarray:
    """Assemble the 4x4 rotating-frame covariance matrix.

    Valid for zero first moments (guaranteed for thermal initial states).
    Block content in terms of the moments:

        alpha = [[Re s1 + nbar + 1/2, Im s1], [Im s1, -Re s1 + nbar + 1/2]]
        beta  = the same with s2
        gamma = [[Re c + Re d, Im c + Im d], [Im c - Im d, Re d - Re c]]

    so that det(gamma) == |d|**2 - |c|**2 identically.
    """
    values = np.array([m.nbar, m.s1, m.s2, m.c, m.d], dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite physical moments")
    half = VACUUM_VARIANCE
    alpha = np.array(
        [
            [m.s1.real + m.nbar + half, m.s1.imag],
            [m.s1.imag, -m.s1.real + m.nbar + half],
        ]
    )
    beta = np.array(
        [
            [m.s2.real + m.nbar + half, m.s2.imag],
            [m.s2.imag, -m.s2.real + m.nbar + half],
        ]
    )
    gamma = np.array(
        [
            [m.c.real + m.d.real, m.c.imag + m.d.imag],
            [m.c.imag - m.d.imag, m.d.real - m.c.real],
        ]
    )
    sigma = np.empty((4, 4))
    sigma[:2, :2] = alpha
    sigma[2:, 2:] = beta
    sigma[:2, 2:] = gamma
    sigma[2:, :2] = gamma.T
    return sigma


def covariance_blocks(sigma: np.ndarray):
    """Split sigma into (alpha, beta, gamma) 2x2 blocks."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"covariance matrix must be 4x4, got {sigma.shape}")
    return sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:]


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def symplectic_invariants(sigma: np.ndarray) -> SymplecticInvariants:
    alpha, beta, gamma = covariance_blocks(sigma)
    return SymplecticInvariants(
        A=_det2(alpha),
        B=_det2(beta),
        C=_det2(gamma),
        Sigma=float(np.linalg.det(sigma)),
    )


def log_negativity(sigma: np.ndarray, disc_tol: float = 1e-10) -> NegativityResult:
    """Logarithmic negativity via the symplectic-invariant route.

    The matrix is rescaled by its largest entry before taking determinants;
    symplectic eigenvalues scale linearly with the covariance, which keeps the
    computation inside floating-point range for exponentially grown moments.
    Raises NonPhysicalCovarianceError when the partially transposed invariant
    combination has no real symplectic spectrum beyond ``disc_tol``.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"covariance matrix must be 4x4, got {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ValueError("non-finite covariance matrix")

    scale = max(1.0, float(np.abs(sigma).max()))
    inv = symplectic_invariants(sigma / scale)
    delta_pt = inv.A + inv.B - 2.0 * inv.C
    disc = delta_pt**2 - 4.0 * inv.Sigma
    if disc < 0.0:
        if disc < -disc_tol * max(delta_pt**2, 1e-300):
            raise NonPhysicalCovarianceError(
                f"non-physical covariance: complex symplectic spectrum (disc={disc})"
            )
        disc = 0.0
    denom = delta_pt + math.sqrt(disc)
    if denom <= 0.0 or inv.Sigma <= 0.0:
        raise NonPhysicalCovarianceError(
            f"non-physical covariance: Sigma={inv.Sigma}, Delta={delta_pt}"
        )
    nu_minus = scale * math.sqrt(2.0 * inv.Sigma / denom)
    e_n = max(0.0, -math.log2(2.0 * nu_minus))
    unscaled = SymplecticInvariants(
        A=_unscale(inv.A, scale, 2),
        B=_unscale(inv.B, scale, 2),
        C=_unscale(inv.C, scale, 2),
        Sigma=_unscale(inv.Sigma, scale, 4),
    )
    return NegativityResult(e_n=e_n, nu_minus=nu_minus, invariants=unscaled)


def _unscale(value: float, scale: float, power: int) -> float:
    # Invariants of extremely grown states can exceed the float range even
    # though the symplectic eigenvalues themselves are representable.
    result = value
    for _ in range(power):
        result *= scale
        if math.isinf(result):
            return result
    return result


def symplectic_spectrum(sigma: np.ndarray, partial_transpose: bool = False) -> np.ndarray:
    """Two-mode symplectic spectrum from the eigenvalues of J*sigma.

    With ``partial_transpose`` the momentum of mode 2 is reflected first.
    Returns the two positive values (smallest first); each appears twice in
    the raw +-conjugate eigenvalue set of the 4x4 product.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"covariance matrix must be 4x4, got {sigma.shape}")
    if partial_transpose:
        sigma = PARTIAL_TRANSPOSE @ sigma @ PARTIAL_TRANSPOSE
    scale = max(1.0, float(np.abs(sigma).max()))
    vals = np.sort(np.abs(np.linalg.eigvals(SYMPLECTIC_FORM @ (sigma / scale))))
    return scale * np.array([0.5 * (vals[0] + vals[1]), 0.5 * (vals[2] + vals[3])])


def log_negativity_from_spectrum(nu: np.ndarray) -> float:
    """Logarithmic negativity recomputed from a partial-transpose spectrum."""
    return float(sum(max(0.0, -math.log2(2.0 * v)) for v in np.asarray(nu)))


def physicality_defect(sigma: np.ndarray) -> float:
    """Smallest eigenvalue of sigma + (i/2) J; >= 0 for physical states."""
    sigma = np.asarray(sigma, dtype=float)
    h = sigma + 0.5j * SYMPLECTIC_FORM
    return float(np.linalg.eigvalsh(h).min())


def negativity_from_moments(m: PhysicalMoments) -> NegativityResult:
    """Convenience composition of covariance assembly and negativity."""
    return log_negativity(covariance_from_moments(m))
