"""Shared fixtures-in-spirit for the test suite."""

import numpy as np

from noisypump import SystemParams
from noisypump.model import PhysicalMoments

CANONICAL = SystemParams(quality=5000, epsilon=1.6e-2, n_thermal=10)


def coherent_pump_oracle(params: SystemParams):
    """Closed-form onset time and steady negativity for D=0, delta=0.

    With zero noise the only nontrivial dynamics lives in the two real
    variables (Im<A1 A2>, nbar), which obey an affine 2x2 system with
    eigmodes (1, -1) (growing) and (1, 1) (decaying).  The smallest
    partial-transpose symplectic eigenvalue is nu(t) = 1/2 + 2*xi(t) where
    xi is the decaying coordinate, so

        nu(inf) = 1/2 - L,   L = (omega*eps/4 - gamma*n_T) / (omega*eps/2 + gamma)

    and the onset solves nu(t) = 1/2.  Entirely independent of the package's
    integration and covariance code.
    """
    assert params.noise_width == 0 and params.delta == 0
    a = params.omega * params.epsilon / 2.0
    g = params.gamma
    lift = (params.omega * params.epsilon / 4.0 - g * params.n_thermal) / (a + g)
    e_n_steady = -np.log2(1.0 - 2.0 * lift) if lift > 0 else 0.0
    t_onset = np.log(1.0 + params.n_thermal / lift) / (a + g) if lift > 0 else None
    return t_onset, e_n_steady, lift


def tmsv_moments(r: float, n_th: float = 0.0) -> PhysicalMoments:
    """Two-mode squeezed (thermal) state moments for squeezing parameter r."""
    cosh2 = np.cosh(2 * r)
    sinh2 = np.sinh(2 * r)
    return PhysicalMoments(
        nbar=(n_th + 0.5) * cosh2 - 0.5,
        s1=0.0,
        s2=0.0,
        c=(n_th + 0.5) * sinh2,
        d=0.0,
    )


def random_physical_covariance(rng: np.random.Generator) -> np.ndarray:
    """Random physical two-mode covariance, a fair mix of entangled and not.

    Built as a symplectic transform (two-mode squeezer + local rotations +
    local squeezers) of a thermal state, so the symplectic spectrum stays
    >= 1/2 by construction.
    """
    nu1, nu2 = 0.5 + rng.exponential(0.4, size=2)
    sigma = np.diag([nu1, nu1, nu2, nu2])

    r = rng.uniform(0.0, 1.2)
    ch, sh = np.cosh(r), np.sinh(r)
    two_mode = np.array(
        [
            [ch, 0, sh, 0],
            [0, ch, 0, -sh],
            [sh, 0, ch, 0],
            [0, -sh, 0, ch],
        ]
    )
    sigma = two_mode @ sigma @ two_mode.T

    for mode in (0, 1):
        theta = rng.uniform(0, 2 * np.pi)
        s = np.exp(rng.uniform(-0.4, 0.4))
        c, sn = np.cos(theta), np.sin(theta)
        local = np.array([[c, sn], [-sn, c]]) @ np.diag([s, 1.0 / s])
        full = np.eye(4)
        full[2 * mode: 2 * mode + 2, 2 * mode: 2 * mode + 2] = local
        sigma = full @ sigma @ full.T
    return sigma
