import math

import numpy as np
import pytest

from noisypump import (
    NonPhysicalCovarianceError,
    PhysicalMoments,
    covariance_blocks,
    covariance_from_moments,
    log_negativity,
    log_negativity_from_spectrum,
    negativity_from_moments,
    physicality_defect,
    symplectic_invariants,
    symplectic_spectrum,
)

from helpers import random_physical_covariance, tmsv_moments


def thermal_sigma(n_t: float) -> np.ndarray:
    return covariance_from_moments(PhysicalMoments(nbar=n_t, s1=0, s2=0, c=0, d=0))


class TestCovarianceAssembly:
    def test_thermal(self):
        sigma = thermal_sigma(10.0)
        np.testing.assert_allclose(sigma, 10.5 * np.eye(4))

    def test_two_mode_correlation_entries(self):
        # nbar = 0.5 and c = 0.5 give <q1 q2> = 0.5, <p1 p2> = -0.5 and unit
        # diagonals (re-derived from the quadrature definitions).
        sigma = covariance_from_moments(
            PhysicalMoments(nbar=0.5, s1=0, s2=0, c=0.5, d=0)
        )
        assert sigma[0, 2] == pytest.approx(0.5)
        assert sigma[1, 3] == pytest.approx(-0.5)
        np.testing.assert_allclose(np.diag(sigma), 1.0)
        np.testing.assert_allclose(sigma, sigma.T)

    def test_cross_block_determinant_identity(self):
        # det(gamma) == |d|**2 - |c|**2 holds identically for the assembly.
        rng = np.random.default_rng(2)
        for _ in range(200):
            c = complex(*rng.normal(size=2))
            d = complex(*rng.normal(size=2))
            m = PhysicalMoments(nbar=rng.uniform(0, 5), s1=0, s2=0, c=c, d=d)
            gamma = covariance_blocks(covariance_from_moments(m))[2]
            expected = abs(d) ** 2 - abs(c) ** 2
            assert np.linalg.det(gamma) == pytest.approx(expected, abs=1e-12, rel=1e-12)

    def test_squeezed_pair_determinant(self):
        r = 0.5
        gamma = covariance_blocks(covariance_from_moments(tmsv_moments(r)))[2]
        assert np.linalg.det(gamma) == pytest.approx(-(0.5 * math.sinh(2 * r)) ** 2, rel=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            covariance_from_moments(PhysicalMoments(nbar=math.nan, s1=0, s2=0, c=0, d=0))

    def test_moment_validation(self):
        PhysicalMoments(nbar=2.0, s1=0, s2=0, c=0, d=1.0).validate()
        with pytest.raises(ValueError):
            PhysicalMoments(nbar=-1.0, s1=0, s2=0, c=0, d=0).validate()
        with pytest.raises(ValueError):
            PhysicalMoments(nbar=1.0, s1=0, s2=0, c=0, d=2.0).validate()


class TestLogNegativity:
    def test_thermal_separable(self):
        res = log_negativity(thermal_sigma(10.0))
        assert res.e_n == 0.0
        assert res.nu_minus == pytest.approx(10.5, rel=1e-12)
        assert res.invariants.A == pytest.approx(10.5**2, rel=1e-12)
        assert res.invariants.Sigma == pytest.approx(10.5**4, rel=1e-10)

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_squeezed_vacuum_value(self, r):
        res = negativity_from_moments(tmsv_moments(r))
        assert abs(res.e_n - 2 * r / math.log(2)) < 1e-8
        assert res.nu_minus == pytest.approx(0.5 * math.exp(-2 * r), rel=1e-10)

    def test_vacuum_boundary(self):
        # nu_minus = 1/2 exactly sits on the separability boundary.
        res = log_negativity(thermal_sigma(0.0))
        assert res.nu_minus == pytest.approx(0.5, abs=1e-14)
        assert res.e_n == 0.0

    def test_zero_iff_nu_at_least_half(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            sigma = random_physical_covariance(rng)
            res = log_negativity(sigma)
            if res.e_n == 0.0:
                assert res.nu_minus >= 0.5 - 1e-12
            else:
                assert res.nu_minus < 0.5

    def test_rationalized_matches_printed_difference_form(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            sigma = random_physical_covariance(rng)
            inv = symplectic_invariants(sigma)
            dt = inv.A + inv.B - 2 * inv.C
            nu_printed = math.sqrt(0.5 * (dt - math.sqrt(dt**2 - 4 * inv.Sigma)))
            assert log_negativity(sigma).nu_minus == pytest.approx(nu_printed, rel=1e-9)

    def test_exponentially_large_moments(self):
        # Scaling by 1e80 would overflow det(sigma); the rescaled route keeps
        # the symplectic eigenvalue exact (it scales linearly).
        sigma = thermal_sigma(10.0) * 1e80
        res = log_negativity(sigma)
        assert res.nu_minus == pytest.approx(10.5e80, rel=1e-10)
        assert res.e_n == 0.0

    def test_non_physical_rejected(self):
        sigma = np.diag([1.0, 1.0, 1.0, -1.0])
        with pytest.raises(NonPhysicalCovarianceError):
            log_negativity(sigma)

    def test_shape_and_finiteness(self):
        with pytest.raises(ValueError):
            log_negativity(np.eye(3))
        bad = np.eye(4)
        bad[0, 0] = math.inf
        with pytest.raises(ValueError):
            log_negativity(bad)


class TestSpectrumRoute:
    def test_thermal_spectrum(self):
        for pt in (False, True):
            nu = symplectic_spectrum(thermal_sigma(10.0), partial_transpose=pt)
            np.testing.assert_allclose(nu, [10.5, 10.5], rtol=1e-12)

    def test_squeezed_vacuum_spectrum(self):
        sigma = covariance_from_moments(tmsv_moments(0.5))
        nu_pt = symplectic_spectrum(sigma, partial_transpose=True)
        np.testing.assert_allclose(
            nu_pt, [0.5 * math.exp(-1), 0.5 * math.exp(1)], rtol=1e-10
        )
        # Without the transpose the state is pure: both values at vacuum level.
        np.testing.assert_allclose(symplectic_spectrum(sigma), [0.5, 0.5], rtol=1e-10)

    def test_route_equivalence(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(1000):
            sigma = random_physical_covariance(rng)
            e_inv = log_negativity(sigma).e_n
            e_spec = log_negativity_from_spectrum(
                symplectic_spectrum(sigma, partial_transpose=True)
            )
            worst = max(worst, abs(e_inv - e_spec))
        assert worst < 1e-10

    def test_local_rotation_invariance(self):
        rng = np.random.default_rng(8)
        sigmas = [covariance_from_moments(tmsv_moments(0.5))]
        sigmas += [random_physical_covariance(rng) for _ in range(20)]
        for theta in (0.1, 1.0, 2.5):
            c, s = math.cos(theta), math.sin(theta)
            rot = np.array([[c, s], [-s, c]])
            full = np.zeros((4, 4))
            full[:2, :2] = rot
            full[2:, 2:] = rot
            for sigma in sigmas:
                e0 = log_negativity(sigma).e_n
                e1 = log_negativity(full @ sigma @ full.T).e_n
                assert abs(e0 - e1) < 1e-12


class TestPhysicality:
    def test_defect_nonnegative_for_physical_states(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            assert physicality_defect(random_physical_covariance(rng)) >= -1e-9

    def test_defect_negative_for_bogus_state(self):
        assert physicality_defect(0.1 * np.eye(4)) < -0.1
