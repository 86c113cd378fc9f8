"""Acceptance suite: one criterion per test, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria complete.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from noisypump import (
    SystemParams,
    eval_boundary,
    find_boundary,
    integrate,
    log_negativity,
    log_negativity_from_spectrum,
    mc_compare,
    negativity_from_moments,
    negativity_series,
    run_point,
    symplectic_spectrum,
)
from noisypump.integrate import IntegrationControls
from noisypump.model import MomentState, PhysicalMoments

from helpers import CANONICAL, random_physical_covariance, tmsv_moments


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_pump_threshold():
    """eps0 = 4 n_T / Q within 2% at Q=5000, D=0, for n_T in {5, 10, 20}."""
    worst = 0.0
    slowest = 0.0
    for n_t in (5.0, 10.0, 20.0):
        start = time.perf_counter()
        p = replace(CANONICAL, n_thermal=n_t)
        eps0 = 4 * n_t / 5000
        found = find_boundary(p, "epsilon", (0.3 * eps0, 6 * eps0)).value
        elapsed = time.perf_counter() - start
        worst = max(worst, abs(found - eps0) / eps0)
        slowest = max(slowest, elapsed)
    report(
        "criterion 1 (pump threshold)",
        worst < 0.02 and slowest < 60.0,
        f"worst rel. error {worst:.2%} (tol 2%), slowest bisection {slowest:.1f}s (<60s)",
    )


def test_criterion_2_limiting_boson_number():
    """n_T0(D=0) = 20 within 2% at Q=5000, eps=1.6e-2."""
    start = time.perf_counter()
    found = find_boundary(CANONICAL, "n_thermal", (1.0, 50.0)).value
    elapsed = time.perf_counter() - start
    rel = abs(found - 20.0) / 20.0
    report(
        "criterion 2 (limiting boson number)",
        rel < 0.02 and elapsed < 60.0,
        f"n_T0 = {found:.3f}, rel. error {rel:.2%} (tol 2%), {elapsed:.1f}s (<60s)",
    )


def test_criterion_3_dynamics_shapes():
    """Coherent run plateaus; noisy runs rise, peak and die; tau ordering."""
    traj0, rep0 = run_point(CANONICAL)
    times, e_n, _, _, _ = negativity_series(traj0, 1e11)
    after_onset = times > rep0.t_onset + 1.0
    monotone = bool(np.all(np.diff(e_n[after_onset]) > -1e-3))

    coherent_ok = (
        rep0.t_onset is not None
        and rep0.t_onset > 100.0
        and monotone
        and math.isinf(rep0.tau)
        and rep0.e_n_steady is not None
        and rep0.e_n_steady > 0
    )

    taus = {}
    noisy_ok = True
    for d in (1e-10, 1e-8):
        _, rep = run_point(replace(CANONICAL, noise_width=d))
        taus[d] = rep.tau
        noisy_ok &= (
            rep.t_onset is not None
            and rep.t_death is not None
            and math.isfinite(rep.tau)
            and not rep.multiple_intervals
            and rep.t_onset < rep.t_peak < rep.t_death
        )
    ordering = 0 < taus[1e-8] < taus[1e-10] < math.inf

    report(
        "criterion 3 (dynamics shapes)",
        coherent_ok and noisy_ok and ordering,
        f"onset={rep0.t_onset:.1f}, E_N_st={rep0.e_n_steady:.4f}, "
        f"tau(1e-10)={taus[1e-10]:.0f} > tau(1e-8)={taus[1e-8]:.0f}",
    )


def test_criterion_4_boundary_formula():
    """Simulated n_T0(D) within 15% of the analytic approximation."""
    rels = []
    for d in np.geomspace(1e-10, 1e-6, 5):
        p = replace(CANONICAL, noise_width=float(d))
        sim = find_boundary(p, "n_thermal", (1.0, 50.0)).value
        formula = eval_boundary(float(d), CANONICAL.epsilon, CANONICAL.quality)
        rels.append(abs(sim - formula) / formula)
    worst = max(rels)
    report(
        "criterion 4 (boundary formula validity)",
        worst < 0.15,
        f"worst rel. deviation {worst:.2%} over D in [1e-10, 1e-6] (tol 15%)",
    )


def test_criterion_5_amplitude_scan_monotonicity():
    """E_Nmax grows with eps; tau peaks near threshold then decreases."""
    ok = True
    details = []
    for n_t in (10.0, 20.0, 30.0):
        eps0 = 4 * n_t / 5000
        eps_grid = eps0 * np.linspace(1.1, 2.5, 10)
        taus, emax = [], []
        for eps in eps_grid:
            p = SystemParams(
                quality=5000, epsilon=float(eps), n_thermal=n_t, noise_width=1e-10
            )
            _, rep = run_point(p)
            taus.append(rep.tau)
            emax.append(rep.e_n_max)
        taus = np.asarray(taus)
        emax = np.asarray(emax)
        peak = int(taus.argmax())
        ok &= bool(np.all(np.diff(emax) > 0))          # E_Nmax monotone in eps
        ok &= peak <= 3                                 # tau maximal near threshold
        ok &= bool(np.all(np.diff(taus[peak:]) < 0))    # then decreasing
        ok &= bool(np.all(taus > 0))
        details.append(f"nT={n_t:.0f}: tau peak idx {peak}")
    report("criterion 5 (amplitude scan)", ok, "; ".join(details))


def test_criterion_6_oracle_equivalence():
    """Monte-Carlo phase averaging matches the closed equations within 3 SE."""
    p = replace(CANONICAL, noise_width=1e-4)
    rep = mc_compare(
        p,
        n_paths=10_000,
        t_end=2e4,
        checkpoints=np.linspace(2e3, 2e4, 10),
        master_seed=2024,
    )
    report(
        "criterion 6 (oracle equivalence)",
        rep.passed,
        f"{rep.fraction_within_3se:.1%} of {rep.n_pairs} pairs within 3 SE "
        f"(need 95%), worst z = {rep.worst_z:.2f}",
    )


def test_criterion_7_negativity_unit_suite():
    """Thermal zero, squeezed-vacuum values, route equivalence, rotations."""
    thermal = negativity_from_moments(PhysicalMoments(nbar=10, s1=0, s2=0, c=0, d=0))
    ok = thermal.e_n == 0.0

    worst_tmsv = 0.0
    for r in (0.1, 0.5, 1.0):
        res = negativity_from_moments(tmsv_moments(r))
        worst_tmsv = max(worst_tmsv, abs(res.e_n - 2 * r / math.log(2)))
    ok &= worst_tmsv < 1e-8

    rng = np.random.default_rng(7)
    worst_route = 0.0
    for _ in range(1000):
        sigma = random_physical_covariance(rng)
        e_inv = log_negativity(sigma).e_n
        e_spec = log_negativity_from_spectrum(
            symplectic_spectrum(sigma, partial_transpose=True)
        )
        worst_route = max(worst_route, abs(e_inv - e_spec))
    ok &= worst_route < 1e-10

    worst_rot = 0.0
    sigma = random_physical_covariance(rng)
    for theta in (0.1, 1.0, 2.5):
        c, s = math.cos(theta), math.sin(theta)
        rot = np.zeros((4, 4))
        rot[:2, :2] = rot[2:, 2:] = [[c, s], [-s, c]]
        worst_rot = max(
            worst_rot,
            abs(log_negativity(rot @ sigma @ rot.T).e_n - log_negativity(sigma).e_n),
        )
    ok &= worst_rot < 1e-12

    report(
        "criterion 7 (negativity unit suite)",
        bool(ok),
        f"TMSV err {worst_tmsv:.1e} (<1e-8), route gap {worst_route:.1e} (<1e-10), "
        f"rotation gap {worst_rot:.1e} (<1e-12)",
    )


def test_criterion_8_closed_form_integrator_checks():
    """Constancy at eps=0, exact dressed decay, dominant growth rate."""
    p_flat = replace(CANONICAL, epsilon=0.0, noise_width=1e-6)
    traj = integrate(p_flat, 1e5)
    flat_dev = float(np.abs(traj.states[:, 0, 1] - 10.0).max())
    ok = flat_dev < 1e-8

    p_phase = SystemParams.from_gamma(0.0, epsilon=0.0, n_thermal=10, noise_width=1e-4)
    traj = integrate(
        p_phase, 1e4,
        IntegrationControls(rel_tol=1e-12, abs_tol=1e-14, sample_interval=250.0),
    )
    expected = 10.0 * np.exp(-1e-4 * traj.times)
    decay_rel = float(np.abs(traj.states[:, 3, 1] - expected).max() / expected.min())
    ok &= decay_rel < 1e-8

    traj = integrate(CANONICAL, 3000.0)
    norms = np.abs(traj.states).max(axis=(1, 2))
    tail = traj.times > 2000.0
    rate = float(np.polyfit(traj.times[tail], np.log(norms[tail]), 1)[0])
    target = CANONICAL.omega * CANONICAL.epsilon / 2 - CANONICAL.gamma
    rate_rel = abs(rate - target) / target
    ok &= rate_rel < 0.01

    report(
        "criterion 8 (closed-form checks)",
        bool(ok),
        f"eps=0 drift {flat_dev:.1e} (<1e-8), decay rel err {decay_rel:.1e} (<1e-8), "
        f"growth rate rel err {rate_rel:.2%} (<1%)",
    )
