"""Lifetime of the entangled state across the (noise width, temperature) plane.

Sweeps a coarse grid in D and n_T at fixed pump amplitude, then overlays the
bisected tau > 0 interface and the analytic approximation for the critical
boson number.  The boundary locator and the closed-form curve agree to a few
percent up to D/omega ~ 1e-6.

Writes lifetime_map.png next to this script.  Takes a minute or two.
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from noisypump import (
    AxisSpec,
    SweepControls,
    SweepSpec,
    SystemParams,
    eval_boundary,
    find_boundary,
    run_grid,
)

BASE = SystemParams(quality=5000, epsilon=1.6e-2, n_thermal=10)

spec = SweepSpec(
    axes=(
        AxisSpec("noise_width", 1e-11, 1e-6, 11, spacing="log"),
        AxisSpec("n_thermal", 2.0, 24.0, 12),
    ),
    fixed=BASE,
)
rows = run_grid(spec, SweepControls(workers=4))
d_grid = spec.axes[0].values()
n_grid = spec.axes[1].values()
tau = np.array(
    [0.0 if not np.isfinite(r.tau) else r.tau for r in rows]
).reshape(len(d_grid), len(n_grid))
print(f"grid of {tau.size} cells done; {np.count_nonzero(tau > 0)} entangled")

# Bisected interface and the closed-form approximation.
d_line = np.geomspace(1e-11, 1e-6, 9)
n_crit = [
    find_boundary(replace(BASE, noise_width=float(d)), "n_thermal", (1.0, 50.0)).value
    for d in d_line
]
n_formula = [eval_boundary(float(d), BASE.epsilon, BASE.quality) for d in d_line]

fig, ax = plt.subplots(figsize=(6.6, 4.4))
mesh = ax.pcolormesh(
    np.log10(d_grid), n_grid, tau.T, shading="nearest", cmap="magma"
)
fig.colorbar(mesh, ax=ax, label=r"lifetime $\tau\,\omega$")
ax.plot(np.log10(d_line), n_crit, "w-", lw=2, label="bisected interface")
ax.plot(np.log10(d_line), n_formula, "--", color="lime", lw=2, label="analytic approximation")
ax.set_xlabel(r"$\log_{10}(D/\omega)$")
ax.set_ylabel(r"$n_T$")
ax.legend(loc="lower left")
fig.tight_layout()
out = Path(__file__).with_name("lifetime_map.png")
fig.savefig(out, dpi=160)
print(f"wrote {out}")
