"""Analytic approximation of the critical boson number and its refitting.

The tau > 0 interface in the (D, n_T) plane is well described by

    n_T0(D) = (Q*eps/4) / (1 + c(Q, eps) * sqrt(D/omega)),
    c(Q, eps) = (a1*sqrt(eps) + b1)*Q + a2*eps + b2,

which reduces to the coherent-pump limit Q*eps/4 at D = 0.  The relation is
linear in the constants once inverted, so refitting them against simulated
boundary data is a two-stage linear least-squares problem: first a
through-origin slope c per (Q, eps) pair, then a regression of the slopes on
the features (sqrt(eps)*Q, Q, eps, 1).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class BoundaryConstants:
    a1: float
    b1: float
    a2: float
    b2: float

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"constant {name} must be finite")


# Baseline coefficient set; accurate for D/omega up to about 1e-6.
BASELINE_CONSTANTS = BoundaryConstants(a1=2.08, b1=-4e-2, a2=-1.9e3, b2=-4.82)


@dataclass(frozen=True)
class BoundarySample:
    """One simulated boundary point (D in units of omega)."""

    D: float
    epsilon: float
    quality: float
    n_t0: float


def eval_boundary(
    D: float,
    epsilon: float,
    quality: float,
    constants: BoundaryConstants = BASELINE_CONSTANTS,
) -> float:
    """Critical boson number n_T0(D) from the analytic approximation.

    ``D`` is the pump-noise spectral width in units of omega.  Raises when
    the denominator is non-positive (outside the validity range).
    """
    if D < 0:
        raise ValueError(f"D must be >= 0, got {D}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not quality > 0:
        raise ValueError(f"quality must be positive, got {quality}")
    slope = (constants.a1 * math.sqrt(epsilon) + constants.b1) * quality \
        + constants.a2 * epsilon + constants.b2
    denom = 1.0 + slope * math.sqrt(D)
    if denom <= 0:
        raise ValueError("approximation out of validity range (denominator <= 0)")
    return quality * epsilon / 4.0 / denom


@dataclass
class FitResult:
    constants: BoundaryConstants | None
    status: str                      # "ok" or "underdetermined"
    slopes: list[dict]               # per-(Q, eps) stage-1 slopes
    rms_relative_residual: float | None
    max_relative_residual: float | None

    def to_json_dict(self) -> dict:
        return {
            "constants": None if self.constants is None else asdict(self.constants),
            "status": self.status,
            "slopes": self.slopes,
            "residuals": {
                "rms_relative": self.rms_relative_residual,
                "max_relative": self.max_relative_residual,
            },
        }


def fit_boundary(samples, weights: str = "uniform") -> FitResult:
    """Refit the boundary constants against simulated boundary samples.

    ``samples`` is an iterable of BoundarySample (or mappings with the same
    keys).  ``weights`` is "uniform" or "inverse-square" (1/n_t0**2, which
    balances relative errors).  With a single (quality, epsilon) pair only
    the stage-1 slope is identifiable and the result carries status
    "underdetermined" with ``constants=None``.
    """
    if weights not in ("uniform", "inverse-square"):
        raise ValueError(f"unknown weights {weights!r}")
    parsed = []
    for s in samples:
        if not isinstance(s, BoundarySample):
            s = BoundarySample(
                D=float(s["D"]), epsilon=float(s["epsilon"]),
                quality=float(s["quality"]), n_t0=float(s["n_t0"]),
            )
        parsed.append(s)
    if not parsed:
        raise ValueError("no samples")

    groups: dict[tuple[float, float], list[BoundarySample]] = {}
    for s in parsed:
        groups.setdefault((s.quality, s.epsilon), []).append(s)

    slopes = []
    for (quality, epsilon), members in sorted(groups.items()):
        x = np.sqrt([m.D for m in members])
        y = np.array([quality * epsilon / (4.0 * m.n_t0) - 1.0 for m in members])
        w = np.ones_like(x)
        if weights == "inverse-square":
            w = np.array([1.0 / m.n_t0**2 for m in members])
        wxx = float(np.sum(w * x * x))
        if wxx == 0.0:
            continue  # all D = 0 in this group: no slope information
        slopes.append(
            {
                "quality": quality,
                "epsilon": epsilon,
                "slope": float(np.sum(w * x * y) / wxx),
                "n_samples": len(members),
            }
        )
    if not slopes:
        raise ValueError("slope undefined: samples contain no D > 0 points")

    if len(slopes) < 2:
        return FitResult(
            constants=None,
            status="underdetermined",
            slopes=slopes,
            rms_relative_residual=None,
            max_relative_residual=None,
        )

    design = np.array(
        [
            [math.sqrt(s["epsilon"]) * s["quality"], s["quality"], s["epsilon"], 1.0]
            for s in slopes
        ]
    )
    target = np.array([s["slope"] for s in slopes])
    coeffs, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    constants = BoundaryConstants(*map(float, coeffs))
    status = "ok" if rank == 4 else "underdetermined"

    rel = []
    for s in parsed:
        try:
            pred = eval_boundary(s.D, s.epsilon, s.quality, constants)
        except ValueError:
            continue
        rel.append(abs(pred - s.n_t0) / abs(s.n_t0))
    rms = float(np.sqrt(np.mean(np.square(rel)))) if rel else None
    mx = float(np.max(rel)) if rel else None
    return FitResult(
        constants=constants,
        status=status,
        slopes=slopes,
        rms_relative_residual=rms,
        max_relative_residual=mx,
    )


def read_samples_csv(path) -> list[BoundarySample]:
    """Load boundary samples from a CSV with columns D, epsilon, quality, n_t0.

    Lines starting with '#' are metadata and skipped.
    """
    samples = []
    with open(path, newline="") as fh:
        rows = (line for line in fh if not line.startswith("#"))
        for rec in csv.DictReader(rows):
            samples.append(
                BoundarySample(
                    D=float(rec["D"]),
                    epsilon=float(rec["epsilon"]),
                    quality=float(rec["quality"]),
                    n_t0=float(rec["n_t0"]),
                )
            )
    return samples


def read_samples_json(path) -> list[BoundarySample]:
    """Load boundary samples from a JSON list of objects."""
    with open(path) as fh:
        data = json.load(fh)
    return [
        BoundarySample(
            D=float(rec["D"]), epsilon=float(rec["epsilon"]),
            quality=float(rec["quality"]), n_t0=float(rec["n_t0"]),
        )
        for rec in data
    ]
