"""Command-line front end.

Subcommands: simulate | sweep | boundary | fit | oracle.  Flags mirror the
usual symbols (--Q, --nT, --eps, --D, --Delta); all rates and times are in
units of omega, which is fixed at 1.  A JSON config file can supply any flag
value; explicit flags take precedence.  Every output file embeds the resolved
configuration in a header so a run can be reproduced from its output alone.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    AnalysisControls,
    EntanglementReport,
    SteadyStateError,
    negativity_series,
    run_point,
)
from .boundary_fit import (
    BASELINE_CONSTANTS,
    fit_boundary,
    read_samples_csv,
    read_samples_json,
)
from .integrate import IntegrationControls
from .mc_oracle import mc_compare
from .model import SystemParams
from .negativity import NonPhysicalCovarianceError
from .sweep import AxisSpec, SweepControls, SweepSpec, find_boundary, run_grid

FLAG_TO_FIELD = {
    "Q": "quality",
    "nT": "n_thermal",
    "eps": "epsilon",
    "D": "noise_width",
    "Delta": "delta",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise ValueError(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        value = float(value)  # numpy scalars repr differently
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "unbounded" if value > 0 else "-unbounded"
        if math.isnan(value):
            return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _csv_header(config: dict) -> list[str]:
    return [
        f"# noisypump {__version__}",
        f"# config: {json.dumps(_jsonable(config), sort_keys=True)}",
    ]


def _write_csv(path: Path, config: dict, columns: list[str], rows):
    lines = _csv_header(config)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _report_dict(report: EntanglementReport) -> dict:
    return {
        "t_onset": report.t_onset,
        "t_death": report.t_death,
        "tau": report.tau,
        "e_n_max": report.e_n_max,
        "t_peak": report.t_peak,
        "e_n_steady": report.e_n_steady,
        "flags": report.flag_names(),
    }


def _add_param_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--Q", type=float, default=None, help="quality factor omega/gamma")
    parser.add_argument("--nT", type=float, default=None, help="bath mean boson number")
    parser.add_argument("--eps", type=float, default=None, help="pump amplitude")
    parser.add_argument("--D", type=float, default=None, help="pump phase-noise width (units of omega)")
    parser.add_argument("--Delta", type=float, default=None, help="detuning from twice the eigenfrequency")


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, default=None, help="JSON file with flag defaults")
    parser.add_argument("--out", type=Path, default=None, help="output path stem")
    parser.add_argument("--rel-tol", type=float, default=None)
    parser.add_argument("--abs-tol", type=float, default=None)
    parser.add_argument("--sample-interval", type=float, default=None)
    parser.add_argument("--horizon", type=float, default=None, help="integration horizon (default 100/gamma)")
    parser.add_argument("--eps-on", type=float, default=None, help="numerical floor for E_N > 0")
    parser.add_argument("--moment-cap", type=float, default=None, help="moment magnitude trusted for E_N")


_PARAM_DEFAULTS = {"Q": 5000.0, "nT": 10.0, "eps": 1.6e-2, "D": 0.0, "Delta": 0.0}


def _resolve(args: argparse.Namespace, keys: list[str], defaults: dict) -> dict:
    """Merge flag values over config-file values over defaults."""
    config = {}
    if getattr(args, "config", None):
        config = json.loads(Path(args.config).read_text())
        unknown = set(config) - set(keys)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    resolved = {}
    for key in keys:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            resolved[key] = flag
        elif key in config:
            resolved[key] = config[key]
        else:
            resolved[key] = defaults.get(key)
    return resolved


def _params_from(resolved: dict) -> SystemParams:
    return SystemParams(
        quality=resolved["Q"],
        epsilon=resolved["eps"],
        n_thermal=resolved["nT"],
        noise_width=resolved["D"],
        delta=resolved["Delta"],
    )


def _analysis_controls(resolved: dict) -> AnalysisControls:
    kwargs = {}
    if resolved.get("eps-on") is not None:
        kwargs["eps_on"] = resolved["eps-on"]
    if resolved.get("horizon") is not None:
        kwargs["horizon"] = resolved["horizon"]
    if resolved.get("moment-cap") is not None:
        kwargs["moment_cap"] = resolved["moment-cap"]
    return AnalysisControls(**kwargs)


def _integration_controls(resolved: dict) -> IntegrationControls:
    kwargs = {}
    if resolved.get("rel-tol") is not None:
        kwargs["rel_tol"] = resolved["rel-tol"]
    if resolved.get("abs-tol") is not None:
        kwargs["abs_tol"] = resolved["abs-tol"]
    if resolved.get("sample-interval") is not None:
        kwargs["sample_interval"] = resolved["sample-interval"]
    return IntegrationControls(**kwargs)


_COMMON_KEYS = ["Q", "nT", "eps", "D", "Delta", "rel-tol", "abs-tol",
                "sample-interval", "horizon", "eps-on", "moment-cap"]


# ---------------------------------------------------------------- simulate


def _cmd_simulate(args) -> int:
    keys = _COMMON_KEYS + ["t-end"]
    resolved = _resolve(args, keys, {**_PARAM_DEFAULTS, "t-end": None})
    params = _params_from(resolved)
    controls = _analysis_controls(resolved)
    integration = _integration_controls(resolved)

    traj, report = run_point(params, controls, integration, t_end=resolved["t-end"])
    times, e_n, nu, nbar, _ = negativity_series(traj, controls.moment_cap)

    out = args.out or Path("simulate")
    config = {"subcommand": "simulate", **resolved}
    _write_csv(
        out.with_suffix(".csv"),
        config,
        ["t_omega", "E_N", "nu_minus", "nbar"],
        zip(times, e_n, nu, nbar),
    )
    _write_json(
        out.with_suffix(".report.json"),
        {"version": __version__, "config": config, "report": _report_dict(report)},
    )
    if args.emit_plot_script:
        _emit_plot_script(out, kind="simulate")
    return 0


# ------------------------------------------------------------------- sweep


def _parse_axis(spec: str) -> AxisSpec:
    parts = spec.split(":")
    if len(parts) != 5:
        raise ValueError(f"axis spec must be NAME:lin|log:START:STOP:COUNT, got {spec!r}")
    name, spacing, start, stop, count = parts
    if name not in FLAG_TO_FIELD:
        raise ValueError(f"unknown axis {name!r}; use one of {sorted(FLAG_TO_FIELD)}")
    spacing = {"lin": "linear", "linear": "linear", "log": "log"}.get(spacing)
    if spacing is None:
        raise ValueError(f"axis spacing must be lin or log in {spec!r}")
    return AxisSpec(
        name=FLAG_TO_FIELD[name],
        start=float(start),
        stop=float(stop),
        count=int(count),
        spacing=spacing,
    )


def _cmd_sweep(args) -> int:
    keys = _COMMON_KEYS + ["workers"]
    resolved = _resolve(args, keys, {**_PARAM_DEFAULTS, "workers": 1})
    axes = tuple(_parse_axis(spec) for spec in args.grid)
    spec = SweepSpec(axes=axes, fixed=_params_from(resolved))
    controls = SweepControls(
        analysis=_analysis_controls(resolved),
        integration=_integration_controls(resolved),
        workers=int(resolved["workers"]),
    )
    rows = run_grid(spec, controls)

    out = args.out or Path("sweep")
    config = {"subcommand": "sweep", "grid": list(args.grid), **resolved}
    axis_names = [a.name for a in axes]
    columns = axis_names + ["tau", "t_onset", "t_death", "e_n_max", "e_n_steady", "flags"]
    table = [
        [row.values[name] for name in axis_names]
        + [row.tau, row.t_onset, row.t_death, row.e_n_max, row.e_n_steady, row.flags]
        for row in rows
    ]
    _write_csv(out.with_suffix(".csv"), config, columns, table)
    if args.emit_plot_script:
        _emit_plot_script(out, kind="sweep", axes=axis_names)
    return 0


# ---------------------------------------------------------------- boundary


def _default_bracket(axis: str, params: SystemParams) -> tuple[float, float]:
    if axis == "n_thermal":
        top = params.quality * params.epsilon / 4.0
        return (max(1e-3, 0.02 * top), 2.5 * top)
    if axis == "epsilon":
        eps0 = 4.0 * params.n_thermal / params.quality
        return (0.3 * eps0, 6.0 * eps0)
    raise ValueError(f"no default bracket for axis {axis!r}")


def _cmd_boundary(args) -> int:
    keys = _COMMON_KEYS + ["tol"]
    resolved = _resolve(args, keys, {**_PARAM_DEFAULTS, "tol": 1e-3})
    axis = FLAG_TO_FIELD[args.axis]
    d_values = args.D_values if args.D_values else [resolved["D"]]

    points = []
    for d in d_values:
        params = SystemParams(
            quality=resolved["Q"],
            epsilon=resolved["eps"],
            n_thermal=resolved["nT"],
            noise_width=d,
            delta=resolved["Delta"],
        )
        bracket = tuple(args.bracket) if args.bracket else _default_bracket(axis, params)
        controls = SweepControls(
            analysis=_analysis_controls(resolved),
            integration=_integration_controls(resolved),
        )
        result = find_boundary(params, axis, bracket, tol=resolved["tol"], controls=controls)
        points.append(
            {
                "axis": axis,
                "D": d,
                "quality": params.quality,
                "epsilon": params.epsilon,
                "n_thermal": params.n_thermal,
                "value": result.value,
                "iterations": result.iterations,
                "tau_at_value": result.confirmation.tau,
            }
        )

    out = args.out or Path("boundary")
    config = {
        "subcommand": "boundary",
        "axis": args.axis,
        "D_values": list(d_values),
        "bracket": list(args.bracket) if args.bracket else None,
        **resolved,
    }
    _write_json(
        out.with_suffix(".json"),
        {"version": __version__, "config": config, "critical_points": points},
    )
    if args.csv:
        if axis != "n_thermal":
            raise ValueError("--csv output (boundary samples for fitting) needs --axis nT")
        rows = [
            [p["D"], p["epsilon"], p["quality"], p["value"]] for p in points
        ]
        _write_csv(Path(args.csv), config, ["D", "epsilon", "quality", "n_t0"], rows)
        if args.emit_plot_script:
            _emit_plot_script(Path(args.csv).with_suffix(""), kind="boundary")
    return 0


# --------------------------------------------------------------------- fit


def _cmd_fit(args) -> int:
    path = Path(args.input)
    if not path.exists():
        raise FileNotFoundError(path)
    if path.suffix == ".json":
        samples = read_samples_json(path)
    else:
        samples = read_samples_csv(path)
    result = fit_boundary(samples, weights=args.weights)

    out = args.out or Path("fit")
    config = {"subcommand": "fit", "input": str(path), "weights": args.weights}
    _write_json(
        out.with_suffix(".json"),
        {"version": __version__, "config": config, **result.to_json_dict()},
    )
    return 0


# ------------------------------------------------------------------ oracle


def _cmd_oracle(args) -> int:
    keys = _COMMON_KEYS + ["t-end", "n-paths", "dt", "checkpoints", "seed"]
    resolved = _resolve(
        args,
        keys,
        {**_PARAM_DEFAULTS, "t-end": 2e4, "n-paths": 10000, "dt": None,
         "checkpoints": 10, "seed": 0},
    )
    params = _params_from(resolved)
    t_end = resolved["t-end"]
    n_check = int(resolved["checkpoints"])
    checkpoints = np.linspace(t_end / n_check, t_end, n_check)
    report = mc_compare(
        params,
        n_paths=int(resolved["n-paths"]),
        t_end=t_end,
        checkpoints=checkpoints,
        dt=resolved["dt"],
        master_seed=int(resolved["seed"]),
    )
    out = args.out or Path("oracle")
    config = {"subcommand": "oracle", **resolved}
    _write_json(
        out.with_suffix(".json"),
        {"version": __version__, "config": config, **report.to_json_dict()},
    )
    return 0 if report.passed else 3


# ------------------------------------------------------------ plot scripts


_PLOT_TEMPLATES = {
    "simulate": """\
#!/usr/bin/env python3
\"\"\"Plot the logarithmic-negativity time series from {csv}.\"\"\"
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

t, e_n = [], []
with open({csv!r}) as fh:
    rows = (line for line in fh if not line.startswith("#"))
    for rec in csv.DictReader(rows):
        t.append(float(rec["t_omega"]))
        e_n.append(float(rec["E_N"]))

plt.figure(figsize=(6, 4))
plt.plot(t, e_n)
plt.xlabel("t (units of 1/omega)")
plt.ylabel("E_N")
plt.tight_layout()
plt.savefig({png!r}, dpi=160)
print("wrote", {png!r})
""",
    "sweep": """\
#!/usr/bin/env python3
\"\"\"Plot the lifetime surface/scan from {csv}.\"\"\"
import csv
import math
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

axes = {axes!r}
rows = []
with open({csv!r}) as fh:
    lines = (line for line in fh if not line.startswith("#"))
    for rec in csv.DictReader(lines):
        rows.append(rec)

def as_tau(rec):
    value = rec["tau"]
    return float("nan") if value == "" else float(value)

plt.figure(figsize=(6, 4.5))
if len(axes) == 1:
    x = [float(r[axes[0]]) for r in rows]
    plt.plot(x, [as_tau(r) for r in rows], "o-")
    plt.xlabel(axes[0])
    plt.ylabel("tau")
else:
    x = [float(r[axes[0]]) for r in rows]
    y = [float(r[axes[1]]) for r in rows]
    tau = [as_tau(r) for r in rows]
    finite = [v for v in tau if not math.isnan(v) and not math.isinf(v)]
    vmax = max(finite) if finite else 1.0
    tau = [vmax if math.isinf(v) else v for v in tau]
    sc = plt.scatter(x, y, c=tau, s=36, cmap="viridis")
    plt.colorbar(sc, label="tau")
    plt.xlabel(axes[0])
    plt.ylabel(axes[1])
    if axes[0] == "noise_width":
        plt.xscale("log")
    if axes[1] == "noise_width":
        plt.yscale("log")
plt.tight_layout()
plt.savefig({png!r}, dpi=160)
print("wrote", {png!r})
""",
    "boundary": """\
#!/usr/bin/env python3
\"\"\"Plot critical boson number vs noise width from {csv}.\"\"\"
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d, n_t0 = [], []
with open({csv!r}) as fh:
    rows = (line for line in fh if not line.startswith("#"))
    for rec in csv.DictReader(rows):
        d.append(float(rec["D"]))
        n_t0.append(float(rec["n_t0"]))

plt.figure(figsize=(6, 4))
plt.semilogx(d, n_t0, "o-")
plt.xlabel("D (units of omega)")
plt.ylabel("critical n_T")
plt.tight_layout()
plt.savefig({png!r}, dpi=160)
print("wrote", {png!r})
""",
}


def _emit_plot_script(stem: Path, kind: str, axes: list[str] | None = None):
    csv_path = str(stem.with_suffix(".csv"))
    png_path = str(stem.with_suffix(".png"))
    script = _PLOT_TEMPLATES[kind].format(csv=csv_path, png=png_path, axes=axes)
    target = stem.parent / (stem.name + "_plot.py")
    target.write_text(script)


# -------------------------------------------------------------------- main


def build_parser() -> _Parser:
    parser = _Parser(prog="noisypump", description=__doc__)
    parser.add_argument("--version", action="version", version=f"noisypump {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sim = sub.add_parser("simulate", help="one run: E_N(t) series + event report")
    _add_param_flags(p_sim)
    _add_common_flags(p_sim)
    p_sim.add_argument("--t-end", type=float, default=None, help="override the horizon")
    p_sim.add_argument("--emit-plot-script", action="store_true")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="grid of runs over one or two axes")
    _add_param_flags(p_sweep)
    _add_common_flags(p_sweep)
    p_sweep.add_argument("--grid", nargs="+", required=True,
                         metavar="NAME:lin|log:START:STOP:COUNT")
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.add_argument("--emit-plot-script", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_bnd = sub.add_parser("boundary", help="bisect the tau>0 boundary along one axis")
    _add_param_flags(p_bnd)
    _add_common_flags(p_bnd)
    p_bnd.add_argument("--axis", choices=["nT", "eps"], required=True)
    p_bnd.add_argument("--bracket", type=float, nargs=2, default=None)
    p_bnd.add_argument("--tol", type=float, default=None, help="relative bisection tolerance")
    p_bnd.add_argument("--D-values", type=float, nargs="+", default=None,
                       help="locate the boundary at several noise widths")
    p_bnd.add_argument("--csv", type=Path, default=None,
                       help="also write boundary samples as CSV (for fit)")
    p_bnd.add_argument("--emit-plot-script", action="store_true")
    p_bnd.set_defaults(func=_cmd_boundary)

    p_fit = sub.add_parser("fit", help="refit boundary constants from samples")
    p_fit.add_argument("--input", required=True, help="boundary samples (.csv or .json)")
    p_fit.add_argument("--weights", choices=["uniform", "inverse-square"], default="uniform")
    p_fit.add_argument("--out", type=Path, default=None)
    p_fit.set_defaults(func=_cmd_fit)

    p_orc = sub.add_parser("oracle", help="Monte-Carlo check of the phase averaging")
    _add_param_flags(p_orc)
    _add_common_flags(p_orc)
    p_orc.add_argument("--t-end", type=float, default=None)
    p_orc.add_argument("--n-paths", type=int, default=None)
    p_orc.add_argument("--dt", type=float, default=None)
    p_orc.add_argument("--checkpoints", type=int, default=None)
    p_orc.add_argument("--seed", type=int, default=None)
    p_orc.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (NonPhysicalCovarianceError, SteadyStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
