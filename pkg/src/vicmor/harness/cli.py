"""Command-line front end.

    vicmor figure fig8a --out-dir out/
    vicmor sweep --axis B --min 0 --max 5 --points 51 --G 1
    vicmor spectrum --config run.json --points 401 --jobs 4
    vicmor sensitivity --nph 1e6 --B 0.35 --G 0.35
    vicmor oracle-check --G 5 --out-dir reports/
    vicmor trajectory --G 1 --t-end 200 -o traj.csv

Parameter values are resolved as flags > config file > defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from ..errors import NumericalError, ParameterError, VicmorError
from ..liouvillian import (
    IntegratorConfig,
    check_density_matrix,
    ground_state,
    integrate,
    write_trajectory_csv,
)
from ..observables import MediumParams, sensitivity
from ..params import RHO03_FORM_CHOICES, RHO21_ZEEMAN_CHOICES, Manifold, SystemParams, validate_params
from ..perturbative import COEFFICIENT_SOURCES
from .oracle import oracle_check
from .output import emit_csv, emit_plot_script
from .plotting import render_figure
from .sweep import AXES, DELTA_RANGE, FIELD_RANGE, MEDIUM_KEYS, PRESETS, SweepSpec, figure_preset, run_sweep, split_config

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

_CHOICES = {"rho21_zeeman": RHO21_ZEEMAN_CHOICES, "rho03_form": RHO03_FORM_CHOICES}


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _complex_arg(text: str) -> complex | float:
    z = complex(text.replace(" ", ""))
    return z.real if z.imag == 0 else z


def _add_param_flags(ap: argparse.ArgumentParser) -> None:
    grp = ap.add_argument_group("model parameters (override the config file)")
    for f in fields(SystemParams):
        flag = f"--{f.name}"
        if f.name in _CHOICES:
            grp.add_argument(flag, choices=_CHOICES[f.name], default=None)
        elif f.name == "G":
            grp.add_argument(flag, type=_complex_arg, default=None, help="control half-Rabi frequency, e.g. 1 or 1+0.5j")
        else:
            grp.add_argument(flag, type=float, default=None)
    grp.add_argument("--C", type=float, default=None, help="rotation scale of the medium")
    grp.add_argument("--kappa", type=float, default=None, help="coherence-to-susceptibility factor")
    ap.add_argument("--config", type=Path, help="JSON document with parameter values (and optionally a sweep section)")


def _add_output_flags(ap: argparse.ArgumentParser, plots: bool = True) -> None:
    ap.add_argument("--out-dir", type=Path, default=Path("."), help="directory for output files")
    ap.add_argument("--name", default=None, help="base name of output files")
    if plots:
        ap.add_argument("--no-plot", action="store_true", help="skip the PNG and plot script")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")


def _read_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise OSError(f"config file not found: {path}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError([("config", str(path), f"invalid JSON in {path}: {exc}")])
    if not isinstance(data, dict):
        raise ParameterError([("config", str(path), "config must be a JSON object")])
    return data


def _resolve(args, base: SystemParams | None = None, medium: MediumParams | None = None):
    """Layer defaults (or a preset's ``base``), then the config file, then flags."""
    data = _read_config(args.config)
    _, _, cfg_sweep = split_config(data)  # rejects unknown keys
    system = (base or SystemParams()).to_dict()
    med = (medium or MediumParams()).to_dict()
    for k, v in data.items():
        if k in MEDIUM_KEYS:
            med[k] = v
        elif k != "sweep":
            system[k] = v
    for f in fields(SystemParams):
        v = getattr(args, f.name)
        if v is not None:
            system[f.name] = v
    for k in MEDIUM_KEYS:
        v = getattr(args, k)
        if v is not None:
            med[k] = v
    return validate_params(SystemParams.from_dict(system)), MediumParams.from_dict(med), cfg_sweep


def _write_outputs(records, spec: SweepSpec, out_dir: Path, name: str, layout: str, title: str, plot: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = emit_csv(records, out_dir / f"{name}.csv")
    print(f"wrote {csv_path}")
    n_err = sum(not r.ok for r in records)
    if n_err:
        print(f"{n_err} of {len(records)} points failed; see the error column", file=sys.stderr)
    if plot:
        script = emit_plot_script(records, out_dir / f"{name}_plot.py", csv_path.name, layout, spec.axis, title)
        print(f"wrote {script}")
        if any(r.ok for r in records):
            png = render_figure(records, out_dir / f"{name}.png", layout, spec.axis, title)
            print(f"wrote {png}")


def _layout_for(axis: str) -> str:
    return "spectrum" if axis == "delta" else "resonance"


def cmd_figure(args) -> int:
    preset = PRESETS.get(args.figure)
    spec = figure_preset(args.figure)
    base, medium, _ = _resolve(args, spec.base, spec.medium)
    spec = SweepSpec(
        axis=spec.axis,
        min=spec.min if args.min is None else args.min,
        max=spec.max if args.max is None else args.max,
        points=spec.points if args.points is None else args.points,
        base=base,
        medium=medium,
        coefficient_source=args.source,
        name=spec.name,
    )
    records = run_sweep(spec, jobs=args.jobs)
    _write_outputs(records, spec, args.out_dir, args.name or args.figure, preset.layout, preset.title, not args.no_plot)
    return EXIT_OK


def _sweep_from(args, sweep_cfg: dict | None, base, medium) -> SweepSpec:
    sweep_cfg = dict(sweep_cfg or {})
    for key in ("axis", "min", "max", "points"):
        v = getattr(args, key, None)
        if v is not None:
            sweep_cfg[key] = v
    if args.source is not None:
        sweep_cfg["coefficient_source"] = args.source
    if "axis" not in sweep_cfg:
        raise ParameterError([("axis", None, "no sweep axis given (use --axis or a sweep section in --config)")])
    lo, hi, n = DELTA_RANGE if sweep_cfg["axis"] == "delta" else FIELD_RANGE
    return SweepSpec(
        axis=sweep_cfg["axis"],
        min=float(sweep_cfg.get("min", lo)),
        max=float(sweep_cfg.get("max", hi)),
        points=int(sweep_cfg.get("points", n)),
        base=base,
        medium=medium,
        coefficient_source=sweep_cfg.get("coefficient_source", "linear_solve"),
        name=sweep_cfg.get("name", ""),
    )


def cmd_sweep(args) -> int:
    base, medium, sweep_cfg = _resolve(args)
    spec = _sweep_from(args, sweep_cfg, base, medium)
    records = run_sweep(spec, jobs=args.jobs)
    name = args.name or spec.name or f"sweep_{spec.axis}"
    _write_outputs(records, spec, args.out_dir, name, _layout_for(spec.axis), name, not args.no_plot)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.config is None and args.axis is None:
        args.axis = "delta"
    return cmd_sweep(args)


def cmd_sensitivity(args) -> int:
    p, medium, _ = _resolve(args)
    res = sensitivity(p, medium, n_ph=args.nph, dB=args.dB, source=args.source or "linear_solve")
    print(f"B = {p.B:.6g}  N_ph = {args.nph:.6g}")
    print(f"dTheta/dB = {res.slope:.10g} rad per unit B (step {args.dB:g})")
    print(f"dTheta/dB = {res.slope_fine:.10g} rad per unit B (step {args.dB / 10:g})")
    print(f"delta_B   = {res.delta_B:.10g}")
    if res.slope_rel_change > 1e-3:
        print(f"warning: slope changes by {res.slope_rel_change:.2e} when the step shrinks", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    base = figure_preset(args.figure).base if args.figure else None
    p, _, _ = _resolve(args, base)
    grid = np.linspace(args.min, args.max, args.points)
    report = oracle_check(p, grid, spots=args.spots)
    text = report.to_text()
    print(text, end="")
    if args.name or args.figure or args.out_dir != Path("."):
        args.out_dir.mkdir(parents=True, exist_ok=True)
        name = args.name or (f"oracle_{args.figure}" if args.figure else "oracle")
        (args.out_dir / f"{name}.txt").write_text(text, encoding="utf-8")
        report.write_csv(args.out_dir / f"{name}.csv")
        print(f"wrote {args.out_dir / name}.txt and .csv")
    return EXIT_OK


def cmd_trajectory(args) -> int:
    p, _, _ = _resolve(args)
    try:
        cfg = IntegratorConfig(dt=args.dt, t_end=args.t_end, sample_every=args.sample_every)
    except ValueError as exc:
        raise ParameterError(str(exc))
    traj = integrate(ground_state(), cfg, p, Manifold.parse(args.manifold))
    problems = check_density_matrix(traj.final)
    for msg in problems:
        print(f"warning: final state {msg}", file=sys.stderr)
    out = args.output
    out.parent.mkdir(parents=True, exist_ok=True)
    print(f"wrote {write_trajectory_csv(traj, out)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vicmor", description="Vacuum-induced coherence and magneto-optical rotation in a four-level atom.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sweep_flags(sp, need_axis):
        sp.add_argument("--axis", choices=AXES, required=need_axis, default=None)
        sp.add_argument("--min", type=float, default=None)
        sp.add_argument("--max", type=float, default=None)
        sp.add_argument("--points", type=int, default=None)
        sp.add_argument("--source", choices=COEFFICIENT_SOURCES, default=None, help="first-order coefficients")

    sp = sub.add_parser("spectrum", help="run a sweep from --config plus flag overrides")
    sweep_flags(sp, False)
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="sweep one parameter")
    sweep_flags(sp, True)
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="reproduce one figure panel")
    sp.add_argument("figure", choices=list(PRESETS), metavar="NAME", help=f"one of {', '.join(PRESETS)}")
    sp.add_argument("--min", type=float, default=None)
    sp.add_argument("--max", type=float, default=None)
    sp.add_argument("--points", type=int, default=None)
    sp.add_argument("--source", choices=COEFFICIENT_SOURCES, default="linear_solve")
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("sensitivity", help="shot-noise-limited field sensitivity")
    sp.add_argument("--nph", type=float, default=1e6, help="detected photon number")
    sp.add_argument("--dB", type=float, default=1e-3, help="finite-difference step in B")
    sp.add_argument("--source", choices=COEFFICIENT_SOURCES, default=None)
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_sensitivity)

    sp = sub.add_parser("oracle-check", help="compare closed forms, linear solve and integration")
    sp.add_argument("--min", type=float, default=DELTA_RANGE[0])
    sp.add_argument("--max", type=float, default=DELTA_RANGE[1])
    sp.add_argument("--points", type=int, default=DELTA_RANGE[2])
    sp.add_argument("--figure", choices=list(PRESETS), default=None, help="start from a figure preset's parameters")
    sp.add_argument("--spots", type=int, default=5, help="detunings checked against time integration")
    _add_param_flags(sp)
    sp.add_argument("--out-dir", type=Path, default=Path("."))
    sp.add_argument("--name", default=None)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("trajectory", help="integrate the master equation from the ground state")
    sp.add_argument("--manifold", default="+", help="+ or -")
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--t-end", type=float, default=200.0)
    sp.add_argument("--sample-every", type=float, default=1.0)
    sp.add_argument("-o", "--output", type=Path, default=Path("trajectory.csv"))
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_trajectory)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        for field_name, value, msg in exc.violations:
            prefix = f"{field_name}: " if field_name else ""
            print(f"error: {prefix}{msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VicmorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
