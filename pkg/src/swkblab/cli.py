"""Command-line driver.

Examples::

    swkblab verify --model conventional-radial --ell 1 --n 1..10
    swkblab shape-check --model extended-radial --format json
    swkblab scaling-check --model extended-radial --ell-tilde 2 --n 3 --hbar-list 0.25,1,4
    swkblab spectrum --model extended-radial --n 0..5
    swkblab sweep --model extended-radial --ell-list 0.6,1,2,5,10 --n 1..3

Data goes to stdout (or --output); diagnostics go to stderr.
Exit codes: 0 success/PASS, 1 configuration error, 2 computation error,
3 a check ran but FAILed its threshold.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParamError, SwkbLabError
from .invariance import GridSpec, hbar_scaling_check, mutated, shape_invariance_residual
from .model import Kind, PhysParams, SuperpotentialModel
from .spectrum import build_potential, default_box, solve_eigenvalue
from .swkb import SwkbConfig, swkb_integral

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTE = 2
EXIT_FAIL = 3

REPORT_COLUMNS = ("model", "omega", "ell", "hbar", "n", "energy", "x_left", "x_right",
                  "integral", "deviation", "quad_error", "scheme_agreement")
SWEEP_COLUMNS = ("ell", "ell_tilde", "n", "deviation", "quad_error")

DEFAULT_N = {"verify": "1..10", "shape-check": "0..0", "scaling-check": "3",
             "spectrum": "0..5", "sweep": "1..1"}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    command: str
    model: str
    omega: float
    ell: float
    hbar: float
    n_range: tuple[int, int]
    root_tol: float
    quad_tol: float
    format: str
    output: str | None
    jobs: int
    extra: dict = field(default_factory=dict)

    @property
    def levels(self) -> list[int]:
        return list(range(self.n_range[0], self.n_range[1] + 1))

    def swkb_config(self) -> SwkbConfig:
        return SwkbConfig(root_tol=self.root_tol, quad_tol=self.quad_tol)

    def physical_model(self) -> SuperpotentialModel:
        return SuperpotentialModel(Kind(self.model), PhysParams(self.omega, self.ell, self.hbar))

    def as_dict(self) -> dict:
        out = asdict(self)
        out["n_range"] = list(self.n_range)
        extra = out.pop("extra")
        out.update(extra)
        return out


# --- parsing --------------------------------------------------------------


def parse_n_range(text: str) -> tuple[int, int]:
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from exc
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"n range {text!r} is empty or negative")
    return lo, hi


def _float_list(text: str) -> list[float]:
    text = str(text).strip()
    if not text:
        return []
    try:
        return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from exc
    if not np.isfinite(value) or value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be finite and > 0, got {text!r}")
    return value


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--model", choices=[k.value for k in Kind], default=Kind.EXTENDED.value)
    p.add_argument("--omega", type=float, default=1.0, help="angular frequency (default 1)")
    p.add_argument("--ell", type=float, default=1.0, help="shape-invariance parameter, action units (default 1)")
    p.add_argument("--hbar", type=float, default=1.0, help="quantum of action (default 1)")
    p.add_argument("--n", type=parse_n_range, default=None, help="level or inclusive range A..B")
    p.add_argument("--quad-tol", type=_positive_float, default=1e-11)
    p.add_argument("--root-tol", type=_positive_float, default=1e-13)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--config", default=None, help="key=value file; flags override it")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swkblab", description="SWKB exactness checks for shape-invariant superpotentials")
    subs = parser.add_subparsers(dest="command", required=True)
    common = _common()

    subs.add_parser("verify", parents=[common], help="SWKB integral and deviation per level")

    shape = subs.add_parser("shape-check", parents=[common], help="shape-invariance residual")
    shape.add_argument("--x-min", type=_positive_float, default=None)
    shape.add_argument("--x-max", type=_positive_float, default=None)
    shape.add_argument("--count", type=int, default=400)
    shape.add_argument("--spacing", choices=["log", "linear"], default="log")
    shape.add_argument("--threshold", type=_positive_float, default=1e-9,
                       help="PASS bound on max |residual| in units of hbar*omega")
    shape.add_argument("--mutate", choices=["none", "drop-last-term", "perturb-last-term"],
                       default="none", help=argparse.SUPPRESS)

    scaling = subs.add_parser("scaling-check", parents=[common], help="hbar-independence of I/hbar")
    scaling.add_argument("--ell-tilde", type=_positive_float, default=2.0)
    scaling.add_argument("--hbar-list", type=_float_list, default="0.25,0.5,1,2,4")
    scaling.add_argument("--threshold", type=_positive_float, default=1e-9,
                         help="PASS bound on the relative spread of I/hbar")

    spectrum = subs.add_parser("spectrum", parents=[common], help="shooting eigenvalues of V_-")
    spectrum.add_argument("--x-min", type=float, default=None)
    spectrum.add_argument("--x-max", type=float, default=None)
    spectrum.add_argument("--count", type=int, default=4001)
    spectrum.add_argument("--tol", type=_positive_float, default=1e-5,
                          help="PASS bound on the relative eigenvalue error")

    sweep = subs.add_parser("sweep", parents=[common], help="deviation over an ell grid")
    sweep.add_argument("--ell-list", type=_float_list, default=None)
    sweep.add_argument("--ell-range", nargs=3, metavar=("START", "STOP", "COUNT"), default=None)
    return parser


def _config_file_values(argv: list[str]) -> tuple[str | None, dict]:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return None, {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path!r}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return path, values


def parse_config(argv: list[str]) -> RunConfig:
    parser = build_parser()
    _, file_values = _config_file_values(argv)
    if file_values:
        first, _ = parser.parse_known_args(argv)
        sub = parser._subparsers._group_actions[0].choices[first.command]
        dests = {a.dest for a in sub._actions}
        unknown = sorted(set(file_values) - dests - {"config", "help"})
        if unknown:
            raise ConfigError(f"config: unknown key(s) {', '.join(unknown)}")
        # string defaults go through each option's type converter
        sub.set_defaults(**file_values)
    args = parser.parse_args(argv)

    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    n_range = args.n if args.n is not None else parse_n_range(DEFAULT_N[args.command])
    if isinstance(n_range, str):
        n_range = parse_n_range(n_range)
    extra = {}
    if args.command == "shape-check":
        extra = {"x_min": args.x_min, "x_max": args.x_max, "count": args.count,
                 "spacing": args.spacing, "threshold": args.threshold, "mutate": args.mutate}
    elif args.command == "scaling-check":
        hbars = args.hbar_list if isinstance(args.hbar_list, list) else _float_list(args.hbar_list)
        if not hbars:
            raise ConfigError("--hbar-list must not be empty")
        if any(not (np.isfinite(h) and h > 0) for h in hbars):
            raise ConfigError(f"--hbar-list entries must be > 0, got {hbars}")
        if n_range[0] != n_range[1]:
            raise ConfigError("--n must be a single level for scaling-check")
        extra = {"ell_tilde": args.ell_tilde, "hbar_list": hbars, "threshold": args.threshold}
    elif args.command == "spectrum":
        extra = {"x_min": args.x_min, "x_max": args.x_max, "count": args.count, "tol": args.tol}
    elif args.command == "sweep":
        extra = {"ell_list": _sweep_ells(args)}

    cfg = RunConfig(args.command, args.model, args.omega, args.ell, args.hbar, n_range,
                    args.root_tol, args.quad_tol, args.format, args.output, args.jobs, extra)
    _validate(cfg)
    return cfg


def _sweep_ells(args) -> list[float]:
    if args.ell_list is not None and args.ell_range is not None:
        raise ConfigError("give either --ell-list or --ell-range, not both")
    if args.ell_range is not None:
        try:
            start, stop, count = float(args.ell_range[0]), float(args.ell_range[1]), int(args.ell_range[2])
        except ValueError as exc:
            raise ConfigError(f"--ell-range: {exc}") from exc
        if count < 1:
            raise ConfigError("--ell-range: COUNT must be >= 1")
        ells = np.linspace(start, stop, count).tolist()
    elif args.ell_list is not None:
        ells = args.ell_list if isinstance(args.ell_list, list) else _float_list(args.ell_list)
    else:
        ells = [args.ell]
    if not ells:
        raise ConfigError("--ell-list: empty list of ell values")
    return ells


def _validate(cfg: RunConfig):
    try:
        if cfg.command == "scaling-check":
            PhysParams(cfg.omega, 1.0, 1.0)
            for h in cfg.extra["hbar_list"]:
                SuperpotentialModel(Kind(cfg.model), PhysParams(cfg.omega, h * cfg.extra["ell_tilde"], h))
            if not Kind(cfg.model).is_radial:
                raise ParamError("model: scaling-check needs a radial model")
        elif cfg.command == "sweep":
            for ell in cfg.extra["ell_list"]:
                SuperpotentialModel(Kind(cfg.model), PhysParams(cfg.omega, ell, cfg.hbar))
        else:
            cfg.physical_model()
        if cfg.command == "shape-check" and not Kind(cfg.model).is_radial:
            raise ParamError("model: shape-check needs a radial model")
        if cfg.command in ("shape-check", "spectrum"):
            if cfg.extra["count"] < 2:
                raise ParamError(f"count must be >= 2, got {cfg.extra['count']}")
        cfg.swkb_config()
    except ParamError as exc:
        raise ConfigError(str(exc)) from exc


# --- workers --------------------------------------------------------------


def _map(func, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _verify_row(task) -> dict:
    model_name, omega, ell, hbar, n, root_tol, quad_tol = task
    model = SuperpotentialModel(Kind(model_name), PhysParams(omega, ell, hbar))
    res = swkb_integral(model, n, SwkbConfig(root_tol=root_tol, quad_tol=quad_tol))
    return {
        "model": model_name, "omega": omega, "ell": ell, "hbar": hbar, "n": n,
        "energy": res.energy, "x_left": res.turning.x_left, "x_right": res.turning.x_right,
        "integral": res.integral, "deviation": res.deviation, "quad_error": res.quad_error,
        "scheme_agreement": res.scheme_agreement,
    }


def _spectrum_row(task) -> dict:
    model_name, omega, ell, hbar, n, x_min, x_max, count = task
    model = SuperpotentialModel(Kind(model_name), PhysParams(omega, ell, hbar))
    res = solve_eigenvalue(build_potential(model, x_min, x_max, count), n)
    return {
        "model": model_name, "omega": omega, "ell": ell, "hbar": hbar, "n": n,
        "energy_numeric": res.energy_numeric, "energy_exact": res.energy_exact,
        "abs_error": res.matches, "relative_error": res.relative_error,
        "bisection_width": res.bisection_width, "nodes": res.nodes,
    }


# --- commands -------------------------------------------------------------


def cmd_verify(cfg: RunConfig):
    tasks = [(cfg.model, cfg.omega, cfg.ell, cfg.hbar, n, cfg.root_tol, cfg.quad_tol) for n in cfg.levels]
    rows = _map(_verify_row, tasks, cfg.jobs)
    worst = max(abs(r["deviation"]) for r in rows)
    _diag(f"verify: {len(rows)} level(s), max |deviation| = {worst:.6g}")
    return rows, {"max_abs_deviation": worst}, EXIT_OK


def cmd_shape_check(cfg: RunConfig):
    model = cfg.physical_model()
    mutate = cfg.extra["mutate"]
    if mutate == "drop-last-term":
        model = mutated(model, 3, 0.0)
    elif mutate == "perturb-last-term":
        model = mutated(model, 3, 1.01)
    s = model.params.length_scale
    x_min = cfg.extra["x_min"] if cfg.extra["x_min"] is not None else 1e-2 * s
    x_max = cfg.extra["x_max"] if cfg.extra["x_max"] is not None else 1e2 * s
    try:
        grid = GridSpec(x_min, x_max, cfg.extra["count"], cfg.extra["spacing"])
    except ParamError as exc:
        raise ConfigError(str(exc)) from exc
    rep = shape_invariance_residual(model, grid)
    passed = rep.max_abs_residual_hw <= cfg.extra["threshold"]
    row = {
        "model": cfg.model, "omega": cfg.omega, "ell": cfg.ell, "hbar": cfg.hbar,
        "x_min": x_min, "x_max": x_max, "count": cfg.extra["count"],
        "max_abs_residual": rep.max_abs_residual, "mean_abs_residual": rep.mean_abs_residual,
        "worst_point": rep.worst_point, "max_abs_residual_hw": rep.max_abs_residual_hw,
        "threshold_hw": cfg.extra["threshold"], "status": "PASS" if passed else "FAIL",
    }
    _diag(f"shape-check: max |residual| = {rep.max_abs_residual_hw!r} hbar*omega -> {row['status']}")
    summary = {"max_abs_residual_hw": rep.max_abs_residual_hw, "status": row["status"]}
    return [row], summary, EXIT_OK if passed else EXIT_FAIL


def cmd_scaling_check(cfg: RunConfig):
    n = cfg.n_range[0]
    rep = hbar_scaling_check(cfg.extra["ell_tilde"], n, cfg.extra["hbar_list"], Kind(cfg.model),
                             omega=cfg.omega, config=cfg.swkb_config())
    rows = [{
        "model": cfg.model, "ell_tilde": rep.ell_tilde, "n": n, "omega": cfg.omega,
        "hbar": r.hbar, "ell": r.ell, "integral": r.integral, "integral_over_hbar": r.ratio,
        "scaled_integral": rep.scaled_integral,
    } for r in rep.rows]
    passed = rep.spread <= cfg.extra["threshold"]
    status = "PASS" if passed else "FAIL"
    _diag(f"scaling-check: spread of I/hbar = {rep.spread:.6g}, "
          f"max rel diff to J = {rep.max_rel_diff_scaled:.6g} -> {status}")
    summary = {"spread": rep.spread, "max_rel_diff_scaled": rep.max_rel_diff_scaled, "status": status}
    return rows, summary, EXIT_OK if passed else EXIT_FAIL


def cmd_spectrum(cfg: RunConfig):
    model = cfg.physical_model()
    lo, hi = default_box(model)
    x_min = cfg.extra["x_min"] if cfg.extra["x_min"] is not None else lo
    x_max = cfg.extra["x_max"] if cfg.extra["x_max"] is not None else hi
    try:
        build_potential(model, x_min, x_max, cfg.extra["count"])
    except ParamError as exc:
        raise ConfigError(str(exc)) from exc
    tasks = [(cfg.model, cfg.omega, cfg.ell, cfg.hbar, n, x_min, x_max, cfg.extra["count"])
             for n in cfg.levels]
    rows = _map(_spectrum_row, tasks, cfg.jobs)
    worst = max(r["relative_error"] for r in rows)
    passed = worst <= cfg.extra["tol"]
    status = "PASS" if passed else "FAIL"
    _diag(f"spectrum: max relative error vs 2 n hbar omega = {worst!r} -> {status}")
    return rows, {"max_relative_error": worst, "status": status}, EXIT_OK if passed else EXIT_FAIL


def cmd_sweep(cfg: RunConfig):
    tasks = [(cfg.model, cfg.omega, ell, cfg.hbar, n, cfg.root_tol, cfg.quad_tol)
             for ell in cfg.extra["ell_list"] for n in cfg.levels]
    results = _map(_verify_row, tasks, cfg.jobs)
    rows = [{"ell": r["ell"], "ell_tilde": r["ell"] / r["hbar"], "n": r["n"],
             "deviation": r["deviation"], "quad_error": r["quad_error"]} for r in results]
    worst = max(abs(r["deviation"]) for r in rows)
    _diag(f"sweep: {len(rows)} row(s), max |deviation| = {worst:.6g}")
    return rows, {"max_abs_deviation": worst}, EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "shape-check": cmd_shape_check,
    "scaling-check": cmd_scaling_check,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
}


# --- output ---------------------------------------------------------------


def _plain(value):
    """numpy scalars -> Python scalars so repr/json give bare numbers."""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def render_json(cfg: RunConfig, rows: list[dict], summary: dict) -> str:
    doc = {"config": cfg.as_dict(), "rows": rows, "summary": summary}
    return json.dumps(doc, indent=2) + "\n"


def _diag(message: str):
    print(message, file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        _diag(f"swkblab: configuration error: {exc}")
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        rows, summary, code = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        _diag(f"swkblab: configuration error: {exc}")
        return EXIT_CONFIG
    except SwkbLabError as exc:
        _diag(f"swkblab: computation error ({type(exc).__name__}): {exc}")
        return EXIT_COMPUTE
    rows = [{k: _plain(v) for k, v in row.items()} for row in rows]
    summary = {"max_abs_deviation": summary.pop("max_abs_deviation", None), **summary,
               "runtime_seconds": time.perf_counter() - start}
    summary = {k: _plain(v) for k, v in summary.items()}

    text = render_csv(rows) if cfg.format == "csv" else render_json(cfg, rows, summary)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
