"""Command-line harness: design, certify, simulate, toa, sweep.

Every command echoes its resolved options to config_echo.json beside its
outputs; rerunning a command from that file reproduces the outputs byte for
byte.  Exit codes: 0 success (and certificate passed), 1 failed certificate,
simulation fault or failed quantitative check, 2 usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import certification as cert
from .baselines import METHODS as BASELINE_METHODS
from .baselines import BaselineParams, default_baseline_params, run_baseline
from .oracles import OptimumTrajectory, SectorBounds, make_quadratic
from .toa import Scenario, make_toa_oracle, run_comparison
from .tracker import (
    DELAYED_CURRENT,
    DELAYED_PREVIOUS,
    SimulationFault,
    TrackerParams,
    run,
)
from .output import (
    load_config,
    svg_line_chart,
    write_config_echo,
    write_csv,
    write_errors_csv,
    write_json,
    write_trajectory_csv,
)


def _ensure_outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _bounds(options) -> SectorBounds:
    return SectorBounds(float(options["m"]), float(options["L"]))


# ---------------------------------------------------------------- design


def cmd_design(options: dict, outdir: str | None) -> int:
    design = cert.design_optimal(_bounds(options))
    print(
        f"alpha_star={design.alpha_star:.12g} "
        f"gamma_star={design.gamma_star:.12g} "
        f"rho_star={design.rho_star:.12g}"
    )
    if outdir:
        _ensure_outdir(outdir)
        write_json(os.path.join(outdir, "design.json"), design.to_dict())
        write_config_echo(outdir, "design", options)
    return 0


# ---------------------------------------------------------------- certify


def cmd_certify(options: dict, outdir: str | None) -> int:
    params = TrackerParams(float(options["alpha"]), float(options["gamma"]))
    certificate = cert.certify(
        params,
        _bounds(options),
        rate_grid=int(options.get("rate_grid", 2001)),
        spr_grid=int(options.get("spr_grid", 1024)),
    )
    payload = certificate.to_dict()
    print(json.dumps({k: v if np.isfinite(v) or isinstance(v, bool) else None
                      for k, v in payload.items()}, indent=2, sort_keys=True))
    if outdir:
        _ensure_outdir(outdir)
        write_json(os.path.join(outdir, "certificate.json"), payload)
        write_config_echo(outdir, "certify", options)
    return 0 if certificate.globally_convergent else 1


# ---------------------------------------------------------------- simulate


def _simulate_oracle(options: dict):
    kind = options["oracle"]
    if kind == "quadratic":
        eigs = np.asarray(options["eigenvalues"], dtype=float)
        traj = OptimumTrajectory(
            np.asarray(options["x_star0"], dtype=float),
            np.asarray(options["velocity"], dtype=float),
        )
        declared = None
        if options.get("m") is not None and options.get("L") is not None:
            declared = _bounds(options)
        return make_quadratic(eigs, traj, declared_bounds=declared)
    if kind == "toa":
        return make_toa_oracle(Scenario.from_config(options["scenario"]))
    raise ValueError(f"unknown oracle kind {kind!r}")


def cmd_simulate(options: dict, outdir: str | None) -> int:
    if not outdir:
        raise ValueError("simulate requires --out")
    oracle = _simulate_oracle(options)
    method = options["method"]
    T = int(options["T"])
    x0 = np.asarray(options["x0"], dtype=float)
    x1 = options.get("x1")
    x1 = None if x1 is None else np.asarray(x1, dtype=float)

    if method == "tracker":
        if options.get("alpha") is None or options.get("gamma") is None:
            design = cert.design_optimal(oracle.bounds)
            params = design.params()
            options = {**options, "alpha": params.alpha, "gamma": params.gamma}
        params = TrackerParams(float(options["alpha"]), float(options["gamma"]))
        runner = lambda: run(
            oracle,
            params,
            x0,
            x1,
            T,
            engine=options.get("engine", "recursion"),
            delayed_gradient_time=options.get(
                "delayed_gradient_time", DELAYED_PREVIOUS
            ),
        )
    elif method in BASELINE_METHODS:
        coeffs = options.get("coefficients")
        if coeffs is None:
            bp = default_baseline_params(method, oracle.bounds)
            options = {**options, "coefficients": bp.coefficients}
        else:
            bp = BaselineParams(method=method, coefficients=dict(coeffs))
        runner = lambda: run_baseline(oracle, method, x0, T, bp)
    else:
        raise ValueError(f"unknown method {method!r}")

    _ensure_outdir(outdir)
    write_config_echo(outdir, "simulate", options)
    csv_path = os.path.join(outdir, "trajectory.csv")
    try:
        traj = runner()
    except SimulationFault as fault:
        if fault.partial is not None:
            write_trajectory_csv(
                csv_path, fault.partial, None if method == "tracker" else method
            )
        print(f"simulation fault: {fault}", file=sys.stderr)
        return 1
    write_trajectory_csv(csv_path, traj, None if method == "tracker" else method)
    if options.get("svg"):
        svg_line_chart(
            os.path.join(outdir, "error.svg"),
            np.arange(traj.errors.size),
            {method: traj.errors},
            ylabel="tracking error",
            ylog=True,
        )
    print(f"final error {traj.final_error:.6e} after {T} steps -> {csv_path}")
    return 0


# ---------------------------------------------------------------- toa


def cmd_toa(options: dict, outdir: str | None) -> int:
    if not outdir:
        raise ValueError("toa requires --out")
    scenario = Scenario.from_config(options["scenario"])
    result = run_comparison(
        scenario,
        methods=tuple(options["methods"]),
        T=options.get("T"),
        x_init=np.asarray(options["x_init"], dtype=float),
    )
    _ensure_outdir(outdir)
    write_config_echo(outdir, "toa", options)
    write_json(os.path.join(outdir, "design.json"), result.design.to_dict())
    for method, traj in result.trajectories.items():
        write_trajectory_csv(
            os.path.join(outdir, f"toa_{method}.csv"), traj, method
        )
    write_errors_csv(os.path.join(outdir, "errors.csv"), result.trajectories)
    if options.get("svg", True):
        some = next(iter(result.trajectories.values()))
        ts = np.arange(some.optima.shape[0])
        for comp in range(scenario.dimension):
            series = {"true": some.optima[:, comp]}
            for method, traj in result.trajectories.items():
                series[method] = traj.iterates[:, comp]
            svg_line_chart(
                os.path.join(outdir, f"position_x{comp + 1}.svg"),
                ts,
                series,
                ylabel=f"x_{comp + 1}",
            )
        svg_line_chart(
            os.path.join(outdir, "error.svg"),
            ts,
            {m: tr.errors for m, tr in result.trajectories.items()},
            ylabel="tracking error",
            ylog=True,
        )
    for method, traj in result.trajectories.items():
        print(f"{method}: final error {traj.final_error:.6e}")
    for method, message in result.faults.items():
        print(f"{method}: FAULT {message}", file=sys.stderr)
    return 1 if result.faults else 0


# ---------------------------------------------------------------- sweep


def cmd_sweep(options: dict, outdir: str | None) -> int:
    if not outdir:
        raise ValueError("sweep requires --out")
    kind = options["kind"]
    grid = int(options["grid"])
    _ensure_outdir(outdir)
    write_config_echo(outdir, "sweep", options)
    csv_path = os.path.join(outdir, f"sweep_{kind}.csv")

    if kind == "kappa":
        rhos = np.linspace(float(options["rho_min"]), float(options["rho_max"]), grid)
        write_csv(
            csv_path,
            ["rho", "kappa_max"],
            ([r, cert.kappa_max(float(r))] for r in rhos),
        )
        print(f"wrote {csv_path}")
        return 0

    bounds = _bounds(options)
    if options.get("alpha") is None or options.get("gamma") is None:
        params = cert.design_optimal(bounds).params()
        options = {**options, "alpha": params.alpha, "gamma": params.gamma}
    params = TrackerParams(float(options["alpha"]), float(options["gamma"]))

    if kind == "rate":
        lams = np.linspace(bounds.m, bounds.L, grid)
        write_csv(
            csv_path,
            ["lam", "radius"],
            (
                [lam, cert.spectral_radius(cert.char_poly(params, float(lam)))]
                for lam in lams
            ),
        )
    elif kind == "spr":
        omegas = np.linspace(0.0, np.pi, grid)
        values = [cert.h0_eval(params, bounds, float(w)) for w in omegas]
        write_csv(
            csv_path,
            ["omega", "re_h0", "im_h0"],
            ([w, v.real, v.imag] for w, v in zip(omegas, values)),
        )
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    print(f"wrote {csv_path}")
    return 0


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramptrack",
        description="Design, certify and simulate the drift-tracking recursion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="rate-optimal parameters for a sector")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("certify", help="circle-criterion certificate")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--rate-grid", type=int, default=2001)
    p.add_argument("--spr-grid", type=int, default=1024)
    p.add_argument("--out", default=None)

    p = sub.add_parser("simulate", help="run one method on one oracle")
    p.add_argument("--config", default=None, help="rerun from a config echo")
    p.add_argument("--oracle", choices=["quadratic", "toa"], default="quadratic")
    p.add_argument("--eigenvalues", type=float, nargs="+", default=[0.1, 6.0])
    p.add_argument("--x-star0", type=float, nargs="+", default=None)
    p.add_argument("--velocity", type=float, nargs="+", default=None)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--scenario", default=None, help="scenario JSON file (toa oracle)")
    p.add_argument(
        "--method",
        choices=["tracker", *BASELINE_METHODS],
        default="tracker",
    )
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--x0", type=float, nargs="+", default=None)
    p.add_argument("--x1", type=float, nargs="+", default=None)
    p.add_argument("--T", type=int, default=1000)
    p.add_argument("--engine", choices=["recursion", "lure"], default="recursion")
    p.add_argument(
        "--delayed-gradient-time",
        choices=[DELAYED_PREVIOUS, DELAYED_CURRENT],
        default=DELAYED_PREVIOUS,
    )
    p.add_argument("--svg", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("toa", help="moving-source localization comparison")
    p.add_argument("--config", default=None, help="rerun from a config echo")
    p.add_argument("--scenario", default=None, help="scenario JSON file")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--x-init", type=float, nargs=2, default=[-8.0, -10.0])
    p.add_argument("--velocity", type=float, nargs="+", default=None)
    p.add_argument("--noise", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--methods",
        nargs="+",
        choices=["tracker", *BASELINE_METHODS],
        default=["tracker", "gd", "tmm"],
    )
    p.add_argument("--no-svg", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("sweep", help="tabulate rate, kappa_max or SPR curves")
    p.add_argument("--config", default=None, help="rerun from a config echo")
    p.add_argument("--kind", choices=["rate", "kappa", "spr"], default=None)
    p.add_argument("--m", type=float, default=0.1)
    p.add_argument("--L", type=float, default=6.0)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--rho-min", type=float, default=0.05)
    p.add_argument("--rho-max", type=float, default=0.99)
    p.add_argument("--out", default=None)

    return parser


def _resolve_options(args: argparse.Namespace) -> dict:
    """Turn parsed flags into the JSON-safe options dict that gets echoed."""
    cmd = args.command
    if cmd == "design":
        return {"m": args.m, "L": args.L}
    if cmd == "certify":
        return {
            "alpha": args.alpha,
            "gamma": args.gamma,
            "m": args.m,
            "L": args.L,
            "rate_grid": args.rate_grid,
            "spr_grid": args.spr_grid,
        }
    if cmd == "simulate":
        if args.config:
            loaded_cmd, options = load_config(args.config)
            if loaded_cmd != "simulate":
                raise ValueError(f"config is for {loaded_cmd!r}, not simulate")
            return options
        options = {
            "oracle": args.oracle,
            "method": args.method,
            "alpha": args.alpha,
            "gamma": args.gamma,
            "coefficients": None,
            "T": args.T,
            "engine": args.engine,
            "delayed_gradient_time": args.delayed_gradient_time,
            "svg": bool(args.svg),
        }
        if args.oracle == "quadratic":
            n = len(args.eigenvalues)
            options["eigenvalues"] = list(args.eigenvalues)
            options["x_star0"] = list(args.x_star0 or [0.0] * n)
            options["velocity"] = list(args.velocity or [0.0] * n)
            options["m"] = args.m
            options["L"] = args.L
            options["x0"] = list(args.x0 or [1.0] * n)
        else:
            scenario = (
                Scenario.from_config(_read_json(args.scenario))
                if args.scenario
                else Scenario()
            )
            options["scenario"] = scenario.to_config()
            options["x0"] = list(args.x0 or [-8.0, -10.0])
        options["x1"] = list(args.x1) if args.x1 else None
        return options
    if cmd == "toa":
        if args.config:
            loaded_cmd, options = load_config(args.config)
            if loaded_cmd != "toa":
                raise ValueError(f"config is for {loaded_cmd!r}, not toa")
            return options
        scenario = (
            Scenario.from_config(_read_json(args.scenario))
            if args.scenario
            else Scenario()
        )
        cfg = scenario.to_config()
        if args.velocity is not None:
            cfg["velocity"] = list(args.velocity)
        if args.noise is not None:
            cfg["noise_std"] = args.noise
        if args.seed is not None:
            cfg["seed"] = args.seed
        return {
            "scenario": cfg,
            "T": args.T,
            "x_init": list(args.x_init),
            "methods": list(args.methods),
            "svg": not args.no_svg,
        }
    if cmd == "sweep":
        if args.config:
            loaded_cmd, options = load_config(args.config)
            if loaded_cmd != "sweep":
                raise ValueError(f"config is for {loaded_cmd!r}, not sweep")
            return options
        if args.kind is None:
            raise ValueError("sweep requires --kind (or --config)")
        return {
            "kind": args.kind,
            "m": args.m,
            "L": args.L,
            "alpha": args.alpha,
            "gamma": args.gamma,
            "grid": args.grid,
            "rho_min": args.rho_min,
            "rho_max": args.rho_max,
        }
    raise ValueError(f"unknown command {cmd!r}")


def _read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


_EXECUTORS = {
    "design": cmd_design,
    "certify": cmd_certify,
    "simulate": cmd_simulate,
    "toa": cmd_toa,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        options = _resolve_options(args)
        return _EXECUTORS[args.command](options, args.out)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        # singular evaluation (e.g. an iterate landing on a sensor)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
