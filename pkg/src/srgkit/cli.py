"""Command-line front door: analyze, design, simulate, nyquist, serve.

Exit codes: 0 on success (certified / feasible / bounded), 1 on an
analytic negative (not certified, infeasible, diverged), 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import certify, tau_sweep_check
from .design import find_max_abs_kr, find_min_kp
from .lti import DEFAULT_SAMPLES, TransferFunction, get_plant_srg
from .reset_system import controller_sg_bound, make_sore
from .simulator import LureLoop, Signal, SimulationDiverged, simulate_closed_loop

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


class InputError(ValueError):
    pass


def _load_plant(path):
    p = Path(path)
    if not p.exists():
        raise InputError(f"plant file not found: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"plant file is not valid JSON: {exc}") from exc
    try:
        return TransferFunction.from_dict(doc)
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid plant coefficients: {exc}") from exc


def _merge_config(args):
    """Config file supplies defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    try:
        doc = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config file: {exc}") from exc
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in args._explicit:
            setattr(args, attr, value)
    return args


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2))


def cmd_analyze(args):
    G = _load_plant(args.plant)
    if args.alpha <= 0:
        raise InputError("alpha must be positive")
    srg = get_plant_srg(G, args.omega_max, args.samples)
    bound = controller_sg_bound(args.kp, args.kr)
    report = certify(srg, bound)
    out = _outdir(args)
    doc = report.to_dict()
    doc["plant"] = G.to_dict()
    doc["kp"], doc["kr"], doc["alpha"] = args.kp, args.kr, args.alpha
    doc["n_p"] = srg.n_p
    if args.gamma_hat is not None:
        if args.gamma_hat <= 0:
            raise InputError("gamma-hat must be positive")
        doc["meets_target"] = bool(
            report.certified and report.separation >= 1.0 / args.gamma_hat
        )
    if args.tau_sweep:
        doc["tau_sweep_ok"] = tau_sweep_check(srg, bound)
    _write_json(out / "report.json", doc)
    _write_json(out / "regions.json", report.artifacts)
    print(
        f"separation r = {report.separation:.6g}, gain bound = {report.gain_bound:.6g}, "
        f"certified = {report.certified}"
    )
    return EXIT_OK if report.certified else EXIT_NEGATIVE


def cmd_design(args):
    G = _load_plant(args.plant)
    if args.gamma_hat is None or args.gamma_hat <= 0:
        raise InputError("design needs --gamma-hat > 0")
    if args.mode == "min-kp":
        report = find_min_kp(
            G, args.kr, args.gamma_hat, kp_range=(args.kp_min, args.kp_max),
            omega_max=args.omega_max, samples=args.samples,
        )
    else:
        report = find_max_abs_kr(
            G, args.kp, args.gamma_hat, kr_range=(args.kr_min, args.kr_max),
            omega_max=args.omega_max, samples=args.samples,
        )
    out = _outdir(args)
    _write_json(out / "report.json", report.to_dict())
    _write_json(out / "regions.json", report.plot_payload)
    if report.feasible:
        print(
            f"feasible: kp = {report.kp:.6g}, kr = {report.kr:.6g}, "
            f"separation = {report.separation:.6g}"
        )
        return EXIT_OK
    print("infeasible over the requested range")
    return EXIT_NEGATIVE


def cmd_simulate(args):
    G = _load_plant(args.plant)
    if args.horizon <= 0:
        raise InputError("horizon must be positive")
    reference = Signal.step(1.0, 0.0)
    element = make_sore(args.alpha)
    out = _outdir(args)
    code = EXIT_OK
    for variant, fname in (("reset", "trajectory.csv"), ("lti", "trajectory_lti.csv")):
        loop = LureLoop(plant=G, kp=args.kp, kr=args.kr, reference=reference,
                        element=element, variant=variant)
        try:
            traj = simulate_closed_loop(loop, args.horizon, args.dt_max)
            (out / fname).write_text(traj.to_csv())
            print(f"{variant}: bounded over [0, {args.horizon}] s, "
                  f"{len(traj.jumps)} jumps -> {fname}")
        except SimulationDiverged as exc:
            if exc.trajectory is not None:
                (out / fname).write_text(exc.trajectory.to_csv())
            print(f"{variant}: DIVERGED ({exc}) -> {fname}")
            code = EXIT_NEGATIVE
    return code


def cmd_nyquist(args):
    G = _load_plant(args.plant)
    srg = get_plant_srg(G, args.omega_max, args.samples)
    ext = srg.extended()
    out = _outdir(args)
    doc = {
        "n_p": srg.n_p,
        "nyquist": srg.contour.to_dict(),
        "hull": ext.hull.to_dict(),
        "encircled": ext.encircled.to_dict(),
        "inverted": srg.inverted_region().to_dict(),
    }
    _write_json(out / "regions.json", doc)
    print(f"n_p = {srg.n_p}, contour samples = {len(srg.contour)} -> regions.json")
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app()
    uvicorn.run(app, host="127.0.0.1", port=args.serve_port, log_level="warning")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="srgkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, plant=True):
        if plant:
            sp.add_argument("--plant", required=True, help="plant coefficient JSON file")
        sp.add_argument("--config", help="JSON config file; flags win over it")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--omega-max", dest="omega_max", type=float, default=None)
        sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        sp.add_argument("--alpha", type=float, default=0.9)
        sp.add_argument("--kp", type=float, default=0.0)
        sp.add_argument("--kr", type=float, default=1.0)

    sp = sub.add_parser("analyze", help="separation certificate for a plant/controller pair")
    common(sp)
    sp.add_argument("--gamma-hat", dest="gamma_hat", type=float, default=None)
    sp.add_argument("--tau-sweep", dest="tau_sweep", action="store_true")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("design", help="search controller gains for a target gain bound")
    common(sp)
    sp.add_argument("--gamma-hat", dest="gamma_hat", type=float, required=True)
    sp.add_argument("--mode", choices=["min-kp", "max-kr"], default="min-kp")
    sp.add_argument("--kp-min", type=float, default=0.0)
    sp.add_argument("--kp-max", type=float, default=10.0)
    sp.add_argument("--kr-min", type=float, default=-5.0)
    sp.add_argument("--kr-max", type=float, default=5.0)
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("simulate", help="closed-loop step response, reset and LTI variants")
    common(sp)
    sp.add_argument("--horizon", type=float, default=30.0)
    sp.add_argument("--dt-max", dest="dt_max", type=float, default=1e-3)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("nyquist", help="export contour, hull, encircled and inverted regions")
    common(sp)
    sp.set_defaults(func=cmd_nyquist)

    sp = sub.add_parser("serve", help="run the local analysis service")
    common(sp, plant=False)
    sp.add_argument("--serve-port", dest="serve_port", type=int, default=8787)
    sp.set_defaults(func=cmd_serve)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        args._explicit = {
            a.lstrip("-").replace("-", "_").split("=")[0]
            for a in (argv if argv is not None else sys.argv[1:])
            if a.startswith("--")
        }
        args = _merge_config(args)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
