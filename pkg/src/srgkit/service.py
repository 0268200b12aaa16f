"""Local request/response API for the interactive design studio.

A session caches the expensive plant geometry once; slider evaluations
recompute only the affine controller region and its separation distance.
Endpoints: /plant, /evaluate, /simulate, /design.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .analysis import certify
from .complex_sets import scale_region
from .design import find_max_abs_kr, find_min_kp
from .lti import DEFAULT_SAMPLES, PlantSrg, TransferFunction
from .reset_system import controller_sg_bound, make_sore
from .simulator import LureLoop, Signal, SimulationDiverged, simulate_closed_loop

MAX_HORIZON = 120.0
MAX_TRAJECTORY_POINTS = 5000


class SessionModel:
    def __init__(self, plant, srg):
        self.plant = plant
        self.srg = srg
        self.last_report = None
        self.sim_lock = threading.Lock()


def _error(message, status=400):
    return JSONResponse({"error": message}, status_code=status)


def _decimated_region(region, per_loop=1200):
    """Region document with each loop thinned for transport."""
    boundary, lens = [], []
    for loop in region.loops:
        stride = max(len(loop) // per_loop, 1)
        pts = loop[::stride]
        boundary.extend([float(z.real), float(z.imag)] for z in pts)
        lens.append(len(pts))
    return {
        "kind": "sampled",
        "boundary": boundary,
        "loops": lens,
        "unbounded": region.unbounded,
    }


def create_app(static_dir=None):
    app = FastAPI(title="srgkit service")
    sessions = {}

    try:  # the browser studio runs on its own dev port
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )
    except ImportError:
        pass

    def get_session(body):
        sid = body.get("session")
        model = sessions.get(sid)
        if model is None:
            return None, _error(f"unknown session {sid!r}", status=404)
        return model, None

    @app.post("/plant")
    async def load_plant(body: dict):
        try:
            plant = TransferFunction.from_dict(body)
        except ValueError as exc:
            return _error(str(exc))
        omega_max = body.get("omega_max")
        samples = int(body.get("samples", DEFAULT_SAMPLES))
        try:
            srg = PlantSrg(plant, omega_max, samples)
        except Exception as exc:  # pole on the grid, degenerate plant, ...
            return _error(f"could not build plant geometry: {exc}")
        sid = uuid.uuid4().hex[:12]
        # atomic swap: the session appears fully built or not at all
        sessions[sid] = SessionModel(plant, srg)
        nyq = srg.contour.samples[:: max(len(srg.contour) // 2000, 1)]
        return {
            "session": sid,
            "n_p": srg.n_p,
            "nyquist": [[float(z.real), float(z.imag)] for z in nyq],
            "inverted": _decimated_region(srg.inverted_region()),
        }

    @app.post("/evaluate")
    async def evaluate_controller(body: dict):
        model, err = get_session(body)
        if err:
            return err
        try:
            kp = float(body["kp"])
            kr = float(body["kr"])
            gamma_hat = float(body.get("gamma_hat", 1.0))
        except (KeyError, TypeError, ValueError):
            return _error("body must carry numeric kp, kr and optional gamma_hat")
        if gamma_hat <= 0:
            return _error("gamma_hat must be positive")
        bound = controller_sg_bound(kp, kr)
        report = certify(model.srg, bound, with_artifacts=False)
        model.last_report = report
        region = scale_region(bound.shape, -1.0).to_dict(samples=512)
        gain_bound = report.gain_bound if report.separation > 0 else None
        return {
            "separation": report.separation,
            "gain_bound": gain_bound,
            "certified": report.certified,
            "meets_target": bool(
                report.certified and report.separation >= 1.0 / gamma_hat
            ),
            "kappa": [report.kappa.real, report.kappa.imag],
            "controller_region": region,
        }

    @app.post("/simulate")
    async def simulate(body: dict):
        model, err = get_session(body)
        if err:
            return err
        try:
            kp = float(body["kp"])
            kr = float(body["kr"])
            horizon = float(body.get("horizon", 30.0))
            variant = body.get("variant", "reset")
        except (KeyError, TypeError, ValueError):
            return _error("body must carry numeric kp, kr, horizon, variant")
        if not 0.0 < horizon <= MAX_HORIZON:
            return _error(f"horizon must lie in (0, {MAX_HORIZON:g}] s")
        if variant not in ("reset", "lti"):
            return _error("variant must be 'reset' or 'lti'")
        loop = LureLoop(
            plant=model.plant,
            kp=kp,
            kr=kr,
            reference=Signal.step(1.0, 0.0),
            element=make_sore(float(body.get("alpha", 0.9))),
            variant=variant,
        )
        with model.sim_lock:  # one simulation per session at a time
            try:
                traj = simulate_closed_loop(loop, horizon)
                return traj.to_dict(max_points=MAX_TRAJECTORY_POINTS)
            except SimulationDiverged as exc:
                doc = (
                    exc.trajectory.to_dict(max_points=MAX_TRAJECTORY_POINTS)
                    if exc.trajectory
                    else {"times": [], "y": [], "e": [], "jumps": []}
                )
                doc["diverged"] = True
                doc["diagnosis"] = str(exc)
                return doc

    @app.post("/design")
    async def design(body: dict):
        model, err = get_session(body)
        if err:
            return err
        try:
            gamma_hat = float(body["gamma_hat"])
            mode = body.get("mode", "min-kp")
        except (KeyError, TypeError, ValueError):
            return _error("body must carry gamma_hat and mode")
        if gamma_hat <= 0:
            return _error("gamma_hat must be positive")
        if mode == "min-kp":
            rng = body.get("kp_range", [0.0, 10.0])
            report = find_min_kp(model.plant, float(body.get("kr", 1.0)), gamma_hat,
                                 kp_range=tuple(rng))
        elif mode == "max-kr":
            rng = body.get("kr_range", [-5.0, 5.0])
            report = find_max_abs_kr(model.plant, float(body.get("kp", 0.0)), gamma_hat,
                                     kr_range=tuple(rng))
        else:
            return _error("mode must be 'min-kp' or 'max-kr'")
        return report.to_dict()

    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = candidate if candidate.is_dir() else None
    if static_dir:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="studio")
    return app
