"""Command-line entry point: ``dgw <subcommand> ...``.

Every command prints a JSON document to stdout (or writes it to ``--out``
when the command's main product is JSON) that includes the package version
and the effective configuration. Exit codes: 0 ok, 2 input error,
3 stability error, 4 solver/numeric failure.
"""

from __future__ import annotations

import argparse
import copy
import logging
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import io as dio
from .errors import (DGWError, NoEventError, NumericError, ParameterError, StabilityError)
from .frame import build_frame, scale_grid
from .graph_core import build_knn_graph, is_connected
from .kernels import corollary_lower_bound, truncation_tolerance
from .localization import estimate_epicenter, localization_error_km
from .simulator import EventSpec, add_noise, synth_event
from .solver import SolverConfig, fista, gamma_max

log = logging.getLogger("dgw")

EXIT_OK, EXIT_INPUT, EXIT_STABILITY, EXIT_SOLVER = 0, 2, 3, 4

DEFAULT_CONFIG = {
    "graph": {"k": 5, "sigma": "auto"},
    "frame": {"scales": None, "num_scales": 10, "s_min": None, "s_max": 2.0, "beta": 0.1,
              "n_steps": 64},
    "solver": {"gamma": None, "gamma_rel": 0.1, "epsilon": 1e-6, "max_iters": 100,
               "delta": 1e-12},
    "localization": {"rho": 0.5},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if key not in out:
            raise ParameterError(f"unknown config key {key!r}")
        if isinstance(out[key], dict):
            if not isinstance(val, dict):
                raise ParameterError(f"config section {key!r} must be an object")
            for sub in val:
                if sub not in out[key]:
                    raise ParameterError(f"unknown config key {key}.{sub}")
            out[key].update(val)
        else:
            out[key] = val
    return out


def load_config(path: Optional[str]) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    return _merge(DEFAULT_CONFIG, dio.read_json(path))


def _provenance(cfg: dict, args) -> dict:
    return {"version": __version__, "seed": args.seed, "config": cfg}


def _emit(doc: dict, out: Optional[str]) -> None:
    text = dio.dumps_json(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _frame_for(graph, n_steps: int, cfg: dict):
    f = cfg["frame"]
    if f["scales"] is not None:
        return build_frame(graph.basis, n_steps, [float(s) for s in f["scales"]], float(f["beta"]))
    scales = scale_grid(int(f["num_scales"]), float(f["s_max"]), graph.basis.lambda_max,
                        s_min=f["s_min"])
    return build_frame(graph.basis, n_steps, scales, float(f["beta"]))


def _load_problem(args, cfg):
    graph = dio.read_graph_json(args.graph)
    y = dio.read_signal(args.signal)
    if y.shape[0] != graph.n_vertices:
        raise ParameterError(
            f"signal has {y.shape[0]} rows but the graph has {graph.n_vertices} vertices")
    return graph, y, _frame_for(graph, y.shape[1], cfg)


def _solve(frame, y, cfg):
    s = cfg["solver"]
    gamma = s["gamma"]
    if gamma is None:
        gamma = float(s["gamma_rel"]) * gamma_max(frame, y)
        if gamma == 0:
            # an all-zero signal; any positive weight returns C = 0
            gamma = 1.0
    sc = SolverConfig(gamma=float(gamma), max_iters=int(s["max_iters"]),
                      epsilon=float(s["epsilon"]), delta=float(s["delta"]))
    return fista(frame, y, sc), sc


def cmd_build_graph(args, cfg) -> int:
    if args.k is not None:
        cfg["graph"]["k"] = args.k
    if args.sigma is not None:
        cfg["graph"]["sigma"] = args.sigma if args.sigma == "auto" else float(args.sigma)
    stations = dio.read_stations_csv(args.stations)
    g = build_knn_graph(stations, int(cfg["graph"]["k"]), cfg["graph"]["sigma"])
    basis = g.basis
    doc = dio.graph_to_dict(g)
    doc["spectrum"] = {"lambda_max": basis.lambda_max, "n_zero_modes": basis.n_zero_modes(),
                       "connected": is_connected(g)}
    doc.update(_provenance(cfg, args))
    _emit(doc, args.out)
    return EXIT_OK


def cmd_frame_bounds(args, cfg) -> int:
    if args.steps is not None:
        cfg["frame"]["n_steps"] = args.steps
    if args.beta is not None:
        cfg["frame"]["beta"] = args.beta
    graph = dio.read_graph_json(args.graph)
    n_steps = int(cfg["frame"]["n_steps"])
    frame = _frame_for(graph, n_steps, cfg)
    b = frame.bounds()
    lower = corollary_lower_bound(frame.beta)
    tol = truncation_tolerance(frame.beta, n_steps)
    ok = b.A >= lower - tol - 1e-12 * b.B
    doc = {"A": b.A, "B": b.B, "corollary_lower_bound": lower, "truncation_tolerance": tol,
           "corollary_check": bool(ok), "scales": [float(s) for s in frame.scales],
           "beta": frame.beta, "n_steps": n_steps}
    doc.update(_provenance(cfg, args))
    _emit(doc, args.out)
    if not ok:
        raise NumericError(f"lower frame bound {b.A:.6g} is below the guaranteed {lower:.6g}")
    return EXIT_OK


def cmd_synth(args, cfg) -> int:
    if args.steps is not None:
        cfg["frame"]["n_steps"] = args.steps
    graph = dio.read_graph_json(args.graph)
    ev = dio.read_json(args.event)
    if not isinstance(ev, dict):
        raise ParameterError("event spec must be a JSON object")
    ev.setdefault("beta", cfg["frame"]["beta"])
    try:
        spec = EventSpec.from_dict(ev)
    except TypeError as exc:
        raise ParameterError(f"malformed event spec: {exc}") from None
    x = synth_event(graph, spec, int(cfg["frame"]["n_steps"]))
    if args.snr is not None:
        x = add_noise(x, args.snr, args.seed)
    if not args.out:
        raise ParameterError("synth needs --out for the signal file")
    dio.write_signal(args.out, x)
    doc = {"signal": str(args.out), "shape": list(x.shape),
           "event": {"m": spec.m, "tau": spec.tau, "s": spec.s, "amplitude": spec.amplitude,
                     "beta": spec.beta, "method": spec.method},
           "snr_db": args.snr}
    doc.update(_provenance(cfg, args))
    _emit(doc, None)
    return EXIT_OK


def cmd_analyze(args, cfg) -> int:
    graph, y, frame = _load_problem(args, cfg)
    c = frame.analyze(y)
    doc = dio.frame_metadata(frame)
    if args.out:
        doc["entries_written"] = dio.write_coefficients_csv(args.out, c, args.threshold)
        doc["coefficients"] = str(args.out)
    if args.energies:
        _write_energies(args.energies, c)
    doc.update(_provenance(cfg, args))
    _emit(doc, None)
    return EXIT_OK


def _write_energies(path, c) -> None:
    energy = np.sum(c * c, axis=(0, 2))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("vertex,energy\n")
        for v, e in enumerate(energy):
            fh.write(f"{v},{dio._fmt_float(float(e))}\n")


def _parse_truth(text: str):
    try:
        lat, lon = (float(v) for v in text.split(","))
    except ValueError:
        raise ParameterError(f"--truth expects 'lat,lon', got {text!r}") from None
    return lat, lon


def cmd_localize(args, cfg) -> int:
    graph, y, frame = _load_problem(args, cfg)
    if graph.stations is None:
        raise ParameterError("graph JSON carries no station coordinates")
    truth = _parse_truth(args.truth) if args.truth else None
    res, sc = _solve(frame, y, cfg)
    est = estimate_epicenter(res.coefficients, graph.stations,
                             float(cfg["localization"]["rho"]), frame.scales)
    doc = {"est_lat": est.est_lat, "est_lon": est.est_lon, "onset_tau": est.onset_tau,
           "dominant_scale": est.dominant_scale, "amplitude": est.amplitude,
           "dominant_vertex": est.dominant_vertex,
           "contributors": [{"vertex": v, "weight": w} for v, w in est.contributors]}
    if truth is not None:
        doc["error_km"] = localization_error_km(est, truth)
    doc["gamma"] = sc.gamma
    doc["solver"] = res.diagnostics()
    doc.update(_provenance(cfg, args))
    _emit(doc, args.out)
    return EXIT_OK


def cmd_denoise(args, cfg) -> int:
    graph, y, frame = _load_problem(args, cfg)
    if not args.out:
        raise ParameterError("denoise needs --out for the signal file")
    res, sc = _solve(frame, y, cfg)
    dio.write_signal(args.out, frame.synthesize(res.coefficients))
    doc = {"signal": str(args.out), "gamma": sc.gamma, "solver": res.diagnostics()}
    doc.update(_provenance(cfg, args))
    _emit(doc, None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path")

    p = argparse.ArgumentParser(prog="dgw", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dgw {__version__}")
    p.add_argument("--config", default=None, help="JSON run configuration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("build-graph", parents=[common], help="k-NN graph from a station CSV")
    q.add_argument("stations")
    q.add_argument("--k", type=int)
    q.add_argument("--sigma", help="kernel width in km, or 'auto'")
    q.set_defaults(func=cmd_build_graph)

    q = sub.add_parser("frame-bounds", parents=[common], help="frame bounds A, B")
    q.add_argument("graph")
    q.add_argument("--steps", type=int, help="number of time steps T")
    q.add_argument("--beta", type=float)
    q.set_defaults(func=cmd_frame_bounds)

    q = sub.add_parser("synth", parents=[common], help="render an event spec to a signal file")
    q.add_argument("graph")
    q.add_argument("event")
    q.add_argument("--steps", type=int)
    q.add_argument("--snr", type=float, help="add white noise at this per-row SNR (dB)")
    q.set_defaults(func=cmd_synth)

    q = sub.add_parser("analyze", parents=[common], help="DGW analysis coefficients")
    q.add_argument("graph")
    q.add_argument("signal")
    q.add_argument("--threshold", type=float, default=1e-12)
    q.add_argument("--energies", help="CSV of per-vertex coefficient energy")
    q.set_defaults(func=cmd_analyze)

    for name, func, helptext in (("localize", cmd_localize, "sparse coding + epicenter estimate"),
                                 ("denoise", cmd_denoise, "sparse coding + resynthesis")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("graph")
        q.add_argument("signal")
        if name == "localize":
            q.add_argument("--truth", help="true epicenter 'lat,lon' for error_km")
        q.set_defaults(func=func)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            return _dispatch(args)
        finally:
            for w in caught:
                print(f"dgw: warning: {w.message}", file=sys.stderr)


def _dispatch(args) -> int:
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except StabilityError as exc:
        print(f"dgw: stability error: {exc}", file=sys.stderr)
        return EXIT_STABILITY
    except NoEventError as exc:
        print(f"dgw: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ParameterError, OSError) as exc:
        print(f"dgw: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, DGWError) as exc:
        print(f"dgw: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
