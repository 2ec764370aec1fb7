"""Command line interface.

Every subcommand is deterministic for a fixed seed: rerunning with the same
arguments produces byte-identical output files. The default seed comes from
the SIMPLEXFIT_SEED environment variable (0 when unset); --stamp opts into a
wall-clock timestamp in JSON provenance, off by default to keep reruns
diffable.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bodies import body_from_spec, simplex_volume
from .centered import CenterPolicy, run_trials
from .enclosing import enclose
from .harness import (
    Polygon2D,
    min_enclosing_triangle,
    reference_ball,
    reference_cube,
    sweep,
)
from .isotropy import isotropic_transform
from .kernels import BACKEND
from .report import FLOAT_FMT, format_float, write_csv_table
from .sampling import SamplerHandle

SEED_ENV = "SIMPLEXFIT_SEED"


def _env_seed():
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        raise SystemExit("%s must be an integer" % SEED_ENV)


def _load_body(path):
    with open(path, "r", encoding="utf-8") as fh:
        return body_from_spec(json.load(fh))


def _parse_dims(text):
    dims = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            dims.extend(range(int(lo), int(hi) + 1))
        elif part:
            dims.append(int(part))
    if not dims:
        raise SystemExit("empty dimension list")
    return dims


def _dump_json(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_points_csv(points, path):
    names = ["x%d" % j for j in range(points.shape[1])]
    write_csv_table(path, names, [points[:, j] for j in range(points.shape[1])])


def _cmd_sample(args):
    body = _load_body(args.body)
    method = {"hnr": "hit_and_run"}.get(args.sampler, args.sampler)
    handle = SamplerHandle(body, seed=args.seed, method=method,
                           burn_in=args.burn_in, thinning=args.thin)
    pts = handle.draw(args.count)
    if args.out:
        _write_points_csv(pts, args.out)
    else:
        for row in pts:
            sys.stdout.write(",".join(FLOAT_FMT % v for v in row) + "\n")
    return 0


def _cmd_construct(args):
    body = _load_body(args.body)
    policy = CenterPolicy.parse(args.policy)
    if args.rho is not None:
        if policy.mode != "adaptive":
            raise SystemExit("--rho applies to the adaptive policy only")
        policy = CenterPolicy(mode="adaptive", rho=args.rho)
    model = isotropic_transform(body, seed=args.seed)
    image = model.image_of(body)
    report = run_trials(image, model, args.trials, policy=policy,
                        seed=args.seed, keep_best=True, stamp=args.stamp,
                        config_extra={"body": body.to_spec()})
    if args.out:
        report.save_json(args.out)
    else:
        sys.stdout.write(report.json_str())
    if args.csv:
        report.save_trials_csv(args.csv)
    return 0


def _cmd_enclose(args):
    body = _load_body(args.body)
    res = enclose(body, args.trials, seed=args.seed)
    out = {
        "body": body.to_spec(),
        "contains": bool(res.contains),
        "enclosing_vertices": res.enclosing.vertices.tolist(),
        "eqb_residual": float(res.eqb_residual),
        "l_hat": float(res.l_hat),
        "normalized": float(res.normalized),
        "ratio": float(res.ratio),
        "seed": int(args.seed),
        "success_rate": float(res.success_rate),
        "translation": res.translation.tolist(),
        "trials": int(args.trials),
        "trials_used": int(res.trials_used),
        "version": __version__,
    }
    _dump_json(out, args.out)
    return 0


def _cmd_sweep(args):
    dims = _parse_dims(args.dims)
    bodies = args.bodies.split(",") if args.bodies else None
    report = sweep(dims, bodies=bodies, trials=args.trials, seed=args.seed,
                   stamp=args.stamp)
    report.save_sweep_csv(args.out)
    if args.json:
        report.save_json(args.json)
    return 0


def _cmd_reference(args):
    dims = _parse_dims(args.dims)
    if args.kind == "ball":
        names = ["n", "vol_simplex", "vol_ball", "normalized"]
        cols = [[], [], [], []]
        for n in dims:
            vs, vb, norm = reference_ball(n)
            for col, val in zip(cols, (n, vs, vb, norm)):
                col.append(val)
    else:
        names = ["n", "bound", "certified"]
        cols = [[], [], []]
        for n in dims:
            bound, certified = reference_cube(n)
            for col, val in zip(cols, (n, bound, certified)):
                col.append(val)
    if args.out:
        write_csv_table(args.out, names, cols)
    else:
        sys.stdout.write(",".join(names) + "\n")
        for i in range(len(cols[0])):
            row = [cols[j][i] for j in range(len(names))]
            sys.stdout.write(",".join(
                format_float(v) if isinstance(v, float) else str(int(v))
                for v in row) + "\n")
    return 0


def _cmd_triangle2d(args):
    with open(args.polygon, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    poly = Polygon2D(np.asarray(spec["vertices"], dtype=np.float64))
    tri = min_enclosing_triangle(poly)
    out = {
        "polygon_area": poly.area(),
        "triangle_area": float(simplex_volume(tri)),
        "triangle_vertices": tri.vertices.tolist(),
    }
    _dump_json(out, args.out)
    return 0


def _add_seed(p):
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $%s or 0)" % SEED_ENV)


def build_parser():
    p = argparse.ArgumentParser(
        prog="simplexfit",
        description="Randomized inner simplices, polar enclosing simplices, "
                    "and reference oracles for convex bodies.")
    p.add_argument("--version", action="version",
                   version="simplexfit %s (backend: %s)" % (__version__, BACKEND))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw points from a body")
    s.add_argument("--body", required=True, help="body spec JSON file")
    s.add_argument("--count", type=int, default=100, help="number of points")
    s.add_argument("--sampler", choices=["auto", "exact", "hnr"],
                   default="auto", help="sampling method")
    s.add_argument("--burn-in", type=int, default=None,
                   help="hit-and-run burn-in steps (default 50 n^2)")
    s.add_argument("--thin", type=int, default=None,
                   help="hit-and-run steps between samples (default n^2)")
    s.add_argument("--out", help="output CSV (default: stdout)")
    _add_seed(s)
    s.set_defaults(func=_cmd_sample)

    s = sub.add_parser("construct",
                       help="run centered inner-simplex trials on a body")
    s.add_argument("--body", required=True, help="body spec JSON file")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--policy", default="adaptive",
                   help="adaptive or fixed:C1 recentering policy")
    s.add_argument("--rho", type=float, default=None,
                   help="adaptive inradius fraction (default 1)")
    s.add_argument("--out", help="report JSON (default: stdout)")
    s.add_argument("--csv", help="also write per-trial records CSV")
    s.add_argument("--stamp", action="store_true",
                   help="include a wall-clock timestamp in provenance")
    _add_seed(s)
    s.set_defaults(func=_cmd_construct)

    s = sub.add_parser("enclose", help="find a small enclosing simplex")
    s.add_argument("--body", required=True, help="body spec JSON file")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--out", help="result JSON (default: stdout)")
    _add_seed(s)
    s.set_defaults(func=_cmd_enclose)

    s = sub.add_parser("sweep",
                       help="run constructions over a (dimension, body) grid")
    s.add_argument("--dims", required=True,
                   help="dimensions, e.g. 2,3,4 or 2:6")
    s.add_argument("--bodies", default=None,
                   help="comma-separated corpus subset "
                        "(ball,cube,cross,vpoly,hpoly,simplex)")
    s.add_argument("--trials", type=int, default=2000)
    s.add_argument("--out", required=True, help="sweep CSV path")
    s.add_argument("--json", help="also write full report JSON")
    s.add_argument("--stamp", action="store_true",
                   help="include a wall-clock timestamp in provenance")
    _add_seed(s)
    s.set_defaults(func=_cmd_sweep)

    s = sub.add_parser("reference",
                       help="closed-form extremal simplex values")
    s.add_argument("--kind", choices=["ball", "cube"], required=True)
    s.add_argument("--dims", required=True,
                   help="dimensions, e.g. 2,3,4 or 2:30")
    s.add_argument("--out", help="output CSV (default: stdout)")
    _add_seed(s)
    s.set_defaults(func=_cmd_reference)

    s = sub.add_parser("triangle2d",
                       help="minimal enclosing triangle of a convex polygon")
    s.add_argument("--polygon", required=True,
                   help="JSON file with a \"vertices\" list (CCW)")
    s.add_argument("--out", help="result JSON (default: stdout)")
    _add_seed(s)
    s.set_defaults(func=_cmd_triangle2d)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _env_seed()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
