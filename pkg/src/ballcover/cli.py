"""``cover``: command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 no trial converged (or a
``check`` run outside tolerance).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .covering import eval_G, eval_grad, eval_hess, near_singular_count
from .geometry import Configuration, DuplicateCenters, Region, build_partition, screen_nondegenerate
from .instances import INSTANCE_NAMES, UnknownInstance, get_instance
from .multistart import NoConvergedTrial, run_multistart
from .optimize import ALParams
from .oracle import derivative_errors, random_screened_config
from .render import RenderOptions, render_svg

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVE = 3

GRAD_TOL = 1e-6
HESS_TOL = 1e-5


class InputError(Exception):
    pass


def _fail(msg: str) -> int:
    print(f"cover: error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _region(args) -> Region:
    if getattr(args, "instance", None):
        try:
            return get_instance(args.instance)
        except UnknownInstance:
            raise InputError(f"unknown instance {args.instance!r}; choose from {', '.join(INSTANCE_NAMES)}") from None
    if getattr(args, "region", None):
        try:
            return Region.from_dict(_load_json(args.region))
        except (ValueError, TypeError, KeyError) as exc:
            raise InputError(f"bad region file {args.region}: {exc}") from None
    raise InputError("give --region FILE or --instance NAME")


def _config(path) -> Configuration:
    data = _load_json(path)
    try:
        return Configuration.from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"bad configuration file {path}: {exc}") from None


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {v}")
    return v


def cmd_solve(args) -> int:
    region = _region(args)
    params = ALParams(eps_feas=args.eps_feas, eps_opt=args.eps_opt)
    try:
        rep = run_multistart(region, args.m, args.trials, args.seed, params, threads=args.threads)
    except NoConvergedTrial as exc:
        print(f"cover: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    best = rep.best
    sol = {
        "m": args.m,
        "r": best.r,
        "centers": [list(c) for c in best.cfg.centers],
        "G": best.G,
        "kkt_opt": best.kkt_opt,
        "kkt_feas": best.kkt_feas,
        "trial": rep.best_trial,
        "seed": args.seed,
        "counters": best.counters.to_dict(),
    }
    if args.out:
        Path(args.out).write_text(_dump(sol))
    c = best.counters
    print(f"{'m':>4} {'r*':>24} {'G':>9} {'trial':>6} {'outit':>6} {'innit':>6} {'nG':>6} {'nGrad':>6} {'nHess':>6}")
    print(
        f"{args.m:>4} {best.r:>24.16e} {best.G:>9.1e} {rep.best_trial:>6} {c.outer:>6} {c.inner:>6} "
        f"{c.G:>6} {c.grad:>6} {c.hess:>6}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    region = _region(args)
    cfg = _config(args.config)
    try:
        _, book = build_partition(region, cfg)
    except DuplicateCenters as exc:
        raise InputError(str(exc)) from None
    out = {"G": eval_G(region, book, cfg)}
    if args.grad:
        out["grad"] = eval_grad(book, cfg).tolist()
    if args.hess:
        out["hess"] = eval_hess(book, cfg).tolist()
        out["near_singular"] = near_singular_count(book, region.eps_deg)
    if args.screen:
        out["screen"] = screen_nondegenerate(region, cfg, book).to_dict()
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_check(args) -> int:
    region = _region(args)
    rows = []
    if args.config:
        cfgs = [_config(args.config)]
    else:
        if args.configs < 1:
            raise InputError("--configs must be at least 1")
        rng = np.random.default_rng(args.seed)
        cfgs = [random_screened_config(region, args.m, rng) for _ in range(args.configs)]
    worst_g = worst_h = 0.0
    singular = flagged = 0
    for cfg in cfgs:
        try:
            _, book = build_partition(region, cfg)
        except DuplicateCenters as exc:
            raise InputError(str(exc)) from None
        singular += near_singular_count(book, region.eps_deg)
        flagged += not screen_nondegenerate(region, cfg, book).ok
        ge, he = derivative_errors(region, cfg, args.h_grad, args.h_hess)
        worst_g = max(worst_g, ge)
        worst_h = max(worst_h, he)
        rows.append({"grad_err": ge, "hess_err": he})
    ok = worst_g <= GRAD_TOL and worst_h <= HESS_TOL
    sys.stdout.write(
        _dump(
            {
                "configs": len(cfgs),
                "max_grad_err": worst_g,
                "max_hess_err": worst_h,
                "near_singular": singular,
                "screen_failures": flagged,
                "ok": ok,
            }
        )
    )
    return EXIT_OK if ok else EXIT_SOLVE


def cmd_render(args) -> int:
    region = _region(args)
    cfg = None
    if args.solution:
        cfg = _config(args.solution)
    opts = RenderOptions(show_partition=args.partition, show_arcs=not args.no_arcs)
    svg = render_svg(region, cfg, opts)
    Path(args.out).write_text(svg)
    return EXIT_OK


def cmd_instances(args) -> int:
    if args.list:
        for name in INSTANCE_NAMES:
            print(name)
        return EXIT_OK
    region = _region(argparse.Namespace(instance=args.emit))
    text = region.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cover", description="Cover a union of convex polygons by m equal balls.")
    sub = p.add_subparsers(dest="command", required=True)

    def region_args(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--region", metavar="FILE", help="region JSON")
        g.add_argument("--instance", metavar="NAME", help=f"built-in region ({', '.join(INSTANCE_NAMES)})")

    s = sub.add_parser("solve", help="multistart solve")
    region_args(s)
    s.add_argument("--m", type=_positive_int, required=True)
    s.add_argument("--trials", type=_positive_int, default=100)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--eps-feas", type=_positive_float, default=1e-8)
    s.add_argument("--eps-opt", type=_positive_float, default=1e-8)
    s.add_argument("--threads", type=_positive_int, default=None, help="overrides COVER_THREADS")
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate G and derivatives")
    region_args(e)
    e.add_argument("--config", metavar="FILE", required=True)
    e.add_argument("--grad", action="store_true")
    e.add_argument("--hess", action="store_true")
    e.add_argument("--screen", action="store_true")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="compare derivatives with finite differences")
    region_args(c)
    c.add_argument("--m", type=_positive_int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--configs", type=int, default=10)
    c.add_argument("--config", metavar="FILE", help="check this configuration instead of random ones")
    c.add_argument("--h-grad", type=_positive_float, default=1e-6)
    c.add_argument("--h-hess", type=_positive_float, default=1e-5)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("render", help="write an SVG drawing")
    region_args(r)
    r.add_argument("--solution", metavar="FILE", help="configuration or solution JSON")
    r.add_argument("--partition", action="store_true", help="draw the pieces S_ij")
    r.add_argument("--no-arcs", action="store_true", help="do not highlight the free arcs")
    r.add_argument("--out", metavar="FILE", required=True)
    r.set_defaults(func=cmd_render)

    i = sub.add_parser("instances", help="list or emit built-in regions")
    g = i.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    i.add_argument("--out", metavar="FILE")
    i.set_defaults(func=cmd_instances)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
