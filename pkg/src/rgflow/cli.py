"""Command-line front end.

Subcommands evaluate the flow and its inverse, export boundary curves,
zero densities and fixed-point trajectories as CSV/JSON/SVG, solve the
thermodynamic relations, and run the quantitative verification suites.

Exit codes: 0 on success, 1 on usage errors, 2 on numerical failure (the
failing operation is named on stderr).  Output files are UTF-8 with LF
line endings, floats printed with 17 significant digits, and contain no
timestamps, so identical configurations produce byte-identical artifacts.
The environment variable ``RGFLOW_THREADS`` caps parallelism for the
verification suites (0 = auto, 1 = sequential).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .checks import SUITES, run_suite
from .errors import RGFlowError
from .flow import Flavor, FlowParams
from .geometry import boundary_curve, fixed_points, t_crossover, t_star, zero_density
from .initial import theta_prime_n, u0_prime
from .invert import mu_of_beta, phat_of_beta, solve_pbar, u_of_x

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _thread_limit() -> int:
    raw = os.environ.get("RGFLOW_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise _UsageError(f"RGFLOW_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise _UsageError(f"RGFLOW_THREADS must be >= 0, got {n}")
    if n == 0:
        n = os.cpu_count() or 1
    return n


# ---------------------------------------------------------------------------
# Output writers
# ---------------------------------------------------------------------------

def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _write_csv(path, header, rows):
    out, close = _open_out(path)
    try:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(
                cell if isinstance(cell, str) else _fmt(cell) for cell in row
            ) + "\n")
    finally:
        if close:
            out.close()


def _write_json(path, header, rows, meta):
    records = [
        {k: (v if isinstance(v, str) else float(_fmt(v)))
         for k, v in zip(header, row)}
        for row in rows
    ]
    payload = {"meta": meta, "rows": records}
    out, close = _open_out(path)
    try:
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()


def _write_svg(path, curves):
    """Render (label, [(x, y), ...]) curves as polylines in an 800x600 view.

    The viewBox is data-driven; the two axis lines are drawn whenever the
    origin is inside the data window.
    """
    xs = [x for _, pts in curves for x, _ in pts]
    ys = [y for _, pts in curves for _, y in pts]
    if not xs:
        raise RGFlowError("no data points to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad_x = 0.05 * (x1 - x0 or 1.0)
    pad_y = 0.05 * (y1 - y0 or 1.0)
    x0, x1 = x0 - pad_x, x1 + pad_x
    y0, y1 = y0 - pad_y, y1 + pad_y
    w, h = 800.0, 600.0

    def sx(x):
        return (x - x0) / (x1 - x0) * w

    def sy(y):
        return h - (y - y0) / (y1 - y0) * h

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" '
        f'viewBox="0 0 800 600">',
    ]
    if x0 < 0.0 < x1:
        lines.append(
            f'<line class="axis" x1="{sx(0):.2f}" y1="0" x2="{sx(0):.2f}" '
            f'y2="600" stroke="#888" stroke-width="1"/>'
        )
    if y0 < 0.0 < y1:
        lines.append(
            f'<line class="axis" x1="0" y1="{sy(0):.2f}" x2="800" '
            f'y2="{sy(0):.2f}" stroke="#888" stroke-width="1"/>'
        )
    for label, pts in curves:
        coords = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in pts)
        lines.append(
            f'<polyline class="{label}" points="{coords}" fill="none" '
            f'stroke="#1f5fa8" stroke-width="1.5"/>'
        )
    lines.append("</svg>")
    out, close = _open_out(path)
    try:
        out.write("\n".join(lines) + "\n")
    finally:
        if close:
            out.close()


def _emit(args, header, rows, svg_curves, meta):
    if args.format == "csv":
        _write_csv(args.output, header, rows)
    elif args.format == "json":
        _write_json(args.output, header, rows, meta)
    else:
        _write_svg(args.output, svg_curves)


def _meta(args, **extra):
    meta = {
        "command": args.command,
        "version": __version__,
    }
    for key in ("beta", "flavor", "t", "tol", "points"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _flavor(args) -> Flavor:
    return Flavor(args.flavor)


def _cmd_flow(args):
    x = complex(args.x_re, args.x_im)
    ts = np.linspace(args.tmin, args.tmax, args.points)
    rows = []
    for t in ts:
        params = FlowParams(args.beta, _flavor(args), float(t))
        pb = complex(solve_pbar(params, x, tol=args.tol).pbar)
        u = complex(u_of_x(params, x, tol=args.tol))
        rows.append((float(t), x.real, x.imag, pb.real, pb.imag,
                     u.real, u.imag))
    header = ("t", "x_re", "x_im", "p_re", "p_im", "u_re", "u_im")
    curves = [("pbar", [(r[0], r[3]) for r in rows]),
              ("u", [(r[0], r[5]) for r in rows])]
    _emit(args, header, rows, curves, _meta(args, x_re=x.real, x_im=x.imag))
    return 0


def _cmd_invert(args):
    params = FlowParams(args.beta, _flavor(args), args.t)
    x = complex(args.x_re, args.x_im)
    result = solve_pbar(params, x, tol=args.tol)
    pb = complex(result.pbar)
    if args.format == "json":
        _write_json(args.output, ("p_re", "p_im", "residual", "method",
                                  "iterations"),
                    [(pb.real, pb.imag, result.residual,
                      result.method.value, float(result.iterations))],
                    _meta(args, x_re=x.real, x_im=x.imag))
    else:
        print(f"pbar = {_fmt(pb.real)} + {_fmt(pb.imag)}i")
        print(f"residual = {_fmt(result.residual)}")
        print(f"method = {result.method.value}")
        print(f"iterations = {result.iterations}")
    return 0


def _cmd_u(args):
    params = FlowParams(args.beta, _flavor(args), args.t)
    xs = [complex(float(x), args.x_im)
          for x in np.linspace(args.xmin, args.xmax, args.points)]
    rows = []
    for x in xs:
        pb = complex(solve_pbar(params, x, tol=args.tol).pbar)
        u = complex(u_of_x(params, x, tol=args.tol))
        rows.append((args.t, x.real, x.imag, pb.real, pb.imag,
                     u.real, u.imag))
    header = ("t", "x_re", "x_im", "p_re", "p_im", "u_re", "u_im")
    curves = [("u", [(r[1], r[5]) for r in rows])]
    _emit(args, header, rows, curves, _meta(args))
    return 0


def _cmd_boundary(args):
    boundary = boundary_curve(args.t, args.points)
    rows = [(args.t, float(p), float(q)) for p, q in boundary.arc]
    curves = [("boundary", [(r[1], r[2]) for r in rows])]
    _emit(args, ("t", "p", "q"), rows, curves,
          _meta(args, alpha=boundary.alpha,
                failed_points=[float(p) for p in boundary.failed]))
    return 0


def _cmd_zeros(args):
    zm = zero_density(args.t, args.points)
    rows = [(args.t, float(lam), float(rho)) for lam, rho in zm.samples]
    curves = [("density", [(r[1], r[2]) for r in rows])]
    _emit(args, ("t", "lambda", "rho"), rows, curves,
          _meta(args, edge=zm.edge))
    return 0


def _cmd_fixed_points(args):
    ts = np.linspace(args.tmin, args.tmax, args.points)
    rows = []
    for t in ts:
        fps = fixed_points(float(t))
        rows.append((float(t), fps.zeta.real, fps.zeta.imag,
                     fps.zeta_star.real, fps.zeta_star.imag,
                     fps.regime.value))
    header = ("t", "zeta_re", "zeta_im", "zetastar_re", "zetastar_im",
              "regime")
    curves = [("zeta", [(r[1], r[2]) for r in rows]),
              ("zeta_star", [(r[3], r[4]) for r in rows])]
    _emit(args, header, rows, curves, _meta(args))
    return 0


def _cmd_t_star(args):
    value = t_star(args.tol)
    if args.format == "json":
        _write_json(args.output, ("t_star",), [(value,)], _meta(args))
    else:
        print(_fmt(value))
    return 0


def _cmd_crossover(args):
    value = t_crossover(args.tol)
    if args.format == "json":
        _write_json(args.output, ("t_co",), [(value,)], _meta(args))
    else:
        print(_fmt(value))
    return 0


def _cmd_thermo(args):
    if not 0.0 <= args.beta < 4.0:
        raise _UsageError(f"thermo requires 0 <= beta < 4, got {args.beta}")
    phat = phat_of_beta(args.beta)
    # at beta = 0 the plateau is 0 and mu = 1/(2 phat) is unbounded below
    mu = mu_of_beta(args.beta) if args.beta > 0.0 else -math.inf
    if args.format == "json":
        _write_json(args.output, ("beta", "mu", "phat"),
                    [(args.beta, "-inf" if math.isinf(mu) else mu, phat)],
                    _meta(args))
    else:
        print(f"mu = {'-inf' if math.isinf(mu) else _fmt(mu)}")
        print(f"phat = {_fmt(phat)}")
    return 0


def _cmd_initial(args):
    xs = np.linspace(args.xmin, args.xmax, args.points)
    rows = []
    for x in xs:
        if args.n > 0:
            val = complex(theta_prime_n(args.n, float(x), args.beta,
                                        extended=args.extended))
        else:
            val = complex(u0_prime(float(x), args.beta))
        rows.append((float(x), val.real, val.imag))
    curves = [("initial", [(r[0], r[1]) for r in rows])]
    _emit(args, ("x", "value_re", "value_im"), rows, curves,
          _meta(args, n=args.n))
    return 0


def _cmd_verify(args):
    suite_fns = SUITES[args.suite]
    workers = _thread_limit()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda fn: fn(), suite_fns))
    else:
        results = run_suite(args.suite)
    all_ok = all(r.passed for r in results)
    report = {
        "suite": args.suite,
        "version": __version__,
        "passed": all_ok,
        "criteria": [
            {
                "name": r.name,
                "passed": r.passed,
                "items": [
                    {"label": it.label, "measured": it.measured,
                     "bound": it.bound, "passed": it.passed}
                    for it in r.items
                ],
            }
            for r in results
        ],
    }
    if args.output:
        out, close = _open_out(args.output)
        try:
            json.dump(report, out, indent=2, sort_keys=True)
            out.write("\n")
        finally:
            if close:
                out.close()
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}")
        for it in r.items:
            mark = "ok  " if it.passed else "FAIL"
            print(f"    {mark} {it.label}: measured {it.measured:.3g} "
                  f"(bound {it.bound:.3g})")
    print(f"suite {args.suite}: {'PASS' if all_ok else 'FAIL'}")
    return 0 if all_ok else 2


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(p, fmt_default="csv"):
    p.add_argument("--format", choices=("csv", "json", "svg"),
                   default=fmt_default)
    p.add_argument("--output", default=None,
                   help="output file (default: stdout)")
    p.add_argument("--tol", type=float, default=1e-10)


def _add_flow_params(p):
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--flavor", choices=("critical", "normal"),
                   default="critical")


def _build_parser() -> _Parser:
    parser = _Parser(prog="rgflow", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flow", help="sweep pbar and u over a t-grid")
    _add_flow_params(p)
    p.add_argument("--x-re", type=float, required=True)
    p.add_argument("--x-im", type=float, default=0.0)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    _add_common(p)
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("invert", help="solve v(t, p) = x on the principal branch")
    _add_flow_params(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x-re", type=float, required=True)
    p.add_argument("--x-im", type=float, default=0.0)
    _add_common(p, fmt_default="csv")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("u", help="cumulant generator u(t, x) over an x-grid")
    _add_flow_params(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--x-im", type=float, default=0.0)
    p.add_argument("--points", type=int, default=256)
    _add_common(p)
    p.set_defaults(func=_cmd_u)

    p = sub.add_parser("boundary", help="boundary arc q = h(t, p)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    _add_common(p)
    p.set_defaults(func=_cmd_boundary)

    p = sub.add_parser("zeros", help="zero density at scale t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    _add_common(p)
    p.set_defaults(func=_cmd_zeros)

    p = sub.add_parser("fixed-points", help="fixed-point trajectory over t")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    _add_common(p)
    p.set_defaults(func=_cmd_fixed_points)

    p = sub.add_parser("t-star", help="fixed-point collision scale")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_t_star)

    p = sub.add_parser("crossover", help="crossover scale t_co")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_crossover)

    p = sub.add_parser("thermo", help="mu(beta) and phat(beta)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_thermo)

    p = sub.add_parser("initial", help="initial data on an x-grid")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, default=0,
                   help="block dimension N (0 = infinite limit)")
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--extended", action="store_true",
                   help="evaluate outside the guaranteed-convergence domain")
    _add_common(p)
    p.set_defaults(func=_cmd_initial)

    p = sub.add_parser("verify", help="run quantitative verification suites")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--output", default=None,
                   help="write the JSON report to this file")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"rgflow: usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"rgflow: usage error: {exc}", file=sys.stderr)
        return 1
    except RGFlowError as exc:
        print(f"rgflow: numerical failure in '{args.command}': {exc}",
              file=sys.stderr)
        return 2
    except OverflowError as exc:
        print(f"rgflow: numerical failure in '{args.command}': overflow "
              f"({exc})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
