"""Command-line interface: CSV reports for metrics, maps, bounds, and figures.

Output is deterministic (byte-identical for identical invocations): values
are printed with 15 significant digits, grids are fixed by the arguments,
and the one randomized case (verify --case isometry) is seeded.

Exit status: 0 on success, 1 on usage or parameter errors, 2 when a figure
pipeline detects an ordering violation in its own output.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from ._quad import DEFAULT_REL_TOL
from .bounds import (
    AnnulusSpec,
    cmc_modulus_bound,
    euclid_kalaj,
    euclid_nitsche,
    euclid_weitsman,
    f1,
    f2,
    general_bound,
    hyperbolic_annulus_bound,
    hyperbolic_disk_bound,
    sphere_bound,
    sphere_r_lower,
)
from .errors import (
    DomainError,
    IntegrationError,
    OrderingViolation,
    ParameterError,
    PhaseUnwrapError,
    QuadratureError,
)
from .figures import default_tau_grid, figure1, figure23, figure4
from .maps import RadialMapParams, build_map, inner_radius
from .metrics import metric_by_kind
from .verify import (
    GridMap,
    cylinder_gauss_residual,
    hopf_residual,
    isometry_conjugate,
    pde_residual,
    polar_laplacian_check,
    theta_energy,
    theta_energy_lower_bound,
)

USAGE_ERROR, ASSERTION_ERROR = 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.15g}"
    return str(v)


def _emit(header, rows, out_path):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map_params(args):
    if args.extremal:
        return RadialMapParams.extremal(args.surface, args.tau, args.sigma)
    if args.c is None:
        raise ParameterError("provide --c or --extremal")
    return RadialMapParams(args.surface, args.c, args.tau, args.sigma)


# -- subcommands -----------------------------------------------------------------

def _cmd_metric(args):
    metric = metric_by_kind(args.kind, R=args.R)
    if args.op == "density":
        _require(args.t is not None, "--t is required for density")
        _emit(("kind", "t", "density"),
              [(args.kind, args.t, metric.density(args.t))], args.out)
    elif args.op == "curvature":
        _require(args.t is not None, "--t is required for curvature")
        _emit(("kind", "t", "curvature"),
              [(args.kind, args.t, metric.curvature(args.t))], args.out)
    elif args.op == "classify":
        _require(args.t_min is not None and args.t_max is not None,
                 "--t-min/--t-max are required for classify")
        label = metric.classify_curvature((args.t_min, args.t_max),
                                          samples=args.samples)
        _emit(("kind", "t_min", "t_max", "classification"),
              [(args.kind, args.t_min, args.t_max, label)], args.out)
    elif args.op == "distance":
        _require(args.a is not None and args.b is not None,
                 "--a/--b are required for distance")
        _emit(("kind", "a", "b", "distance"),
              [(args.kind, args.a, args.b,
                metric.radial_distance(args.a, args.b, rel_tol=args.rel_tol))],
              args.out)
    elif args.op == "profile":
        prof = metric.profile(rel_tol=args.rel_tol)
        if args.rho is not None:
            _emit(("kind", "rho", "g"),
                  [(args.kind, args.rho, float(prof.g(args.rho)))], args.out)
        elif args.r is not None:
            _emit(("kind", "r", "omega"),
                  [(args.kind, args.r, float(prof.omega(args.r)))], args.out)
        else:
            raise ParameterError("profile needs --rho (report g) or --r (report omega)")
    elif args.op == "geodesic-check":
        _require(args.a is not None and args.b is not None,
                 "--a/--b are required for geodesic-check")
        chk = metric.verify_radial_geodesic(args.a, args.b, steps=args.steps,
                                            rel_tol=args.rel_tol)
        _emit(("kind", "a", "b", "steps", "max_abs_y", "arclength",
               "distance", "arclength_error"),
              [(args.kind, args.a, args.b, chk.steps, chk.max_abs_y,
                chk.arclength, chk.distance, chk.arclength_error)], args.out)
    return 0


def _cmd_map(args):
    params = _map_params(args)
    if args.eval is not None:
        rmap = build_map(params, table_size=args.table_size,
                         rel_tol=args.rel_tol)
        _emit(("r", "g"), [(args.eval, rmap.g(args.eval))], args.out)
    elif args.table:
        rmap = build_map(params, table_size=args.table_size,
                         rel_tol=args.rel_tol)
        _emit(("r", "g"), list(zip(rmap.r_table, rmap.y_table)), args.out)
    else:
        _emit(("surface", "c", "tau", "sigma", "inner_radius"),
              [(params.surface, params.c, params.tau, params.sigma,
                inner_radius(params, rel_tol=args.rel_tol))], args.out)
    return 0


def _report_row(args, rep):
    _emit(("bound_id", "lhs", "rhs", "satisfied", "applicable", "reason"),
          [(rep.bound_id, rep.lhs, rep.rhs, rep.satisfied, rep.applicable,
            rep.reason)], args.out)


def _scalar_row(args, name, value):
    _emit(("bound_id", "value"), [(name, value)], args.out)


def _cmd_bound(args):
    bid = args.id
    if bid in ("nitsche", "weitsman", "kalaj"):
        _require(args.r1 is not None, "--r1 is required")
        fn = {"nitsche": euclid_nitsche, "weitsman": euclid_weitsman,
              "kalaj": euclid_kalaj}[bid]
        _scalar_row(args, f"euclid_{bid}", fn(args.r1))
    elif bid == "riemann":
        _require(None not in (args.tau, args.sigma, args.r1),
                 "--tau/--sigma/--r1 are required")
        spec = AnnulusSpec.from_chart(metric_by_kind("sphere"), args.tau, args.sigma)
        _report_row(args, sphere_bound(spec, args.r1))
    elif bid == "riemann-r-lower":
        _require(None not in (args.tau, args.sigma), "--tau/--sigma are required")
        _scalar_row(args, "sphere_r_lower", sphere_r_lower(args.sigma, args.tau))
    elif bid == "cmc":
        _require(None not in (args.rho0, args.rho1), "--rho0/--rho1 are required")
        _scalar_row(args, "cmc_modulus_bound",
                    cmc_modulus_bound(args.rho0, args.rho1))
    elif bid == "hyperbolic":
        _require(None not in (args.tau, args.sigma, args.r1),
                 "--tau/--sigma/--r1 are required")
        spec = AnnulusSpec.from_chart(metric_by_kind("hyperbolic_disk"),
                                      args.tau, args.sigma)
        _report_row(args, hyperbolic_disk_bound(spec, args.r1))
    elif bid == "hyperbolic-annulus":
        _require(None not in (args.R, args.rho0, args.rho1, args.r1),
                 "--R/--rho0/--rho1/--r1 are required")
        spec = AnnulusSpec.from_geodesic(metric_by_kind("hyperbolic_annulus",
                                                        R=args.R),
                                         args.rho0, args.rho1)
        _report_row(args, hyperbolic_annulus_bound(spec, args.r1))
    elif bid == "general":
        _require(None not in (args.kind, args.tau, args.sigma, args.r1),
                 "--kind/--tau/--sigma/--r1 are required")
        spec = AnnulusSpec.from_chart(metric_by_kind(args.kind, R=args.R),
                                      args.tau, args.sigma)
        _report_row(args, general_bound(spec, args.r1))
    elif bid in ("f1", "f2"):
        _require(args.s is not None, "--s is required")
        value = f1(args.s, rel_tol=args.rel_tol) if bid == "f1" else f2(args.s)
        _scalar_row(args, bid, value)
    return 0


def _cmd_figure(args):
    points = args.points or (101 if args.id == 4 else 50)
    if args.id == 1:
        header, rows, footer = figure1(tau_grid=None if args.points is None
                                       else default_tau_grid(points),
                                       rel_tol=args.rel_tol)
        _emit(header, rows + [footer], args.out)
    elif args.id == 2:
        header, rows = figure23(sigma=math.sqrt(3.0) / 3.0, points=points,
                                rel_tol=args.rel_tol)
        _emit(header, rows, args.out)
    elif args.id == 3:
        _require(args.sigma is not None, "--sigma is required for figure 3")
        header, rows = figure23(sigma=args.sigma, points=points,
                                rel_tol=args.rel_tol)
        _emit(header, rows, args.out)
    elif args.id == 4:
        header, rows = figure4(points=points, rel_tol=args.rel_tol)
        _emit(header, rows, args.out)
    return 0


def _cmd_verify(args):
    n = args.grid
    if args.case == "cylinder-gauss":
        _emit(("case", "grid", "max_residual"),
              [("cylinder-gauss", n, cylinder_gauss_residual(n, max(n // 2, 8)))],
              args.out)
        return 0
    params = _map_params(args)
    rmap = build_map(params, table_size=args.table_size, rel_tol=args.rel_tol)
    r_out = 1.0 if not (params.surface == "hyperbolic" and params.sigma >= 1.0) \
        else 1.0 - 1e-3
    if args.case == "pde":
        res = pde_residual(GridMap.from_radial_map(rmap, n, n, r_out=r_out))
        _emit(("case", "grid", "max_residual", "term_scale"),
              [("pde", n, res.max_abs, res.scale)], args.out)
    elif args.case == "hopf":
        gm = GridMap.from_radial_map(rmap, n, n, r_out=r_out)
        _emit(("case", "grid", "max_residual"),
              [("hopf", n, hopf_residual(gm))], args.out)
    elif args.case == "theta-energy":
        gm = GridMap.from_radial_map(rmap, n, n, r_out=r_out)
        _emit(("case", "grid", "value", "lower_bound"),
              [("theta-energy", n, theta_energy(gm),
                theta_energy_lower_bound(gm))], args.out)
    elif args.case == "laplacian":
        chk = polar_laplacian_check(rmap, n_r=n, r_out=min(r_out, 0.999))
        _emit(("case", "grid", "laplacian_residual", "angular_residual"),
              [("laplacian", n, chk.laplacian_residual, chk.angular_residual)],
              args.out)
    elif args.case == "isometry":
        gm = GridMap.from_radial_map(rmap, n, n, r_out=r_out)
        base = pde_residual(gm).max_abs
        rng = np.random.default_rng(args.seed)
        rows = []
        for k in range(args.count):
            a = 0.08 * rng.uniform(0.1, 1.0) * np.exp(2j * math.pi * rng.uniform())
            phi = 2.0 * math.pi * rng.uniform()
            got = pde_residual(isometry_conjugate(gm, a=a, phi=phi)).max_abs
            rows.append((k, a.real, a.imag, phi, base, got, got / base))
        _emit(("index", "a_re", "a_im", "phi", "base_residual",
               "conjugated_residual", "ratio"), rows, args.out)
    return 0


def _require(cond, message):
    if not cond:
        raise ParameterError(message)


def _add_global_options(parser, suppress=False):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--rel-tol", type=float,
                        default=d if suppress else DEFAULT_REL_TOL,
                        help="quadrature relative tolerance")
    parser.add_argument("--grid", type=int, default=d if suppress else 64,
                        help="grid size for verification cases")
    parser.add_argument("--table-size", type=int,
                        default=d if suppress else 512,
                        help="tabulation size for constructed maps")
    parser.add_argument("--out", type=str, default=d,
                        help="write CSV here instead of stdout")


def build_parser():
    parser = _Parser(prog="annulus-harmonics",
                     description=__doc__.splitlines()[0])
    _add_global_options(parser)
    common = _Parser(add_help=False)
    _add_global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", parents=[common],
                       help="density, curvature, distance, profile")
    p.add_argument("--kind", required=True,
                   choices=["euclidean", "hyperbolic_disk", "punctured_disk",
                            "hyperbolic_annulus", "sphere", "cigar"])
    p.add_argument("--op", required=True,
                   choices=["density", "curvature", "classify", "distance",
                            "profile", "geodesic-check"])
    p.add_argument("--R", type=float, default=None, help="annulus parameter R > 1")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--t-min", dest="t_min", type=float, default=None)
    p.add_argument("--t-max", dest="t_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--steps", type=int, default=4096)
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("map", parents=[common],
                       help="construct and evaluate radial harmonic maps")
    p.add_argument("--surface", required=True, choices=["sphere", "hyperbolic"])
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--extremal", action="store_true")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--eval", type=float, default=None,
                   help="report g at this domain radius")
    p.add_argument("--table", action="store_true", help="dump the (r, g) table")
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("bound", parents=[common], help="evaluate one bound")
    p.add_argument("--id", required=True,
                   choices=["nitsche", "weitsman", "kalaj", "general",
                            "riemann", "riemann-r-lower", "cmc", "hyperbolic",
                            "hyperbolic-annulus", "f1", "f2"])
    p.add_argument("--r1", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--rho0", type=float, default=None)
    p.add_argument("--rho1", type=float, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--kind", type=str, default=None,
                   help="target metric kind for --id general")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("figure", parents=[common],
                       help="emit CSV data for one of the figures")
    p.add_argument("--id", type=int, required=True, choices=[1, 2, 3, 4])
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("verify", parents=[common],
                       help="grid verification cases")
    p.add_argument("--case", required=True,
                   choices=["cylinder-gauss", "pde", "hopf", "theta-energy",
                            "laplacian", "isometry"])
    p.add_argument("--surface", choices=["sphere", "hyperbolic"],
                   default="sphere")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--extremal", action="store_true")
    p.add_argument("--tau", type=float, default=0.4)
    p.add_argument("--sigma", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=20260810)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OrderingViolation as exc:
        print(f"ordering violation: {exc}", file=sys.stderr)
        return ASSERTION_ERROR
    except (ParameterError, DomainError, QuadratureError, IntegrationError,
            PhaseUnwrapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
