"""Command-line driver.

Exit codes: 0 verified, 1 violated (or a computation could not certify),
2 usage error. Reports go to stdout unless ``--output`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import (
    BQConditionError,
    BudgetExceededError,
    DegenerateConfigurationError,
    DomainError,
    HypidError,
    QuadratureError,
)
from .identities import (
    IdentityReport,
    basmajian_pants,
    bridgeman_pants,
    encode_number,
    htz,
    luo_tan_torus,
    mcshane_torus,
    mirzakhani_torus,
    pants_spectrum,
    polygon_bridgeman,
    twz,
)
from .moebius import IdealPolygon, boundary_point
from .moments import average_hitting_mc, f2_quadrature, vlamis_fnk
from .numerics import QuadratureSpec, rogers, sech2_half
from .panttorus import lasso_closed, lasso_integral
from .tracetree import TraceTriple, fuchsian_torus_seed

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- parsing helpers

def _floats(text, count=None, name="value"):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"could not parse {name} {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"{name} needs {count} comma-separated numbers")
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{name} must be finite")
    return vals


def _number(text):
    t = text.strip().replace("i", "j")
    try:
        v = complex(t)
    except ValueError as exc:
        raise UsageError(f"could not parse number {text!r}") from exc
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise UsageError(f"{text!r} is not finite")
    return v.real if v.imag == 0 else v


def _triple(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--triple needs three comma-separated traces")
    return TraceTriple(*(_number(p) for p in parts))


def _vertices(text):
    try:
        return tuple(boundary_point(t) for t in text.split(","))
    except (ValueError, DomainError) as exc:
        raise UsageError(f"could not parse vertices {text!r}") from exc


def _positive_float(text):
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _spec(args):
    return QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                          max_subdivisions=args.max_subdivisions)


# ---------------------------------------------------------------- output

def _emit(args, payload, rows=None, header=None):
    fmt = args.format
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise UsageError("this command has no CSV form; use --format json or text")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = "".join(f"{k}: {_text_value(v)}\n" for k, v in sorted(payload.items())
                       if k != "terms")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _text_value(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _term_rows(rep):
    rows = []
    for d, v in rep.terms or []:
        c = complex(v)
        rows.append([d, repr(c.real), repr(c.imag)])
    return rows


def _finish_report(args, rep, *, tolerance=None, exact=False):
    """Emit an identity report and return its exit code.

    Exact identities must meet ``tolerance``; series pass on a monotone-bounded
    certificate or, failing that, on the residual tolerance when one is given.
    """
    real = not isinstance(rep.partial_sum, complex)
    certificate = real and rep.monotone_increasing and rep.bounded
    within = tolerance is not None and rep.residual <= tolerance
    verified = within if exact else (certificate or within)
    payload = rep.to_dict(include_terms=args.include_terms)
    payload["certificate"] = bool(certificate)
    payload["tolerance"] = tolerance
    payload["verified"] = bool(verified)
    _emit(args, payload, _term_rows(rep), ["descriptor", "re", "im"])
    return EXIT_OK if verified else EXIT_VIOLATED


def _finish_comparison(args, name, target, value, tolerance, relative, config):
    residual = abs(value - target)
    measure = residual / abs(target) if relative else residual
    verified = measure <= tolerance
    payload = {
        "identity": name, "target": target, "partial_sum": value, "residual": residual,
        "relative": bool(relative), "tolerance": tolerance, "verified": bool(verified),
        "n_terms": 1, "cutoff": "inf", "monotone": True, "certificate": False,
        "config": config, "version": __version__,
    }
    _emit(args, payload, [[name, repr(value), "0.0"]], ["descriptor", "re", "im"])
    return EXIT_OK if verified else EXIT_VIOLATED


# ---------------------------------------------------------------- verify commands

def _seed_from(args, L=None):
    if args.triple:
        return _triple(args.triple)
    if L is not None:
        return fuchsian_torus_seed(L, args.twist)
    raise UsageError("a seed is needed: pass --triple (or --boundary-length)")


def cmd_polygon(args):
    if args.vertices:
        verts = _vertices(args.vertices)
    elif args.n is not None and args.seed is not None:
        verts = IdealPolygon.random(args.n, np.random.default_rng(args.seed)).vertices
    else:
        raise UsageError("give --vertices, or --n together with --seed")
    if args.n is not None and len(verts) != args.n:
        raise UsageError(f"--n {args.n} does not match {len(verts)} vertices")
    rep = polygon_bridgeman(IdealPolygon(verts), include_terms=args.include_terms)
    cr = rep.extra["cross_ratio_form"]
    tol = args.tol
    # both forms must close for an exact identity
    if cr["residual"] > tol:
        rep.bounded = False
    return _finish_report(args, rep, tolerance=tol, exact=True)


def cmd_torus(kind):
    def run(args):
        if kind == "mcshane":
            rep = mcshane_torus(_seed_from(args), args.trace_cutoff,
                                include_terms=args.include_terms, bq_budget=args.bq_budget)
        elif kind == "htz":
            rep = htz(_seed_from(args, args.boundary_length), args.trace_cutoff,
                      include_terms=args.include_terms, bq_budget=args.bq_budget)
        elif kind == "luo-tan-torus":
            rep = luo_tan_torus(_seed_from(args), args.trace_cutoff,
                                include_terms=args.include_terms, bq_budget=args.bq_budget)
        elif kind == "twz":
            L = args.boundary_length
            seed = _seed_from(args, L)
            tau = _number(args.tau) if args.tau is not None else complex(seed.tau)
            rep = twz(seed, tau, args.trace_cutoff, include_terms=args.include_terms,
                      bq_budget=args.bq_budget)
        else:
            if args.boundary_length is None:
                raise UsageError("mirzakhani-torus needs --boundary-length")
            L = args.boundary_length
            rep = mirzakhani_torus(L, _seed_from(args, L), args.trace_cutoff,
                                   include_terms=args.include_terms, bq_budget=args.bq_budget)
        return _finish_report(args, rep, tolerance=args.tol)
    return run


def cmd_pants(kind):
    def run(args):
        l1, l2, l3 = _floats(args.lengths, 3, "--lengths")
        fn = basmajian_pants if kind == "basmajian-pants" else bridgeman_pants
        rep = fn(l1, l2, l3, args.cutoff, include_terms=args.include_terms,
                 max_depth=args.max_depth)
        return _finish_report(args, rep, tolerance=None)
    return run


def cmd_lasso(args):
    closed = lasso_closed(args.l, args.m)
    value = lasso_integral(args.l, args.m, _spec(args))
    return _finish_comparison(args, "lasso", closed, value, args.tol, False,
                              {"l": args.l, "m": args.m, "abs_tol": args.abs_tol,
                               "rel_tol": args.rel_tol})


def cmd_f2(args):
    target = 4.0 * rogers(sech2_half(args.l))
    value = f2_quadrature(args.l, _spec(args))
    return _finish_comparison(args, "f2", target, value, args.tol, True,
                              {"l": args.l, "abs_tol": args.abs_tol, "rel_tol": args.rel_tol})


# ---------------------------------------------------------------- spectrum, moments, selftest

def cmd_spectrum(args):
    l1, l2, l3 = _floats(args.lengths, 3, "--lengths")
    recs = pants_spectrum(l1, l2, l3, args.cutoff, args.max_depth)
    rows = [[repr(r.length), r.from_boundary, r.to_boundary, r.word_str] for r in recs]
    payload = {
        "spectrum": "pants",
        "records": [{"length": r.length, "from": r.from_boundary, "to": r.to_boundary,
                     "word": r.word_str} for r in recs],
        "n_records": len(recs),
        "config": {"lengths": [l1, l2, l3], "cutoff": args.cutoff, "max_depth": args.max_depth},
        "version": __version__,
    }
    _emit(args, payload, rows, ["length", "from", "to", "word"])
    return EXIT_OK


def cmd_vlamis(args):
    if args.n < 2 or args.k < 0:
        raise UsageError("need --n >= 2 and --k >= 0")
    value = vlamis_fnk(args.n, args.k, args.l, _spec(args))
    payload = {
        "moment": "vlamis", "value": value,
        "config": {"n": args.n, "k": args.k, "l": args.l, "abs_tol": args.abs_tol,
                   "rel_tol": args.rel_tol},
        "version": __version__,
    }
    _emit(args, payload, [[args.n, args.k, repr(args.l), repr(value)]], ["n", "k", "l", "value"])
    return EXIT_OK


def cmd_average_hitting(args):
    if args.seed is None:
        raise UsageError("--seed is required for Monte Carlo runs")
    poly = IdealPolygon(_vertices(args.vertices))
    reports, samples = average_hitting_mc(poly, args.samples, args.seed, threads=args.threads,
                                          return_samples=True)
    if args.samples_csv:
        with open(args.samples_csv, "w", encoding="utf-8") as fh:
            fh.write("length\n")
            fh.writelines(f"{v!r}\n" for v in samples.tolist())
    k1 = reports[1]
    verified = abs(k1.z_score) <= args.z_max
    payload = {
        "moment": "average-hitting-mc",
        "reports": [r.to_dict() for r in reports],
        "z_score": k1.z_score,
        "z_max": args.z_max,
        "verified": bool(verified),
        "config": {"vertices": [encode_number(v) for v in poly.vertices],
                   "samples": args.samples, "seed": args.seed},
        "version": __version__,
    }
    rows = [[r.k, repr(r.estimate), repr(r.stderr), repr(r.formula_value), r.n_samples]
            for r in reports]
    _emit(args, payload, rows, ["k", "estimate", "stderr", "formula_value", "n_samples"])
    return EXIT_OK if verified else EXIT_VIOLATED


def cmd_selftest(args):
    from .selftest import run_selftest

    results = run_selftest(args.seed if args.seed is not None else 0)
    ok = all(r.passed for r in results)
    if args.format == "text" and not args.output:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail} ({r.seconds:.2f} s)")
    else:
        payload = {"selftest": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                                for r in results],
                   "passed": ok, "version": __version__}
        _emit(args, payload, [[r.name, r.passed, r.detail] for r in results],
              ["name", "passed", "detail"])
    return EXIT_OK if ok else EXIT_VIOLATED


# ---------------------------------------------------------------- argument parser

def _output_flags(p, formats=("json", "text", "csv")):
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--output", help="write the report to this file instead of stdout")


def _quad_flags(p, abs_tol, rel_tol):
    p.add_argument("--abs-tol", type=_positive_float, default=abs_tol)
    p.add_argument("--rel-tol", type=_positive_float, default=rel_tol)
    p.add_argument("--max-subdivisions", type=int, default=2000)


def build_parser():
    parser = _Parser(prog="hypid", description="Numerical checks of hyperbolic identities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    verify = sub.add_parser("verify", help="evaluate an identity and check it")
    vsub = verify.add_subparsers(dest="identity", parser_class=_Parser)
    vsub.required = True

    p = vsub.add_parser("polygon")
    p.add_argument("--vertices", help="comma-separated vertices in circular order; inf allowed")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, help="random polygon with --n vertices")
    p.add_argument("--tol", type=_positive_float, default=1e-11)
    p.add_argument("--include-terms", action="store_true")
    _output_flags(p)
    p.set_defaults(func=cmd_polygon)

    for name in ("mcshane", "htz", "luo-tan-torus", "twz", "mirzakhani-torus"):
        p = vsub.add_parser(name)
        p.add_argument("--triple", help="x,y,z traces; complex values like 3+0.1i allowed")
        p.add_argument("--trace-cutoff", type=_positive_float, default=1e5)
        p.add_argument("--bq-budget", type=int, default=40)
        p.add_argument("--tol", type=_positive_float, default=None,
                       help="residual tolerance when no monotone certificate applies")
        if name in ("twz", "mirzakhani-torus", "htz"):
            p.add_argument("--boundary-length", type=_positive_float)
            p.add_argument("--twist", type=float, default=0.0)
        if name == "twz":
            p.add_argument("--tau", help="commutator trace (defaults to the seed's)")
        p.add_argument("--include-terms", action="store_true")
        _output_flags(p)
        p.set_defaults(func=cmd_torus(name))

    for name in ("basmajian-pants", "bridgeman-pants"):
        p = vsub.add_parser(name)
        p.add_argument("--lengths", required=True, help="l1,l2,l3")
        p.add_argument("--cutoff", type=_positive_float, default=8.0)
        p.add_argument("--max-depth", type=int, default=400)
        p.add_argument("--include-terms", action="store_true")
        _output_flags(p)
        p.set_defaults(func=cmd_pants(name))

    p = vsub.add_parser("lasso")
    p.add_argument("--l", type=_positive_float, required=True)
    p.add_argument("--m", type=_positive_float, required=True)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    _quad_flags(p, 1e-10, 1e-10)
    _output_flags(p)
    p.set_defaults(func=cmd_lasso, include_terms=False)

    p = vsub.add_parser("f2")
    p.add_argument("--l", type=_positive_float, required=True)
    p.add_argument("--tol", type=_positive_float, default=2e-3, help="relative tolerance")
    _quad_flags(p, 1e-9, 1e-9)
    _output_flags(p)
    p.set_defaults(func=cmd_f2, include_terms=False)

    spectrum = sub.add_parser("spectrum", help="export an orthospectrum")
    ssub = spectrum.add_subparsers(dest="surface", parser_class=_Parser)
    ssub.required = True
    p = ssub.add_parser("pants")
    p.add_argument("--lengths", required=True)
    p.add_argument("--cutoff", type=_positive_float, default=8.0)
    p.add_argument("--max-depth", type=int, default=400)
    _output_flags(p, ("csv", "json", "text"))
    p.set_defaults(func=cmd_spectrum)

    moments = sub.add_parser("moments", help="moment integrals and Monte Carlo")
    msub = moments.add_subparsers(dest="moment", parser_class=_Parser)
    msub.required = True
    p = msub.add_parser("vlamis")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=_positive_float, required=True)
    _quad_flags(p, 1e-12, 1e-12)
    _output_flags(p)
    p.set_defaults(func=cmd_vlamis)

    p = msub.add_parser("average-hitting-mc")
    p.add_argument("--vertices", required=True)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--z-max", type=_positive_float, default=3.0)
    p.add_argument("--samples-csv", help="also write the raw chord lengths here")
    _output_flags(p)
    p.set_defaults(func=cmd_average_hitting)

    p = sub.add_parser("selftest", help="run the quick invariant suite")
    p.add_argument("--seed", type=int, default=0)
    _output_flags(p, ("text", "json", "csv"))
    p.set_defaults(func=cmd_selftest)
    return parser


def _error_payload(args, kind, message, extra=None):
    payload = {"error": kind, "message": message, "verified": False, "version": __version__}
    if extra:
        payload.update(extra)
    if args is not None and getattr(args, "format", "json") == "json":
        _emit(args, payload)
    else:
        print(f"{kind}: {message}", file=sys.stderr)


_VALUE_FLAGS = ("--vertices", "--triple", "--tau", "--lengths", "--twist")


def _attach_values(argv):
    """Join value flags to values that start with '-', e.g. --vertices -1,0,1."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None):
    parser = build_parser()
    args = None
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_values(argv))
        if getattr(args, "samples", 1) is not None and getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BQConditionError as exc:
        res = exc.result
        extra = {"bq_status": res.status.value if res else None}
        if res is not None and res.witness is not None:
            extra["witness"] = {"value": encode_number(complex(res.witness.value)),
                                "depth": res.witness.depth,
                                "path": list(res.witness.path), "slot": res.witness.slot}
        _error_payload(args, "bq-condition", str(exc), extra)
        return EXIT_VIOLATED
    except (QuadratureError, BudgetExceededError) as exc:
        _error_payload(args, type(exc).__name__, str(exc))
        return EXIT_VIOLATED
    except (DomainError, DegenerateConfigurationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypidError as exc:
        _error_payload(args, type(exc).__name__, str(exc))
        return EXIT_VIOLATED


def main():
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "IdentityReport"]
