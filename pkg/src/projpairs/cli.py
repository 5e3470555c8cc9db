"""Command-line front end.

Exit codes: 0 ok, 1 usage or file format error, 2 infeasible input,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import region
from .blockops import SpectralPresentation, inflate
from .decomposer import decompose, verify_decomposition
from .errors import ProjPairsError
from .fileformat import FileFormatError, load_decomposition, load_input, save_decomposition
from .matfactory import sharpness_family

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3


def _fmt(v) -> str:
    return f"{float(v):.10g}"


def _print_verdict(v: region.FeasibilityVerdict, out) -> None:
    word = {True: "pass", False: "FAIL", None: "n/a"}
    print(
        f"n={v.n}: necessary range {word[v.necessary_bounds]}, "
        f"negative threshold {word[v.necessary_threshold]}, sufficient {word[v.sufficient]}",
        file=out,
    )
    for msg in v.messages:
        print(f"  {msg}", file=out)


def cmd_decompose(args) -> int:
    data = load_input(args.input)
    if isinstance(data, list):
        spec = SpectralPresentation.from_values(data)
    else:
        spec = inflate(data, args.cluster_tol)
    lo, hi = float(spec.lambda_min), float(spec.lambda_max)
    print(f"spectrum: [{_fmt(lo)}, {_fmt(hi)}] with {len(spec)} distinct eigenvalue(s)")

    if args.n == "auto":
        n = region.min_sufficient_n(lo, hi)
        print(f"chosen n = {n} (smallest even n whose sufficient range holds the spectrum)")
    else:
        try:
            n = int(args.n)
        except ValueError:
            print(f"error: --n must be an integer or 'auto', got {args.n!r}", file=sys.stderr)
            return EXIT_USAGE
        if n < 4 or n % 2:
            print(f"error: the construction needs even n >= 4, got {n}", file=sys.stderr)
            return EXIT_USAGE
    verdict = region.check_feasibility(lo, hi, n)
    _print_verdict(verdict, sys.stdout)
    if not verdict.sufficient:
        if not verdict.necessary:
            print(f"infeasible: no representation with n={n} exists", file=sys.stderr)
        else:
            print(f"infeasible: spectrum outside the constructive range for n={n}", file=sys.stderr)
        for msg in verdict.messages:
            print(f"  {msg}", file=sys.stderr)
        return EXIT_INFEASIBLE

    d = decompose(spec, n)
    save_decomposition(d, args.out)
    print(f"wrote {args.out}: {n} pairs, {sum(len(q) + len(p) for q, p in d.pairs)} block rules")
    return EXIT_OK


def cmd_verify(args) -> int:
    d = load_decomposition(args.decomposition)
    if args.T < 2 * d.m:
        print(f"error: window T={args.T} must be at least 2m = {2 * d.m}", file=sys.stderr)
        return EXIT_USAGE
    rep = verify_decomposition(d, args.T, args.tol, workers=args.workers)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_feasibility(args) -> int:
    if args.c is not None:
        if not args.c > 0:
            print("error: c must be positive", file=sys.stderr)
            return EXIT_USAGE
        lo, hi = -args.c, args.c
        lower, upper = region.nc_bounds(args.c)
        print(f"n(c) for ||x|| <= {_fmt(args.c)}: lower = {lower:.6g}, upper = {upper}")
        print(f"  linear form: {_fmt(8 * args.c + 8 / 3)} <= n(c) <= {_fmt(8 * args.c + 10)}")
    else:
        lo, hi = args.range
        if lo > hi:
            print("error: lambda_min exceeds lambda_max", file=sys.stderr)
            return EXIT_USAGE

    first_suff = region.min_sufficient_n(lo, hi)
    n_max = args.n_max or first_suff + 2
    first_nec = None
    print("n,necessary_low,necessary_high,threshold,sufficient_low,sufficient_high,verdict")
    for n in range(1, n_max + 1):
        t = region.bound_table(n)
        v = region.check_feasibility(lo, hi, n)
        if first_nec is None and v.necessary:
            first_nec = n
        if v.sufficient:
            verdict = "sufficient"
        elif v.necessary:
            verdict = "undecided"
        else:
            verdict = "impossible"
        slo = _fmt(t.sufficient_low) if t.has_sufficient else ""
        shi = _fmt(t.sufficient_high) if t.has_sufficient else ""
        print(f"{n},{_fmt(t.necessary_low)},{_fmt(t.necessary_high)},{_fmt(t.threshold)},{slo},{shi},{verdict}")
    if first_nec is None:
        n = n_max
        while not region.check_feasibility(lo, hi, n).necessary:
            n += 1
        first_nec = n
    print(f"necessary conditions first hold at n = {first_nec}")
    print(f"first sufficient n = {first_suff}")
    return EXIT_OK


def cmd_region(args) -> int:
    if args.mode == "membership":
        p = (args.x, args.y)
        if region.on_boundary_a(p, 1e-12):
            print("inside (boundary)")
        elif region.in_region_a(p, args.tol):
            print("inside")
        else:
            print("outside")
    elif args.mode == "boundary":
        print("x,y")
        for d in np.linspace(-1.0, 1.0, args.samples):
            s = d * d
            print(f"{(s + d) / 2:.17g},{(s - d) / 2:.17g}")
    else:
        closed = region.inf_linear_functional(args.n)
        brute = region.inf_linear_functional_bruteforce(args.n, args.grid)
        print(f"closed form: {closed:.12g}")
        print(f"brute force (grid {args.grid}): {brute:.12g}")
        print(f"difference: {abs(brute - closed):.3e}")
    return EXIT_OK


def cmd_sharpness(args) -> int:
    n = args.n
    if n < 2 or n % 2:
        print(f"error: n must be even and >= 2, got {n}", file=sys.stderr)
        return EXIT_USAGE
    fam = sharpness_family(n)
    total = np.zeros((2, 2))
    with np.printoptions(precision=12, suppress=True):
        for i, (q, p) in enumerate(fam, 1):
            print(f"Q_{i} = {q.tolist()}")
            print(f"P_{i} = {p.tolist()}")
            total += q @ p
        print(f"sum Q_i P_i = {total.tolist()}")
    target = np.diag([-n / 8, 3 * n / 8])
    err = float(np.max(np.abs(total - target)))
    print(f"expected diag({-n / 8:g}, {3 * n / 8:g}); max deviation {err:.3e}")
    return EXIT_OK if err <= 1e-12 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projpairs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose a Hermitian matrix or spectrum")
    p.add_argument("input")
    p.add_argument("--n", default="auto", help="even n >= 4, or 'auto'")
    p.add_argument("--out", required=True)
    p.add_argument("--cluster-tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="verify a decomposition file")
    p.add_argument("decomposition")
    p.add_argument("--T", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1, help="threads for window verification")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("feasibility", help="bound table and verdicts")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--range", nargs=2, type=float, metavar=("LMIN", "LMAX"))
    g.add_argument("--c", type=float, help="norm bound ||x|| <= c")
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("region", help="the region A")
    rsub = p.add_subparsers(dest="mode", required=True)
    q = rsub.add_parser("membership")
    q.add_argument("x", type=float)
    q.add_argument("y", type=float)
    q.add_argument("--tol", type=float, default=0.0)
    q = rsub.add_parser("boundary")
    q.add_argument("--samples", type=int, default=2001)
    q = rsub.add_parser("extremal")
    q.add_argument("n", type=int)
    q.add_argument("--grid", type=int, default=2001)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("sharpness", help="sum of n products reaching -n/8")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_sharpness)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProjPairsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
