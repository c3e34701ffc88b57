"""Command-line front end.

Every subcommand writes one JSON report (to ``--out`` or stdout).  Exit codes:
0 when every check passes, 1 when a checked inequality fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bounds, counterexamples, fenchel
from ._validation import NotPositiveError, check_truncation
from .fourier import Fourier1, Fourier2, parse_function
from .sampling import DEFAULT_SEED, random_positive_s1, random_positive_t2
from .spectrum import SCHEMA_VERSION, assemble, f_spectrum

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
N_RANGE = (4, 256)


class InputError(Exception):
    pass


def presets():
    return {
        "one": lambda: Fourier1.constant(1.0),
        "wobble": lambda: Fourier1(1.0, [0.0, 0.5], [0.0, 0.0]),
        "nonortho": lambda: Fourier1(1.0, [0.5, 0.25], [0.0, 0.0]),
        "t2-one": lambda: Fourier2.constant(1.0),
        "t2-bump": lambda: counterexamples.torus_build_f(),
    }


def preset(name):
    table = presets()
    if name not in table:
        raise InputError(f"unknown preset {name!r}; choose from {sorted(table)}")
    return table[name]()


def load_function(text):
    """Parse an inline literal or ``@path`` reference."""
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read function file: {exc}") from exc
    try:
        return parse_function(json.loads(text))
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"malformed function literal: {exc}") from exc


def resolve_function(args, required=True):
    if args.f is not None and args.preset is not None:
        raise InputError("give exactly one of --f and --preset")
    if args.f is not None:
        f = load_function(args.f)
    elif args.preset is not None:
        f = preset(args.preset)
    elif required:
        raise InputError("a weight is required: use --f or --preset")
    else:
        return None
    if args.manifold in ("s1", "t2") and f.manifold != args.manifold:
        raise InputError(f"weight lives on {f.manifold} but --manifold is {args.manifold}")
    return f


def truncation(args, f=None, default=None):
    N = args.n if args.n is not None else default
    if N is None:
        N = 32 if (f is None or f.manifold == "s1") else 8
        if f is not None:
            N = max(N, f.degree)
    try:
        return check_truncation(N, *N_RANGE)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def dump(record):
    return json.dumps(record, indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_table(record, prefix=""):
    rows = []
    for key in sorted(record):
        value = record[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(render_table(value, name + "."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                rows.extend(render_table(item, f"{name}[{i}]."))
        else:
            rows.append((name, value))
    return rows


def format_table(record):
    rows = render_table(record)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


# subcommands return (report, ok)


def cmd_spectrum(args):
    f = resolve_function(args)
    N = truncation(args, f)
    res = f_spectrum(assemble(f.manifold, f, N), args.k)
    rep = res.to_dict()
    ok = bool(np.all(res.residuals <= 1e-8))
    return rep, ok


def cmd_interlace(args):
    f = resolve_function(args)
    N = truncation(args, f)
    rep = bounds.interlace_check(f, args.k, N)
    return {"schema_version": SCHEMA_VERSION, "N": N, **rep.to_dict()}, rep.holds


def cmd_lemma(args):
    f = resolve_function(args)
    if f.manifold != "s1":
        raise InputError("lemma applies to circle weights only")
    try:
        rep = bounds.lemma_sum_check(f)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ok = rep.verdict == "strict" or rep.positivity != "positive"
    return {"schema_version": SCHEMA_VERSION, **rep.to_dict()}, ok


def cmd_bounds(args):
    f = resolve_function(args)
    N = truncation(args, f)
    spec = bounds.solve(f, args.k, N)
    lower = bounds.lower_bound_check(f, spectrum=spec)
    strict = bounds.strictness_check(f, spectrum=spec)
    shift = bounds.shift_bound_check(f, args.k, spectrum=spec)
    ok = lower.holds and strict.holds and all(r["holds"] for r in shift)
    rep = {
        "schema_version": SCHEMA_VERSION,
        "N": N,
        "lower_bound": lower.to_dict(),
        "strictness": strict.to_dict(),
        "shift_bound": shift,
    }
    return rep, ok


def parse_sigma_range(text):
    try:
        lo, hi, steps = text.split(":")
        return fenchel.sigma_grid(float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise InputError(f"--sigma-range must look like LO:HI:STEPS, got {text!r}") from exc


def cmd_fenchel(args):
    f = resolve_function(args, required=False) or Fourier1.constant(1.0)
    if f.manifold != "s1":
        raise InputError("curve families live on the circle")
    phi = load_function(args.phi) if args.phi else Fourier1.harmonic(2, "cos")
    phi = fenchel.orthogonalize(phi, f)
    try:
        fam = fenchel.CurveFamily(f, phi, 0.0)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sigmas = parse_sigma_range(args.sigma_range)
    sweep = fenchel.sigma_sweep(phi, sigmas)
    exact = fenchel.second_variation(phi)
    fd = fenchel.fd_second_derivative(phi)
    sigma_poly = float(sigmas[-1])
    pts = fenchel.curve_points(fam.with_sigma(sigma_poly), args.samples)
    closure = float(np.linalg.norm(pts[-1] - pts[0]))
    poly = fenchel.total_curvature_polygonal(pts)
    analytic = fenchel.total_curvature_analytic(phi, sigma_poly)
    if args.points_out:
        Path(args.points_out).write_text(fenchel.export_points(fam.with_sigma(sigma_poly), args.samples) + "\n")
    min_L = min(sweep["L"])
    rel = abs(fd - exact) / max(abs(exact), 1e-300)
    ok = min_L >= 2 * math.pi - 1e-9 and exact >= -1e-12 and closure <= 1e-10 * fenchel.curve_length(pts)
    rep = {
        "schema_version": SCHEMA_VERSION,
        "sweep": sweep,
        "second_variation": exact,
        "fd_second_derivative": fd,
        "fd_relative_error": rel,
        "polygonal": {"sigma": sigma_poly, "samples": args.samples, "value": poly, "analytic": analytic},
        "closure": closure,
    }
    return rep, ok


def cmd_counterexample(args):
    if args.manifold == "t2":
        N = truncation(args, default=24)
        try:
            cert = counterexamples.torus_certificate(args.eps, args.radius, N, oracle_grid=args.oracle_grid)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return cert.to_dict(), cert.verdict == "valid"
    if args.manifold == "sn":
        try:
            cert = counterexamples.sphere_certificate(args.dim, args.eps if args.eps_given else None)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return cert.to_dict(), cert.verdict != "invalid"
    N = truncation(args)
    rng = np.random.default_rng(args.seed)
    weights = [random_positive_s1(rng) for _ in range(args.count)]
    offenders = counterexamples.circle_search(weights, N)
    rep = {
        "schema_version": SCHEMA_VERSION,
        "manifold": "s1",
        "seed": args.seed,
        "count": args.count,
        "offenders": [{"f": f.to_dict(), "lambda_1_f": lam} for f, lam in offenders],
        "verdict": "no counterexample" if not offenders else "counterexample found",
    }
    return rep, not offenders


def _sweep_one(manifold, seed, index, N, K):
    rng = np.random.default_rng([seed, index])
    if manifold == "s1":
        f = random_positive_s1(rng)
    else:
        f = random_positive_t2(rng)
    spec = bounds.solve(f, K + 1, N)
    rec = {"index": index}
    inter = bounds.interlace_check(f, K, spectrum=spec)
    lower = bounds.lower_bound_check(f, spectrum=spec)
    shift = bounds.shift_bound_check(f, K, spectrum=spec)
    rec["lambda_f"] = inter.lam_f
    rec["interlace"] = inter.holds
    rec["lower_bound"] = lower.holds
    rec["shift_bound"] = all(r["holds"] for r in shift)
    checks = [inter.holds, lower.holds, rec["shift_bound"]]
    if manifold == "s1":
        lam1 = spec.eigenvalues[0]
        rec["first_eigenvalue"] = bool(1 - 1e-8 <= lam1 <= 1 + 1e-6 and bounds.equality_case_mass(spec) <= 1e-6)
        rec["lemma"] = bounds.lemma_sum_check(f).verdict == "strict"
        checks += [rec["first_eigenvalue"], rec["lemma"]]
    rec["ok"] = bool(all(checks))
    return rec


def cmd_sweep(args):
    manifold = args.manifold if args.manifold in ("s1", "t2") else "s1"
    N = truncation(args, default=32 if manifold == "s1" else 8)
    jobs = max(1, args.jobs)
    run = lambda i: _sweep_one(manifold, args.seed, i, N, args.k)
    if jobs == 1:
        records = [run(i) for i in range(args.count)]
    else:
        with ThreadPoolExecutor(jobs) as pool:
            records = list(pool.map(run, range(args.count)))
    failed = [r["index"] for r in records if not r["ok"]]
    rep = {
        "schema_version": SCHEMA_VERSION,
        "manifold": manifold,
        "N": N,
        "seed": args.seed,
        "count": args.count,
        "failed": failed,
        "records": records,
    }
    return rep, not failed


COMMANDS = {
    "spectrum": cmd_spectrum,
    "interlace": cmd_interlace,
    "lemma": cmd_lemma,
    "bounds": cmd_bounds,
    "fenchel": cmd_fenchel,
    "counterexample": cmd_counterexample,
    "sweep": cmd_sweep,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="fspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--manifold", choices=["s1", "t2", "sn"], default="s1")
        p.add_argument("--n", type=int, default=None, help="basis truncation N")
        p.add_argument("--k", type=int, default=6, help="number of eigenvalues")
        p.add_argument("--f", default=None, help="function literal, or @file")
        p.add_argument("--preset", default=None)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--radius", type=float, default=0.3)
        p.add_argument("--dim", type=int, default=2, help="sphere dimension for --manifold sn")
        p.add_argument("--phi", default=None, help="test function literal for fenchel")
        p.add_argument("--sigma-range", default="-0.5:0.5:21")
        p.add_argument("--samples", type=int, default=4096)
        p.add_argument("--points-out", default=None)
        p.add_argument("--oracle-grid", type=int, default=128)
        p.add_argument("--count", type=int, default=100)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("--out", default=None)
    return parser


def _glue_ranges(argv):
    # argparse reads "-0.5:0.5:21" as an option, so bind it to its flag
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--sigma-range":
            tok = f"{tok}={next(it, '')}"
        out.append(tok)
    return out


def run(argv=None):
    parser = build_parser()
    argv = _glue_ranges(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.eps_given = args.eps is not None
    if args.eps is None:
        args.eps = 0.6
    try:
        report, ok = COMMANDS[args.command](args)
    except (InputError, NotPositiveError, ValueError, TypeError) as exc:
        print(f"fspectra: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report["ok"] = bool(ok)
    text = dump(report)
    if args.out:
        Path(args.out).write_text(text)
    if args.format == "table":
        sys.stdout.write(format_table(report))
    elif not args.out:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VIOLATION


def main():
    sys.exit(run())
