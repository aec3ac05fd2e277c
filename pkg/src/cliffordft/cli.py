"""Command-line front end.

    cliffordft algebra   --signature 2,0 --op product --lhs e1 --rhs e2
    cliffordft roots     --signature 0,2
    cliffordft transform --signature 0,1 --root e1 --expr "1=exp(-0.5*x1^2)" --grid -10:10:512 --out g.json
    cliffordft verify    --check heisenberg ... | --suite paper
    cliffordft bench     --op cft-fast --sizes 1024,4096

Exit codes: 0 success, 1 a check failed, 2 bad flags or unparsable input,
3 a numeric precondition failed (invalid root, bad grid, evaluation error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
import warnings

import numpy as np

from . import __version__
from .algebra import (
    Multivector,
    SignatureMismatch,
    Signature,
    NotAVector,
    blade_name,
    gp_arrays,
    grade_project,
    outer_product,
    pairing,
    parse_multivector,
    principle_reverse,
    scalar_product,
    star_tilde,
    tables,
)
from .expr import EvaluationError, ExprSyntaxError
from .field import Grid, GridError, parse_expr_flag, sample_field
from .report import VerificationReport, reports_to_csv
from .roots import NotARoot, ReverseConditionFailed, enumerate_blade_roots, random_root, validate_root
from .samples import random_hermite_gaussian
from .svg import spectrum_plot
from .transform import (
    check_derivative_property,
    check_inversion,
    check_linearity,
    check_parseval,
    check_scaling,
    cft,
    cft_direct,
    cft_fast,
    root_spelling,
)
from .uncertainty import UnfittableField, hardy_check, heisenberg_directional, heisenberg_full
from . import suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

CHECKS = (
    "heisenberg",
    "heisenberg-full",
    "hardy",
    "parseval",
    "inversion",
    "derivative",
    "linearity",
    "scaling",
    "kernel-bound",
    "split",
)

# flags that take a value; their values may begin with '-' (e.g. --grid -10:10:512)
VALUE_FLAGS = {
    "--signature", "--root", "--expr", "--expr2", "--grid", "--method", "--out", "--plot", "--format",
    "--check", "--suite", "--a", "--b", "--p", "--q", "--C", "--seed", "--trials", "--alpha", "--beta",
    "--normalization", "--op", "--lhs", "--rhs", "--grade", "--sizes", "--repeats", "--validate",
    "--random", "--axis",
}


class UsageError(Exception):
    """Bad flags or unparsable input: exit 2."""


class NumericError(Exception):
    """A numeric precondition failed: exit 3."""


def normalize_argv(argv: list[str]) -> list[str]:
    """Glue ``--flag value`` into ``--flag=value`` so negative values survive argparse."""
    out = []
    k = 0
    while k < len(argv):
        tok = argv[k]
        if tok in VALUE_FLAGS and k + 1 < len(argv):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


# -- parsing helpers --------------------------------------------------------

def _signature(args, required: bool = True) -> Signature | None:
    if args.signature is None:
        if required:
            raise UsageError("--signature p,q is required")
        return None
    try:
        return Signature.parse(args.signature)
    except ValueError as exc:
        raise UsageError(f"--signature: {exc}") from None


def _multivector(text: str, sig: Signature, flag: str) -> Multivector:
    try:
        return Multivector.scalar(sig, float(text))
    except ValueError:
        pass
    try:
        return parse_multivector(text, sig)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _root(args, sig: Signature):
    if args.root is None:
        raise UsageError("--root is required")
    m = _multivector(args.root, sig, "--root")
    return validate_root(m)


def _grid(args) -> Grid:
    if args.grid is None:
        raise UsageError("--grid min:max:N[,...] is required")
    return Grid.parse(args.grid)


def _field(args, sig: Signature, grid: Grid, flag: str = "expr"):
    text = getattr(args, flag)
    if not text:
        raise UsageError(f"--{flag} blade=expr[,...] is required")
    try:
        exprs = parse_expr_flag(text)
    except ValueError as exc:
        raise UsageError(f"--{flag}: {exc}") from None
    try:
        return sample_field(exprs, grid, sig)
    except ExprSyntaxError as exc:
        raise UsageError(f"--{flag}: {exc}") from None
    except (EvaluationError, GridError):
        raise
    except ValueError as exc:
        raise UsageError(f"--{flag}: {exc}") from None


def _vector(text: str, sig: Signature, flag: str) -> Multivector:
    """Comma-separated components, a blade spelling or multivector JSON."""
    try:
        comps = [float(c) for c in text.split(",")]
    except ValueError:
        mv = _multivector(text, sig, flag)
        if not mv.is_vector():
            raise UsageError(f"{flag}: {text!r} is not a vector") from None
        return mv
    try:
        return Multivector.vector(sig, comps)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _float(text, flag: str) -> float:
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{flag}: expected a number, got {text!r}") from None


def _int_list(text: str, flag: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}") from None
    if any(v <= 0 for v in vals):
        raise UsageError(f"{flag}: sizes must be positive")
    return vals


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _log(msg: str):
    print(msg, file=sys.stderr)


# -- subcommands -------------------------------------------------------------

def cmd_algebra(args) -> int:
    sig = _signature(args)
    op = args.op
    if op == "table":
        t = tables(sig)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = [blade_name(m) for m in range(sig.dim)]
        w.writerow([""] + names)
        for a in range(sig.dim):
            row = [names[a]]
            for b in range(sig.dim):
                s = int(t.sign[a, a ^ b])
                row.append(("-" if s < 0 else "") + names[a ^ b])
            w.writerow(row)
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    if args.lhs is None:
        raise UsageError("--lhs is required")
    m = _multivector(args.lhs, sig, "--lhs")
    binary = {"product", "outer", "scalar", "star", "pairing"}
    n = _multivector(args.rhs, sig, "--rhs") if op in binary and args.rhs is not None else None
    if op in binary and n is None:
        raise UsageError(f"--op {op} needs --rhs")
    if op == "product":
        result = m * n
    elif op == "outer":
        result = outer_product(m, n)
    elif op == "scalar":
        result = scalar_product(m, n)
    elif op == "star":
        result = star_tilde(m, n)
    elif op == "pairing":
        result = pairing(m, n)
    elif op == "reverse":
        result = principle_reverse(m)
    elif op == "modulus":
        result = m.modulus()
    else:  # grade
        if args.grade is None:
            raise UsageError("--op grade needs --grade k")
        try:
            result = grade_project(m, int(args.grade))
        except ValueError as exc:
            raise UsageError(f"--grade: {exc}") from None
    if isinstance(result, Multivector):
        text = result.to_json() + "\n"
    else:
        text = json.dumps({"p": sig.p, "q": sig.q, "value": float(result)}) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_roots(args) -> int:
    sig = _signature(args)
    if args.validate is not None:
        r = validate_root(_multivector(args.validate, sig, "--validate"))
        sq = r.i * r.i
        obj = {
            "signature": str(sig),
            "root": root_spelling(r),
            "valid": True,
            "square": sq.as_dict(),
            "modulus_sq": r.modulus_sq,
        }
    else:
        obj = {"signature": str(sig), "blade_roots": [root_spelling(r) for r in enumerate_blade_roots(sig)]}
        if args.random:
            rng = np.random.default_rng(args.seed)
            obj["random_roots"] = [random_root(sig, rng).i.as_dict() for _ in range(args.random)]
    _emit(_dumps(obj), args.out)
    return EXIT_OK


def cmd_transform(args) -> int:
    sig = _signature(args)
    r = _root(args, sig)
    grid = _grid(args)
    f = _field(args, sig, grid)
    spec = cft(f, r, args.method)
    if args.format == "csv":
        text = spec.as_field().to_csv()
    else:
        text = json.dumps(spec.to_dict()) + "\n"
    _emit(text, args.out)
    if args.plot:
        with open(args.plot, "w", encoding="utf-8", newline="") as fh:
            fh.write(spectrum_plot(spec, args.axis - 1))
    k = int(np.argmax(spec.modulus()))
    _log(f"transformed {grid.size} nodes in {sig} with i = {root_spelling(r)}; "
         f"peak |F| = {spec.modulus().ravel()[k]:.12g}")
    return EXIT_OK


def _field_setup(args):
    sig = _signature(args)
    r = _root(args, sig)
    grid = _grid(args)
    return sig, r, _field(args, sig, grid)


def _criterion_report(name: str, res: suite.CriterionResult, lhs: float, rhs: float, tol: float) -> VerificationReport:
    return VerificationReport(name, lhs, rhs, tol, res.passed, diagnostics=res.details)


def run_check(args):
    check = args.check
    seed = args.seed
    if check == "kernel-bound":
        sig = _signature(args, required=False)
        trials = args.trials or 10_000
        res = suite.criterion_kernel_bound(trials, seed, sigs=[sig] if sig else None)
        return _criterion_report("kernel-bound", res, res.details["max_modulus_over_bound"], 1.0, 1e-12)
    if check == "split":
        sig = _signature(args, required=False)
        trials = args.trials or 1_000
        res = suite.criterion_split(trials, seed=seed, sigs=[sig] if sig else None)
        worst = max(res.details["max_residues"].values())
        return _criterion_report("split", res, worst, 1e-12, 1e-12)

    sig, r, f = _field_setup(args)
    method = args.method
    if check == "heisenberg":
        a = _vector(args.a or "1", sig, "--a")
        b = _vector(args.b or args.a or "1", sig, "--b")
        return heisenberg_directional(f, r, a, b, method=method)
    if check == "heisenberg-full":
        return heisenberg_full(f, r, method=method)
    if check == "hardy":
        p, q, C = _float(args.p, "--p"), _float(args.q, "--q"), _float(args.C, "--C")
        if min(p, q, C) <= 0:
            raise UsageError("--p, --q and --C must be positive")
        return hardy_check(f, r, p, q, C, method=method, spectral_normalization=args.normalization)
    if check == "parseval":
        return check_parseval(f, r, method=method)
    if check == "inversion":
        return check_inversion(f, r, method=method)
    if check == "derivative":
        return check_derivative_property(f, _vector(args.a or "1", sig, "--a"), r)
    if check == "scaling":
        a = _float(args.a or "2", "--a")
        if a == 0:
            raise UsageError("--a must be nonzero for the scaling check")
        return check_scaling(f, a, r)
    # linearity
    rng = np.random.default_rng(seed)
    h2 = _field(args, sig, f.grid, "expr2") if args.expr2 else random_hermite_gaussian(sig, f.grid, rng)
    alpha = _multivector(args.alpha, sig, "--alpha") if args.alpha else Multivector(sig, rng.normal(size=sig.dim))
    beta = _multivector(args.beta, sig, "--beta") if args.beta else Multivector(sig, rng.normal(size=sig.dim))
    return check_linearity(f, h2, alpha, beta, r, method=method)


def cmd_verify(args) -> int:
    if args.suite:
        if args.suite != "paper":
            raise UsageError(f"--suite: unknown suite {args.suite!r} (known: paper)")
        results = suite.run_all(log=_log)
        obj = {"suite": "paper", "pass": all(r.passed for r in results), "criteria": [r.to_dict() for r in results]}
        _emit(_dumps(obj), args.out)
        return EXIT_OK if obj["pass"] else EXIT_FAIL
    if args.check is None:
        raise UsageError("one of --check or --suite is required")
    rep = run_check(args)
    if args.format == "csv":
        text = reports_to_csv([rep]) if isinstance(rep, VerificationReport) else _hardy_csv(rep)
    else:
        text = _dumps(rep.to_dict())
    _emit(text, args.out)
    _log(rep.summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


def _hardy_csv(rep) -> str:
    d = rep.to_dict()
    keys = ["name", "class", "p", "q", "C", "fitted_decay", "residual", "min_valid_C_spatial",
            "min_valid_C_spectral", "hypotheses_hold", "conclusion_holds", "pass"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    w.writerow([d[k] for k in keys])
    return buf.getvalue()


def _bench_case(op: str, size: int, rng):
    if op == "product":
        sig = Signature(8, 0)
        a = rng.normal(size=(size, sig.dim))
        b = rng.normal(size=(size, sig.dim))
        return lambda: gp_arrays(sig, a, b)
    sig = Signature(0, 1)
    r = validate_root(Multivector.blade(sig, "e1"))
    f = random_hermite_gaussian(sig, Grid.box(-10.0, 10.0, size), rng)
    fn = cft_fast if op == "cft-fast" else cft_direct
    return lambda: fn(f, r)


def cmd_bench(args) -> int:
    sizes = _int_list(args.sizes, "--sizes")
    if args.repeats < 5:
        raise UsageError("--repeats must be at least 5")
    if args.op == "cft-fast" and any(s & (s - 1) for s in sizes):
        raise NumericError("cft-fast sizes must be powers of two")
    rng = np.random.default_rng(args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    unit = "pairs_per_second" if args.op == "product" else "nodes_per_second"
    w.writerow(["op", "size", "median_seconds", unit])
    for size in sizes:
        fn = _bench_case(args.op, size, rng)
        times = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        med = statistics.median(times)
        w.writerow([args.op, size, f"{med:.6e}", f"{size / med:.6e}" if med > 0 else "inf"])
        _log(f"{args.op} size={size}: median {med:.3e} s over {args.repeats} runs")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cliffordft", description="Clifford algebra, Clifford-Fourier transform and uncertainty checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, field_flags: bool = True):
        p.add_argument("--signature", help="p,q")
        p.add_argument("--out", help="output path (stdout stays empty when given)")
        if field_flags:
            p.add_argument("--root", help="square root of -1: blade spelling or multivector JSON")
            p.add_argument("--expr", action="append", help="blade=expr[,blade=expr...]")
            p.add_argument("--grid", help="min:max:N[,min:max:N...]")
            p.add_argument("--method", choices=("auto", "direct", "fast"), default="auto")
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("algebra", help="multivector arithmetic")
    common(p, field_flags=False)
    p.add_argument("--op", required=True,
                   choices=("product", "outer", "scalar", "star", "pairing", "reverse", "modulus", "grade", "table"))
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--grade")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("roots", help="list or validate square roots of -1")
    common(p, field_flags=False)
    p.add_argument("--validate", help="multivector to validate")
    p.add_argument("--random", type=int, default=0, help="also draw this many non-blade roots")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("transform", help="sample a field and transform it")
    common(p)
    p.add_argument("--plot", help="SVG path for a plot of the spectrum along one axis")
    p.add_argument("--axis", type=int, default=1, help="frequency axis to plot (1-based)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run one check or the acceptance suite")
    common(p)
    p.add_argument("--check", choices=CHECKS)
    p.add_argument("--suite")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--C")
    p.add_argument("--normalization", choices=("unitary", "none"), default="unitary")
    p.add_argument("--expr2", action="append", help="second field for the linearity check")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time transforms or products")
    p.add_argument("--op", required=True, choices=("cft-direct", "cft-fast", "product"))
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = normalize_argv(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "axis", 1) < 1:
            raise UsageError("--axis is 1-based")
        if getattr(args, "trials", None) is not None and args.trials <= 0:
            raise UsageError("--trials must be positive")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                return args.func(args)
            finally:
                for msg in dict.fromkeys(str(w.message) for w in caught):
                    _log(f"warning: {msg}")
    except UsageError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    except (NotARoot, ReverseConditionFailed, GridError, EvaluationError, NumericError,
            SignatureMismatch, NotAVector, UnfittableField) as exc:
        _log(f"error: {exc}")
        return EXIT_NUMERIC
    except OSError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
