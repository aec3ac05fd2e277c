"""Acceptance battery: every identity and inequality checked at desk scale.

Each ``criterion_*`` function returns a :class:`CriterionResult`; ``run_all``
runs them in order.  Inputs are deterministic given ``seed``.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import (
    Multivector,
    Signature,
    blade_mul,
    gp_arrays,
    reverse_arrays,
)
from .expr import ExprSyntaxError, parse_scalar_expr
from .field import Grid, SampledField
from .report import plain
from .roots import (
    complex_kernel,
    enumerate_blade_roots,
    kernel_bound,
    NotARoot,
    random_root,
    split_arrays,
    validate_root,
)
from .samples import bump, gaussian, random_hermite_gaussian
from .transform import (
    check_derivative_property,
    check_fast_vs_direct,
    check_inversion,
    check_parseval,
    cft,
    cft_direct,
    cft_fast,
)
from .uncertainty import (
    hardy_check,
    heisenberg_directional,
    heisenberg_equality_gap,
    heisenberg_full,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number}: {self.title}"

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "pass": self.passed, "details": plain(self.details)}


def signatures(max_n: int, min_n: int = 0) -> list[Signature]:
    return [Signature(p, n - p) for n in range(min_n, max_n + 1) for p in range(n + 1)]


def _root(sig: Signature, blade: str):
    return validate_root(Multivector.blade(sig, blade))


# -- 1. algebra -----------------------------------------------------------

def criterion_algebra(trials: int = 10_000, max_n: int = 6, seed: int = 0, tol: float = 1e-12) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = {"generator": 0.0, "associativity": 0.0, "anti_automorphism": 0.0, "pairing_route": 0.0, "cauchy_schwarz": 0.0}
    for sig in signatures(max_n):
        d = sig.dim
        for k in range(1, sig.n + 1):
            for l in range(1, sig.n + 1):
                s1, m1 = blade_mul(1 << (k - 1), 1 << (l - 1), sig)
                s2, m2 = blade_mul(1 << (l - 1), 1 << (k - 1), sig)
                anti = s1 + s2 if m1 == m2 else 0
                expected = 2 * sig.metric(k) if k == l else 0
                worst["generator"] = max(worst["generator"], abs(anti - expected))
        M, N, P = (rng.integers(-8, 9, size=(trials, d)).astype(float) for _ in range(3))
        MN = gp_arrays(sig, M, N)
        assoc = gp_arrays(sig, MN, P) - gp_arrays(sig, M, gp_arrays(sig, N, P))
        worst["associativity"] = max(worst["associativity"], float(np.abs(assoc).max()))
        anti = reverse_arrays(sig, MN) - gp_arrays(sig, reverse_arrays(sig, N), reverse_arrays(sig, M))
        worst["anti_automorphism"] = max(worst["anti_automorphism"], float(np.abs(anti).max()))
        dot = np.einsum("ij,ij->i", M, N)
        via_product = gp_arrays(sig, M, reverse_arrays(sig, N))[:, 0]
        worst["pairing_route"] = max(worst["pairing_route"], float(np.abs(dot - via_product).max()))
        X, Y = rng.normal(size=(trials, d)), rng.normal(size=(trials, d))
        for A, B in ((M, N), (X, Y)):
            lhs = np.abs(np.einsum("ij,ij->i", A, B))
            rhs = np.linalg.norm(A, axis=1) * np.linalg.norm(B, axis=1)
            excess = np.where(rhs > 0, (lhs - rhs) / np.where(rhs > 0, rhs, 1.0), lhs)
            worst["cauchy_schwarz"] = max(worst["cauchy_schwarz"], float(max(0.0, excess.max())))
    passed = all(v <= tol for v in worst.values())
    return CriterionResult(1, "algebra exactness", passed, {"max_residues": worst, "tolerance": tol})


# -- 2. commuting split -------------------------------------------------------

def criterion_split(trials: int = 1_000, max_n: int = 6, seed: int = 1, tol: float = 1e-12,
                    sigs: list[Signature] | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = {"sum": 0.0, "commuting": 0.0, "anticommuting": 0.0, "idempotent": 0.0}
    roots_checked = 0
    for sig in sigs if sigs is not None else signatures(max_n, 1):
        A = rng.integers(-8, 9, size=(trials, sig.dim)).astype(float)
        for r in enumerate_blade_roots(sig):
            roots_checked += 1
            plus, minus = split_arrays(A, r)
            R, L = r.right_matrix(), r.left_matrix()
            worst["sum"] = max(worst["sum"], float(np.abs(plus + minus - A).max()))
            worst["commuting"] = max(worst["commuting"], float(np.abs(plus @ R - plus @ L).max()))
            worst["anticommuting"] = max(worst["anticommuting"], float(np.abs(minus @ R + minus @ L).max()))
            pp, pm = split_arrays(plus, r)
            worst["idempotent"] = max(worst["idempotent"], float(np.abs(pp - plus).max()), float(np.abs(pm).max()))
    passed = all(v <= tol for v in worst.values()) and roots_checked > 0
    return CriterionResult(2, "commuting/anticommuting split", passed, {"max_residues": worst, "roots_checked": roots_checked})


# -- 3. Gaussian eigenfunction -------------------------------------------

def criterion_gaussian(tol: float = 1e-6) -> CriterionResult:
    sig = Signature(0, 1)
    r = _root(sig, "e1")
    grid = Grid.box(-10.0, 10.0, 512)
    details = {}
    passed = True
    cases = {
        "exp(-x^2/2)": (0.5, lambda w: math.sqrt(2 * math.pi) * np.exp(-w * w / 2)),
        "exp(-x^2)": (1.0, lambda w: math.sqrt(math.pi) * np.exp(-w * w / 4)),
    }
    for label, (k, exact) in cases.items():
        f = gaussian(sig, grid, k=k)
        for method, spec in (("direct", cft_direct(f, r)), ("fast", cft_fast(f, r))):
            w = spec.wgrid.mesh()[0]
            target = np.zeros_like(spec.values)
            target[..., 0] = exact(w)
            err = np.sqrt(np.sum((spec.values - target) ** 2, axis=-1))
            sup = float(err[np.abs(w) <= 5].max())
            details[f"{label} [{method}]"] = sup
            passed &= sup <= tol
    return CriterionResult(3, "Gaussian eigenfunction", passed, {"sup_errors": details, "tolerance": tol})


# -- corpus shared by 4 and 5 --------------------------------------------

def transform_corpus(seed: int = 4, per_dim: int = 20) -> list[tuple[str, SampledField, object]]:
    """Gaussian plus ``per_dim`` random Hermite-Gaussians in one and two dimensions."""
    rng = np.random.default_rng(seed)
    grid1 = Grid.box(-10.0, 10.0, 512)
    grid2 = Grid.box(-8.0, 8.0, 32, dim=2)
    one_d = [(Signature(0, 1), _root(Signature(0, 1), "e1")), (Signature(3, 0), _root(Signature(3, 0), "e1e2e3"))]
    two_d = [
        (Signature(2, 0), _root(Signature(2, 0), "e1e2")),
        (Signature(1, 1), _root(Signature(1, 1), "e2")),
        (Signature(0, 2), random_root(Signature(0, 2), rng)),
    ]
    out = []
    for dim, grid, pool in ((1, grid1, one_d), (2, grid2, two_d)):
        sig, r = pool[0]
        out.append((f"gaussian n={dim}", gaussian(sig, grid), r))
        for k in range(per_dim):
            sig, r = pool[k % len(pool)]
            out.append((f"hermite-gaussian n={dim} #{k} {sig}", random_hermite_gaussian(sig, grid, rng), r))
    return out


def criterion_parseval(corpus=None, tol: float = 1e-6) -> CriterionResult:
    corpus = corpus or transform_corpus()
    worst = 0.0
    failures = []
    for label, f, r in corpus:
        rep = check_parseval(f, r, tol)
        worst = max(worst, rep.diagnostics["relative_deviation"])
        if not rep.passed:
            failures.append(label)
    return CriterionResult(4, "Plancherel/Parseval (squared norms)", not failures,
                           {"fields": len(corpus), "max_relative_deviation": worst, "failures": failures})


def criterion_inversion(corpus=None, tol: float = 1e-6) -> CriterionResult:
    corpus = corpus or transform_corpus()
    worst = 0.0
    failures = []
    for label, f, r in corpus:
        rep = check_inversion(f, r, tol)
        worst = max(worst, rep.diagnostics["max_error"])
        if not rep.passed:
            failures.append(label)
    return CriterionResult(5, "inversion round trip", not failures,
                           {"fields": len(corpus), "max_error": worst, "failures": failures})


# -- 6. fast vs direct ----------------------------------------------------

def _median_time(fn: Callable, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def criterion_fast_path(seed: int = 6, tol: float = 1e-9, speedup: float = 20.0, bench_n: int = 4096) -> CriterionResult:
    rng = np.random.default_rng(seed)
    cases = []
    sig1, r1 = Signature(0, 1), _root(Signature(0, 1), "e1")
    sig2, r2 = Signature(2, 0), _root(Signature(2, 0), "e1e2")
    g1 = Grid.box(-10.0, 10.0, 64)
    g2 = Grid.box(-8.0, 8.0, 32, dim=2)
    cases.append(("gaussian N=64", gaussian(sig1, g1), r1))
    cases.append(("gaussian 32x32", gaussian(sig2, g2), r2))
    for k in range(3):
        cases.append((f"hermite-gaussian N=64 #{k}", random_hermite_gaussian(sig1, g1, rng), r1))
        cases.append((f"hermite-gaussian 32x32 #{k}", random_hermite_gaussian(sig2, g2, rng), r2))
    devs = {label: check_fast_vs_direct(f, r, tol).diagnostics["relative_max_deviation"] for label, f, r in cases}
    agree = all(v <= tol for v in devs.values())

    gb = Grid.box(-10.0, 10.0, bench_n)
    fb = random_hermite_gaussian(sig1, gb, rng)
    t_direct = _median_time(lambda: cft_direct(fb, r1), 1)
    t_fast = _median_time(lambda: cft_fast(fb, r1), 5)
    ratio = t_direct / t_fast
    fast_enough = ratio >= speedup and t_direct <= 60.0
    return CriterionResult(6, "fast path equals direct quadrature; speedup", agree and fast_enough, {
        "relative_max_deviation": devs,
        "direct_seconds": t_direct,
        "fast_seconds": t_fast,
        "speedup": ratio,
        "required_speedup": speedup,
    })


# -- 7. derivative property ----------------------------------------------

def criterion_derivative(tol_512: float = 5e-3, tol_1024: float = 1.5e-3) -> CriterionResult:
    sig = Signature(0, 1)
    r = _root(sig, "e1")
    a = Multivector.vector(sig, [1.0])
    devs = {}
    for n in (512, 1024):
        f = gaussian(sig, Grid.box(-10.0, 10.0, n))
        devs[n] = check_derivative_property(f, a, r).diagnostics["relative_l2_deviation"]
    passed = devs[512] <= tol_512 and devs[1024] <= tol_1024
    return CriterionResult(7, "derivative property", passed, {
        "relative_l2_deviation": devs,
        "convergence_factor": devs[512] / devs[1024],
    })


# -- 8. Heisenberg family -------------------------------------------------

def inequality_corpus(seed: int = 8, count: int = 100) -> list[tuple[str, SampledField, object]]:
    """Hermite-Gaussians, shifted Gaussians and bumps, half in 1-D, half in 2-D."""
    rng = np.random.default_rng(seed)
    g1 = Grid.box(-10.0, 10.0, 512)
    g2 = Grid.box(-10.0, 10.0, 64, dim=2)
    pools = {
        1: (g1, [(Signature(0, 1), _root(Signature(0, 1), "e1")), (Signature(2, 0), _root(Signature(2, 0), "e1e2"))]),
        2: (g2, [(Signature(2, 0), _root(Signature(2, 0), "e1e2")), (Signature(0, 2), random_root(Signature(0, 2), rng)),
                 (Signature(1, 1), _root(Signature(1, 1), "e2"))]),
    }
    out = []
    for k in range(count):
        dim = 1 if k < count // 2 else 2
        grid, pool = pools[dim]
        sig, r = pool[k % len(pool)]
        kind = k % 3
        if kind == 0:
            f = random_hermite_gaussian(sig, grid, rng)
            label = "hermite-gaussian"
        elif kind == 1:
            amp = Multivector(sig, rng.normal(size=sig.dim))
            f = gaussian(sig, grid, k=rng.uniform(0.3, 1.5), amplitude=amp, center=rng.uniform(-1.5, 1.5, size=dim))
            label = "shifted-gaussian"
        else:
            f = bump(sig, grid, radius=rng.uniform(3.0, 5.0), amplitude=Multivector(sig, rng.normal(size=sig.dim)))
            label = "bump"
        out.append((f"{label} n={dim} #{k}", f, r))
    return out


def _random_direction(sig: Signature, dim: int, rng) -> Multivector:
    return Multivector.vector(sig, list(rng.normal(size=dim)) + [0.0] * (sig.n - dim))


def criterion_heisenberg(seed: int = 8, fields: int = 100, pairs: int = 10) -> CriterionResult:
    details = {}
    ok = True

    # equality family
    sig = Signature(0, 1)
    r = _root(sig, "e1")
    grid = Grid.box(-10.0, 10.0, 512)
    a = Multivector.vector(sig, [1.0])
    gaps = {}
    for k in (0.25, 0.5, 1.0, 2.0):
        for label, c0 in (("1", 1.0), ("2+e1", Multivector.from_blades(sig, {"1": 2.0, "e1": 1.0}))):
            rep = heisenberg_equality_gap(gaussian(sig, grid, k=k, amplitude=c0), r, a)
            gaps[f"k={k} C0={label}"] = rep.diagnostics["gap"]
            ok &= rep.passed
    details["equality_gaps"] = gaps

    # directional inequality and full-norm bound over the corpus
    rng = np.random.default_rng(seed + 1)
    worst_dir = math.inf
    worst_full = math.inf
    orth_ok = True
    violations = []
    for label, f, root in inequality_corpus(seed, fields):
        spec = cft(f, root)
        m = f.grid.n
        for _ in range(pairs):
            a = _random_direction(f.sig, m, rng)
            b = _random_direction(f.sig, m, rng)
            rep = heisenberg_directional(f, root, a, b, spectrum=spec)
            if rep.rhs > 0:
                worst_dir = min(worst_dir, rep.ratio)
                if rep.ratio < 1 - 1e-9:
                    violations.append(label)
        if m == 2:
            a = _random_direction(f.sig, 2, rng)
            comps = a.vector_components()
            b = Multivector.vector(f.sig, [-comps[1], comps[0]])
            rep = heisenberg_directional(f, root, a, b, spectrum=spec)
            orth_ok &= rep.passed and abs(rep.rhs) <= 1e-20 * max(1.0, rep.lhs)
        full = heisenberg_full(f, root, spectrum=spec)
        worst_full = min(worst_full, full.ratio)
        if full.ratio < 1 - 1e-9:
            violations.append(label + " (full)")
    ok &= not violations and orth_ok
    details.update(min_directional_ratio=worst_dir, min_full_ratio=worst_full,
                   orthogonal_pass=orth_ok, violations=violations)

    # full-norm Gaussians
    n1 = heisenberg_full(gaussian(sig, grid), r).ratio
    sig2 = Signature(2, 0)
    n2 = heisenberg_full(gaussian(sig2, Grid.box(-10.0, 10.0, 128, dim=2)), _root(sig2, "e1e2")).ratio
    details.update(full_ratio_n1=n1, full_ratio_n2=n2)
    ok &= abs(n1 - 1.0) <= 1e-4 and abs(n2 - 2.0) <= 1e-3
    return CriterionResult(8, "Heisenberg family", bool(ok), details)


# -- 9. kernel bound ------------------------------------------------------

def criterion_kernel_bound(trials: int = 10_000, seed: int = 9, max_n: int = 4, tol: float = 1e-12,
                           sigs: list[Signature] | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed)
    pool = []
    for sig in sigs if sigs is not None else signatures(max_n, 1):
        blades = enumerate_blade_roots(sig)
        if not blades:
            continue
        pool.extend((sig, r) for r in blades)
        pool.extend((sig, random_root(sig, rng)) for _ in range(5))
    if not pool:
        raise NotARoot("no square roots of -1 in the requested signatures")
    non_blade = sum(1 for _, r in pool if np.count_nonzero(r.i.coeffs) > 1)
    violations = 0
    worst = 0.0
    for _ in range(trials):
        sig, r = pool[rng.integers(len(pool))]
        x, a, b = (Multivector.vector(sig, rng.normal(size=sig.n)) for _ in range(3))
        mod = complex_kernel(x, a, b, r).modulus()
        bound = kernel_bound(x, b, r)
        worst = max(worst, mod / bound)
        if mod > bound + tol:
            violations += 1
    return CriterionResult(9, "complexified kernel bound", violations == 0, {
        "trials": trials, "violations": violations, "max_modulus_over_bound": worst,
        "roots_in_pool": len(pool), "non_blade_roots": non_blade,
    })


# -- 10. Hardy ------------------------------------------------------------

def criterion_hardy() -> CriterionResult:
    sig = Signature(0, 1)
    r = _root(sig, "e1")
    # wide enough that exp(-|x|^2 / 4) is below the bound slack at the edge
    grid = Grid.box(-12.0, 12.0, 512)
    details = {}
    ok = True
    for t in (0.25, 0.5, 1.0, 2.0):
        C = 1.01 * max(1.0, (2 * t) ** -0.5)
        rep = hardy_check(gaussian(sig, grid, k=t), r, t, 1.0 / (4.0 * t), C)
        good = (rep.hardy_class == "critical" and abs(rep.fitted_decay - t) <= 1e-3 * max(1.0, t)
                and rep.residual <= 1e-6)
        details[f"critical t={t}"] = {"class": rep.hardy_class, "fitted_decay": rep.fitted_decay, "residual": rep.residual}
        ok &= good
    f = gaussian(sig, grid)
    over = hardy_check(f, r, 0.7, 0.7, 1.0)
    under = hardy_check(f, r, 0.1, 0.1, 2.0)
    zero = hardy_check(SampledField.zeros(sig, grid), r, 1.0, 1.0, 1.0)
    details["over-claimed (0.7,0.7)"] = over.hardy_class
    details["subcritical (0.1,0.1)"] = under.hardy_class
    details["zero field (1,1)"] = {"class": zero.hardy_class, "conclusion_holds": zero.conclusion_holds}
    ok &= over.hardy_class == "hypotheses-violated"
    ok &= under.hardy_class == "subcritical"
    ok &= zero.hardy_class == "supercritical" and zero.conclusion_holds
    return CriterionResult(10, "Hardy classification", bool(ok), details)


# -- 11. parser -----------------------------------------------------------

# (text, coordinates, value); values worked out by hand
PARSER_CORPUS: list[tuple[str, tuple, float]] = [
    ("1+2*3", (), 7.0),
    ("(1+2)*3", (), 9.0),
    ("2^3^2", (), 512.0),
    ("(2^3)^2", (), 64.0),
    ("-2^2", (), -4.0),
    ("(-2)^2", (), 4.0),
    ("2^-1", (), 0.5),
    ("10/4", (), 2.5),
    ("10-4-3", (), 3.0),
    ("10-(4-3)", (), 9.0),
    ("2*3/4", (), 1.5),
    ("8/2/2", (), 2.0),
    ("--3", (), 3.0),
    ("-x1", (2.0,), -2.0),
    ("x1^2", (3.0,), 9.0),
    ("x1*x2", (3.0, 4.0), 12.0),
    ("x1^2+x2^2", (3.0, 4.0), 25.0),
    ("sqrt(x1^2+x2^2)", (3.0, 4.0), 5.0),
    ("exp(0)", (), 1.0),
    ("exp(-0.5*x1^2)", (0.0,), 1.0),
    ("sin(0)", (), 0.0),
    ("cos(0)", (), 1.0),
    ("cos(pi)", (), -1.0),
    ("abs(-7.5)", (), 7.5),
    ("abs(x1-x2)", (1.0, 4.0), 3.0),
    ("sqrt(16)", (), 4.0),
    ("pi", (), 3.141592653589793),
    ("e", (), 2.718281828459045),
    ("2*pi", (), 6.283185307179586),
    ("1.5e2", (), 150.0),
    (".5+.25", (), 0.75),
    ("3.", (), 3.0),
    ("x1^0", (7.0,), 1.0),
    ("x3", (1.0, 2.0, 3.0), 3.0),
    ("x1*x2*x3", (1.0, 2.0, 3.0), 6.0),
    ("(x1+x2)*(x1-x2)", (5.0, 3.0), 16.0),
    ("x1/x2", (1.0, 4.0), 0.25),
    ("2^10", (), 1024.0),
    ("4^0.5", (), 2.0),
    ("sin(x1)^2+cos(x1)^2", (0.0,), 1.0),
    ("-(1+2)", (), -3.0),
    ("3*-2", (), -6.0),
    ("3--2", (), 5.0),
    ("2^2*3", (), 12.0),
    ("2*3^2", (), 18.0),
    ("-3^2+10", (), 1.0),
    ("sqrt(abs(-9))", (), 3.0),
    ("1/(1+x1^2)", (1.0,), 0.5),
    ("  1 +   2 ", (), 3.0),
    ("100*x1/x2^2", (2.0, 10.0), 2.0),
]

# (text, byte offset of the error)
MALFORMED: list[tuple[str, int]] = [
    ("exp(", 4),
    ("1+", 2),
    ("(1+2", 4),
    ("1+*2", 2),
    ("2**3", 2),
    (")", 0),
    ("foo(1)", 0),
    ("1 2", 2),
    ("sin 1", 4),
    ("x1 + $", 5),
]


def criterion_parser() -> CriterionResult:
    failures = []
    for text, coords, value in PARSER_CORPUS:
        tree = parse_scalar_expr(text)
        printed = str(tree)
        again = parse_scalar_expr(printed)
        got = float(tree.evaluate(coords))
        if again != tree or str(again) != printed or got != value:
            failures.append({"text": text, "printed": printed, "value": got, "expected": value})
    bad = []
    for text, offset in MALFORMED:
        try:
            parse_scalar_expr(text)
            bad.append({"text": text, "offset": None})
        except ExprSyntaxError as exc:
            if exc.offset != offset:
                bad.append({"text": text, "offset": exc.offset, "expected": offset})
    passed = not failures and not bad and len(PARSER_CORPUS) == 50 and len(MALFORMED) == 10
    return CriterionResult(11, "expression parser", passed, {
        "expressions": len(PARSER_CORPUS), "malformed": len(MALFORMED),
        "evaluation_failures": failures, "offset_failures": bad,
    })


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_algebra,
    criterion_split,
    criterion_gaussian,
    criterion_parseval,
    criterion_inversion,
    criterion_fast_path,
    criterion_derivative,
    criterion_heisenberg,
    criterion_kernel_bound,
    criterion_hardy,
    criterion_parser,
]


def run_all(log: Callable[[str], None] | None = None) -> list[CriterionResult]:
    corpus = transform_corpus()
    results = []
    for fn in CRITERIA:
        if fn in (criterion_parseval, criterion_inversion):
            res = fn(corpus)
        else:
            res = fn()
        results.append(res)
        if log:
            log(res.line())
    return results
