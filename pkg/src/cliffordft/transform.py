"""Clifford-Fourier transform with respect to a square root of -1.

    F{f}(w) = int f(x) exp(-i u(x, w)) dx,   u(x, w) = sum_l x_l w_l

The kernel always multiplies ``f`` from the right.  The forward transform is
unnormalised and the inverse carries ``(2 pi)^-n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Multivector,
    Signature,
    SignatureMismatch,
    blade_name,
    gp_arrays,
    parse_multivector,
)
from .field import (
    Grid,
    GridError,
    KahanAccumulator,
    SampledField,
    directional_derivative,
    inner,
    norm_sq,
    warn_if_not_decaying,
)
from .report import VerificationReport
from .roots import ValidatedRoot, split_commuting, validate_root


@dataclass(frozen=True, eq=False)
class Spectrum:
    sig: Signature
    wgrid: Grid
    values: np.ndarray
    root: ValidatedRoot

    def as_field(self) -> SampledField:
        return SampledField(self.sig, self.wgrid, self.values)

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1, self.sig.dim)

    def modulus(self) -> np.ndarray:
        return np.sqrt(np.einsum("...i,...i->...", self.values, self.values))

    def to_dict(self) -> dict:
        return self.as_field().to_dict({"root": root_spelling(self.root), "domain": "frequency"})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj) -> "Spectrum":
        f = SampledField.from_dict(obj)
        root = validate_root(parse_multivector(obj["root"], f.sig))
        return cls(f.sig, f.grid, f.values, root)


def root_spelling(r: ValidatedRoot) -> str:
    nz = np.flatnonzero(r.i.coeffs)
    if len(nz) == 1 and abs(r.i.coeffs[nz[0]]) == 1.0:
        sign = "-" if r.i.coeffs[nz[0]] < 0 else ""
        return sign + blade_name(int(nz[0]))
    return r.i.to_json()


def frequency_grid(grid: Grid) -> Grid:
    """DFT-natural frequencies ``w_k = 2 pi k / (N h)``, ``k = -N//2 .. N - N//2 - 1``.

    Returned as a midpoint grid so that its nodes are exactly the ``w_k``.
    """
    lo, hi = [], []
    for s, h in zip(grid.shape, grid.spacing):
        hw = 2.0 * math.pi / (s * h)
        a = (-(s // 2) - 0.5) * hw
        lo.append(a)
        hi.append(a + s * hw)
    return Grid(tuple(lo), tuple(hi), grid.shape)


def _check_root(f_sig: Signature, r: ValidatedRoot):
    if f_sig != r.sig:
        raise SignatureMismatch(f"field in {f_sig}, root in {r.sig}")


def cft_at(f: SampledField, r: ValidatedRoot, ws: np.ndarray) -> np.ndarray:
    """Direct quadrature at arbitrary frequencies ``ws`` of shape ``(m, grid.n)``.

    Each frequency's sum runs over the spatial nodes in row-major order with
    compensated accumulation.  Returns coefficient rows, shape ``(m, 2**n)``.
    """
    _check_root(f.sig, r)
    ws = np.atleast_2d(np.asarray(ws, dtype=float))
    if ws.shape[1] != f.grid.n:
        raise GridError(f"frequencies have dimension {ws.shape[1]}, field grid {f.grid.n}")
    fx = f.flat()
    gx = fx @ r.right_matrix()
    acc = KahanAccumulator((len(ws), f.sig.dim))
    for x, fv, gv in zip(f.grid.points(), fx, gx):
        u = ws @ x
        acc.add(np.cos(u)[:, None] * fv - np.sin(u)[:, None] * gv)
    return f.grid.vol * acc.total


def cft_direct(f: SampledField, r: ValidatedRoot, wgrid: Grid | None = None) -> Spectrum:
    """Quadrature ``vol * sum_x f(x) (cos u - sin u i)`` at every node of ``wgrid``."""
    _check_root(f.sig, r)
    warn_if_not_decaying(f)
    if wgrid is None:
        wgrid = frequency_grid(f.grid)
    if wgrid.n != f.grid.n:
        raise GridError(f"frequency grid has dimension {wgrid.n}, field grid {f.grid.n}")
    values = cft_at(f, r, wgrid.points())
    return Spectrum(f.sig, wgrid, values.reshape(wgrid.shape + (f.sig.dim,)), r)


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def cft_fast(f: SampledField, r: ValidatedRoot) -> Spectrum:
    """FFT evaluation of the same quadrature on :func:`frequency_grid`.

    Each blade component gets one complex DFT ``c = C - jS``; the transform is
    then ``C{f} - S{f} i``.
    """
    _check_root(f.sig, r)
    if not all(_is_pow2(s) for s in f.grid.shape):
        raise GridError(f"fast transform needs power-of-two axes, got {f.grid.shape}")
    warn_if_not_decaying(f)
    axes = tuple(range(f.grid.n))
    wgrid = frequency_grid(f.grid)
    c = np.fft.fftshift(np.fft.fftn(f.values, axes=axes), axes=axes)
    # nodes start at x0, not 0
    phase = np.ones(f.grid.shape, dtype=complex)
    for d, (w, x0) in enumerate(zip(wgrid.axes(), (ax[0] for ax in f.grid.axes()))):
        shape = [1] * f.grid.n
        shape[d] = -1
        phase = phase * np.exp(-1j * x0 * w).reshape(shape)
    c = f.grid.vol * c * phase[..., None]
    cos_part = c.real
    sin_part = -c.imag
    values = cos_part - sin_part @ r.right_matrix()
    return Spectrum(f.sig, wgrid, values, r)


def cft(f: SampledField, r: ValidatedRoot, method: str = "auto") -> Spectrum:
    """Transform on the DFT-natural grid; ``auto`` uses the FFT when it can."""
    if method == "auto":
        method = "fast" if all(_is_pow2(s) for s in f.grid.shape) else "direct"
    if method == "fast":
        return cft_fast(f, r)
    if method == "direct":
        return cft_direct(f, r)
    raise ValueError(f"unknown method {method!r}")


def icft(spec: Spectrum, xgrid: Grid) -> SampledField:
    """Inverse ``(2 pi)^-n vol_w sum_w F(w) (cos u + sin u i)``."""
    if xgrid.n != spec.wgrid.n:
        raise GridError(f"spatial grid has dimension {xgrid.n}, spectrum {spec.wgrid.n}")
    fw = spec.flat()
    gw = fw @ spec.root.right_matrix()
    xs = xgrid.points()
    acc = KahanAccumulator((len(xs), spec.sig.dim))
    for w, fv, gv in zip(spec.wgrid.points(), fw, gw):
        u = xs @ w
        acc.add(np.cos(u)[:, None] * fv + np.sin(u)[:, None] * gv)
    scale = spec.wgrid.vol / (2.0 * math.pi) ** xgrid.n
    return SampledField(spec.sig, xgrid, (scale * acc.total).reshape(xgrid.shape + (spec.sig.dim,)))


# -- identity checks ------------------------------------------------------

def _max_dev(a: np.ndarray, b: np.ndarray) -> float:
    d = a - b
    return float(np.sqrt(np.einsum("...i,...i->...", d, d)).max(initial=0.0))


def _rel(dev: float, scale: float) -> float:
    return dev / scale if scale > 0 else dev


def check_parseval(f: SampledField, r: ValidatedRoot, tol: float = 1e-6, method: str = "auto") -> VerificationReport:
    """``||f||^2`` against ``(2 pi)^-n ||F f||^2`` (squared norms)."""
    spec = cft(f, r, method)
    lhs = norm_sq(f)
    rhs = norm_sq(spec.as_field()) / (2.0 * math.pi) ** f.grid.n
    dev = _rel(abs(lhs - rhs), abs(lhs))
    return VerificationReport(
        "parseval", lhs, rhs, tol, dev <= tol, diagnostics={"relative_deviation": dev}
    )


def check_plancherel(f: SampledField, g: SampledField, r: ValidatedRoot, tol: float = 1e-6, method: str = "auto") -> VerificationReport:
    lhs = inner(f, g)[1]
    rhs = inner(cft(f, r, method).as_field(), cft(g, r, method).as_field())[1] / (2.0 * math.pi) ** f.grid.n
    scale = math.sqrt(norm_sq(f) * norm_sq(g))
    dev = _rel(abs(lhs - rhs), scale)
    return VerificationReport(
        "plancherel", lhs, rhs, tol, dev <= tol, diagnostics={"relative_deviation": dev}
    )


def check_inversion(f: SampledField, r: ValidatedRoot, tol: float = 1e-6, method: str = "auto") -> VerificationReport:
    back = icft(cft(f, r, method), f.grid)
    err = _max_dev(back.values, f.values)
    return VerificationReport(
        "inversion", err, tol, tol, err <= tol, diagnostics={"max_error": err, "peak": f.max_modulus()}
    )


def check_fast_vs_direct(f: SampledField, r: ValidatedRoot, tol: float = 1e-9) -> VerificationReport:
    fast = cft_fast(f, r)
    direct = cft_direct(f, r, fast.wgrid)
    scale = float(np.abs(direct.values).max(initial=0.0))
    dev = _rel(_max_dev(fast.values, direct.values), scale)
    return VerificationReport(
        "fast-vs-direct", dev, tol, tol, dev <= tol, diagnostics={"relative_max_deviation": dev}
    )


def _reflect(f: SampledField) -> SampledField:
    """``x -> f(-x)`` as a field on the mirrored grid."""
    g = f.grid
    grid = Grid(tuple(-b for b in g.max), tuple(-a for a in g.min), g.shape)
    vals = np.flip(f.values, axis=tuple(range(g.n)))
    return SampledField(f.sig, grid, vals)


def check_scaling(f: SampledField, a: float, r: ValidatedRoot, tol: float = 1e-6) -> VerificationReport:
    """Compare ``F{f(a .)}(w)`` with ``|a|^-n F{f}(w / a)``.

    Samples of ``f(a x)`` on the grid ``x / a`` are the samples of ``f``, so
    the dilated field reuses ``f.values`` on a rescaled grid.
    """
    if a == 0:
        raise ValueError("scaling factor must be nonzero")
    n = f.grid.n
    base = _reflect(f) if a < 0 else f
    dilated = SampledField(f.sig, base.grid.scaled(1.0 / abs(a)), base.values)
    ws = frequency_grid(dilated.grid).points()
    lhs = cft_at(dilated, r, ws)
    rhs = cft_at(f, r, ws / a) / abs(a) ** n
    scale = float(np.sqrt(np.einsum("ij,ij->i", rhs, rhs)).max(initial=0.0))
    dev = _rel(_max_dev(lhs, rhs), scale)
    return VerificationReport(
        "scaling", dev, tol, tol, dev <= tol, diagnostics={"a": a, "relative_max_deviation": dev}
    )


def _l2(grid: Grid, values: np.ndarray) -> float:
    return math.sqrt(grid.vol * float(np.sum(values * values)))


def check_derivative_property(
    f: SampledField, a: Multivector, r: ValidatedRoot, tol: float = 5e-3, method: str = "auto"
) -> VerificationReport:
    """``F{a . grad f}(w)`` against ``(a * ~w) F{f}(w) i``; relative L2 deviation."""
    lhs = cft(directional_derivative(f, a), r, method)
    spec = cft(f, r, method)
    comps = a.vector_components()[: f.grid.n]
    weight = sum(c * m for c, m in zip(comps, spec.wgrid.mesh()))
    rhs = weight[..., None] * (spec.values @ r.right_matrix())
    num = _l2(spec.wgrid, lhs.values - rhs)
    den = _l2(spec.wgrid, rhs)
    dev = _rel(num, den)
    return VerificationReport(
        "derivative",
        num,
        den,
        tol,
        dev <= tol,
        ratio=dev,
        diagnostics={"relative_l2_deviation": dev, "shape": list(f.grid.shape)},
    )


def check_linearity(
    h1: SampledField,
    h2: SampledField,
    alpha: Multivector,
    beta: Multivector,
    r: ValidatedRoot,
    tol: float = 1e-9,
    method: str = "auto",
) -> VerificationReport:
    """Left linearity, and right linearity through the split of the constants.

    ``F^i{h a} = F^i{h} a_+ + F^{-i}{h} a_-`` where ``a_+`` commutes with ``i``
    and ``a_-`` anticommutes.
    """
    neg = validate_root(r.i_inv)
    sig = h1.sig

    def spec(h, root):
        return cft(h, root, method).values

    left = spec(alpha * h1 + beta * h2, r)
    left_ref = gp_arrays(sig, alpha.coeffs, spec(h1, r)) + gp_arrays(sig, beta.coeffs, spec(h2, r))

    a_p, a_m = split_commuting(alpha, r)
    b_p, b_m = split_commuting(beta, r)
    right = spec(h1 * alpha + h2 * beta, r)
    right_ref = (
        gp_arrays(sig, spec(h1, r), a_p.coeffs)
        + gp_arrays(sig, spec(h1, neg), a_m.coeffs)
        + gp_arrays(sig, spec(h2, r), b_p.coeffs)
        + gp_arrays(sig, spec(h2, neg), b_m.coeffs)
    )
    scale_l = float(np.abs(left_ref).max(initial=0.0))
    scale_r = float(np.abs(right_ref).max(initial=0.0))
    dev_l = _rel(_max_dev(left, left_ref), scale_l)
    dev_r = _rel(_max_dev(right, right_ref), scale_r)
    dev = max(dev_l, dev_r)
    return VerificationReport(
        "linearity",
        dev,
        tol,
        tol,
        dev <= tol,
        diagnostics={"left_relative_deviation": dev_l, "right_relative_deviation": dev_r},
    )
