"""Heisenberg-type inequalities and the Hardy decay classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import Multivector, NotAVector
from .field import SampledField, integrate_scalar
from .report import VerificationReport, plain
from .roots import ValidatedRoot
from .transform import Spectrum, cft

INEQUALITY_TOL = 1e-9
EQUALITY_TOL = 1e-4
HARDY_SLACK = 1e-12
CRITICAL_TOL = 1e-12
ZERO_CONCLUSION_TOL = 1e-8
FIT_FLOOR = 1e-300


class UnfittableField(ValueError):
    pass


def _weights(a: Multivector, f: SampledField, mesh) -> np.ndarray:
    if not a.is_vector():
        raise NotAVector("direction must be a grade-1 vector")
    comps = a.vector_components()[: f.grid.n]
    return sum(c * m for c, m in zip(comps, mesh))


def _restricted_pairing(a: Multivector, b: Multivector, m: int) -> float:
    return float(np.dot(a.vector_components()[:m], b.vector_components()[:m]))


def _mod_sq(values: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", values, values)


def _moments(f: SampledField, spec: Spectrum, xw: np.ndarray, ww: np.ndarray) -> tuple[float, float, float]:
    """Spatial moment, normalised spectral moment and energy ``F``."""
    m = f.grid.n
    fx2 = _mod_sq(f.values)
    spatial = integrate_scalar(f.grid, xw * fx2)
    spectral = integrate_scalar(spec.wgrid, ww * _mod_sq(spec.values)) / (2.0 * math.pi) ** m
    energy = integrate_scalar(f.grid, fx2)
    return spatial, spectral, energy


def heisenberg_directional(
    f: SampledField,
    r: ValidatedRoot,
    a: Multivector,
    b: Multivector,
    tol: float = INEQUALITY_TOL,
    method: str = "auto",
    spectrum: Spectrum | None = None,
) -> VerificationReport:
    """Directional uncertainty inequality along ``a`` in space and ``b`` in frequency.

    ``lhs = int (a*x)^2 |f|^2  *  (2 pi)^-n int (b*w)^2 |F f|^2`` and
    ``rhs = (a * ~b)^2 F^2 / 4`` with ``F = int |f|^2``.  Passes when
    ``lhs >= rhs (1 - tol)``.
    """
    spec = spectrum if spectrum is not None else cft(f, r, method)
    xa = _weights(a, f, f.grid.mesh())
    wb = _weights(b, f, spec.wgrid.mesh())
    spatial, spectral, energy = _moments(f, spec, xa * xa, wb * wb)
    ab = _restricted_pairing(a, b, f.grid.n)
    lhs = spatial * spectral
    rhs = ab * ab * energy * energy / 4.0
    return VerificationReport(
        "heisenberg-directional",
        lhs,
        rhs,
        tol,
        lhs >= rhs * (1.0 - tol),
        diagnostics={
            "F": energy,
            "spatial_moment": spatial,
            "spectral_moment": spectral,
            "pairing_ab": ab,
        },
    )


def heisenberg_equality_gap(
    f: SampledField,
    r: ValidatedRoot,
    a: Multivector,
    normalize: bool = True,
    tol: float = EQUALITY_TOL,
    method: str = "auto",
) -> VerificationReport:
    """``|ratio - 1|`` for the unit-direction case ``b = a``."""
    norm = a.modulus()
    if norm == 0:
        raise ValueError("direction must be nonzero")
    if normalize:
        a = a / norm
    elif abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction has modulus {norm}, expected 1")
    rep = heisenberg_directional(f, r, a, a, method=method)
    gap = abs(rep.ratio - 1.0)
    rep.name = "heisenberg-equality"
    rep.tolerance = tol
    rep.passed = gap <= tol
    rep.diagnostics["gap"] = gap
    return rep


def heisenberg_full(
    f: SampledField,
    r: ValidatedRoot,
    tol: float = INEQUALITY_TOL,
    method: str = "auto",
    spectrum: Spectrum | None = None,
) -> VerificationReport:
    """Full-norm form: ``int |x|^2|f|^2 (2 pi)^-n int |w|^2 |F f|^2 >= n F^2 / 4``."""
    spec = spectrum if spectrum is not None else cft(f, r, method)
    m = f.grid.n
    # |x|^2 as the sum of squared pairings with e_1 .. e_m
    x2 = sum(c * c for c in f.grid.mesh())
    w2 = sum(c * c for c in spec.wgrid.mesh())
    spatial, spectral, energy = _moments(f, spec, x2, w2)
    lhs = spatial * spectral
    rhs = m * energy * energy / 4.0
    return VerificationReport(
        "heisenberg-full",
        lhs,
        rhs,
        tol,
        lhs >= rhs * (1.0 - tol),
        diagnostics={"F": energy, "spatial_moment": spatial, "spectral_moment": spectral, "n": m},
    )


def gaussian_fit(f: SampledField) -> tuple[Multivector, float, float]:
    """Fit ``f ~ A exp(-d |x|^2)``.

    The decay comes from weighted least squares of ``log|f|`` against
    ``|x|^2`` with weights ``|f|``; each blade of ``A`` is then a plain least
    squares fit at that decay.

    Returns:
        ``(A, d, residual)`` where ``residual`` is the weighted RMS error of
        the log model.
    """
    mod = f.modulus().ravel()
    keep = mod > FIT_FLOOR
    if not keep.any():
        raise UnfittableField("field vanishes everywhere")
    r2 = f.grid.radius_sq().ravel()
    w = mod[keep]
    y = np.log(mod[keep])
    design = np.stack([np.ones_like(y), -r2[keep]], axis=1)
    sw = np.sqrt(w)
    (logamp, decay), *_ = np.linalg.lstsq(design * sw[:, None], y * sw, rcond=None)
    err = y - design @ np.array([logamp, decay])
    residual = math.sqrt(float(np.sum(w * err * err) / np.sum(w)))
    g = np.exp(-decay * r2)
    amp = (f.flat() * g[:, None]).sum(axis=0) / float(np.dot(g, g))
    return Multivector(f.sig, amp), float(decay), residual


@dataclass
class HardyReport:
    hardy_class: str
    p: float
    q: float
    C: float
    fitted_decay: float
    fitted_amplitude: Multivector | None
    residual: float
    min_valid_C_spatial: float
    min_valid_C_spectral: float
    hypotheses_hold: bool
    conclusion_holds: bool
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": "hardy",
            "class": self.hardy_class,
            "p": self.p,
            "q": self.q,
            "C": self.C,
            "fitted_decay": self.fitted_decay,
            "fitted_amplitude": plain(self.fitted_amplitude),
            "residual": self.residual,
            "min_valid_C_spatial": self.min_valid_C_spatial,
            "min_valid_C_spectral": self.min_valid_C_spectral,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_holds": self.conclusion_holds,
            "pass": self.passed,
            "diagnostics": plain(self.diagnostics),
        }

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (
            f"[{flag}] hardy p={self.p:g} q={self.q:g} C={self.C:g}: class={self.hardy_class} "
            f"decay={self.fitted_decay:.6g} residual={self.residual:.3g}"
        )


def _min_valid_constant(mod: np.ndarray, r2: np.ndarray, decay: float, slack: float) -> float:
    """Smallest C with ``mod <= C exp(-decay r2) + slack`` at every node."""
    excess = mod - slack
    hit = excess > 0
    if not hit.any():
        return 0.0
    logc = np.log(excess[hit]) + decay * r2[hit]
    top = float(logc.max())
    return math.exp(top) if top < 709.0 else math.inf


def hardy_check(
    f: SampledField,
    r: ValidatedRoot,
    p: float,
    q: float,
    C: float,
    method: str = "auto",
    spectral_normalization: str = "unitary",
) -> HardyReport:
    """Test the two Gaussian decay hypotheses and what they imply.

    ``p`` and ``q`` are the claimed spatial and spectral decay rates.  The
    spectral bound is applied to ``(2 pi)^(-n/2) F f`` by default
    (``spectral_normalization="none"`` uses ``F f`` itself); the
    classification does not depend on the constant.

    The report passes unless the hypotheses hold and the predicted
    conclusion fails: ``f = 0`` for ``pq > 1/4``, a Gaussian of decay ``p``
    for ``pq = 1/4``, nothing for ``pq < 1/4``.
    """
    if min(p, q, C) <= 0:
        raise ValueError("p, q and C must all be positive")
    if spectral_normalization not in ("unitary", "none"):
        raise ValueError(f"unknown spectral normalization {spectral_normalization!r}")
    m = f.grid.n
    spec = cft(f, r, method)
    scale = (2.0 * math.pi) ** (-m / 2.0) if spectral_normalization == "unitary" else 1.0
    fmod = f.modulus().ravel()
    smod = scale * spec.modulus().ravel()
    xr2 = f.grid.radius_sq().ravel()
    wr2 = spec.wgrid.radius_sq().ravel()

    spatial_ok = bool(np.all(fmod <= C * np.exp(-p * xr2) + HARDY_SLACK))
    spectral_ok = bool(np.all(smod <= C * np.exp(-q * wr2) + HARDY_SLACK))
    c_spatial = _min_valid_constant(fmod, xr2, p, HARDY_SLACK)
    c_spectral = _min_valid_constant(smod, wr2, q, HARDY_SLACK)

    peak = float(fmod.max())
    amp, decay, residual = None, math.nan, math.nan
    if peak > FIT_FLOOR:
        amp, decay, residual = gaussian_fit(f)

    diagnostics = {
        "pq": p * q,
        "max_abs_f": peak,
        "spatial_bound_holds": spatial_ok,
        "spectral_bound_holds": spectral_ok,
        "spectral_normalization": spectral_normalization,
    }
    hypotheses = spatial_ok and spectral_ok
    pq = p * q
    if not hypotheses:
        cls = "hypotheses-violated"
        conclusion = True
    elif abs(pq - 0.25) <= CRITICAL_TOL:
        cls = "critical"
        if amp is None:
            # the zero field is A exp(-p|x|^2) with A = 0
            conclusion = True
        else:
            decay_err = abs(decay - p)
            g = np.exp(-p * xr2)
            a_at_p = (f.flat() * g[:, None]).sum(axis=0) / float(np.dot(g, g))
            model = g[:, None] * a_at_p
            model_res = math.sqrt(float(np.sum((f.flat() - model) ** 2)) / float(np.sum(f.flat() ** 2)))
            diagnostics.update(
                decay_error=decay_err,
                amplitude_at_claimed_decay=Multivector(f.sig, a_at_p),
                model_relative_residual=model_res,
            )
            conclusion = decay_err <= 1e-3 * max(1.0, p) and residual <= 1e-6
    elif pq > 0.25:
        cls = "supercritical"
        conclusion = peak <= ZERO_CONCLUSION_TOL * C
    else:
        cls = "subcritical"
        conclusion = True
    return HardyReport(
        hardy_class=cls,
        p=p,
        q=q,
        C=C,
        fitted_decay=decay,
        fitted_amplitude=amp,
        residual=residual,
        min_valid_C_spatial=c_spatial,
        min_valid_C_spectral=c_spectral,
        hypotheses_hold=hypotheses,
        conclusion_holds=bool(conclusion),
        passed=bool(conclusion),
        diagnostics=diagnostics,
    )
