"""Square roots of -1, the commuting/anticommuting split, and CFT kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Multivector,
    Signature,
    SignatureMismatch,
    gp_arrays,
    left_mul_matrix,
    pairing,
    reverse_arrays,
    right_mul_matrix,
    tables,
)

ROOT_TOL = 1e-12


class NotARoot(ValueError):
    """``i * i`` differs from -1."""


class ReverseConditionFailed(ValueError):
    """``~i`` differs from ``-i``."""


@dataclass(frozen=True, eq=False)
class ValidatedRoot:
    """A multivector ``i`` with ``i^2 = -1`` and ``~i = -i``."""

    i: Multivector
    i_inv: Multivector
    modulus_sq: float

    @property
    def sig(self) -> Signature:
        return self.i.sig

    def negated(self) -> "ValidatedRoot":
        return ValidatedRoot(self.i_inv, self.i, self.modulus_sq)

    def right_matrix(self) -> np.ndarray:
        """Matrix applying ``A -> A i`` to row-vector coefficient arrays."""
        return right_mul_matrix(self.sig, self.i.coeffs)

    def left_matrix(self) -> np.ndarray:
        return left_mul_matrix(self.sig, self.i.coeffs)


def validate_root(m: Multivector, tol: float = ROOT_TOL) -> ValidatedRoot:
    sig = m.sig
    minus_one = np.zeros(sig.dim)
    minus_one[0] = -1.0
    sq = gp_arrays(sig, m.coeffs, m.coeffs)
    if np.max(np.abs(sq - minus_one)) > tol:
        raise NotARoot(f"{m!r} squares to {Multivector(sig, sq)!r}, not -1")
    rev = reverse_arrays(sig, m.coeffs)
    if np.max(np.abs(rev + m.coeffs)) > tol:
        raise ReverseConditionFailed(f"reverse of {m!r} is not its negative")
    return ValidatedRoot(m, -m, float(np.dot(m.coeffs, m.coeffs)))


def enumerate_blade_roots(sig: Signature) -> list[ValidatedRoot]:
    """All positively oriented basis blades that validate, by ascending mask."""
    t = tables(sig)
    out = []
    for mask in range(sig.dim):
        # e_A^2 = sign[A, 0]; the reverse sign must be -1
        if t.sign[mask, 0] == -1 and t.reverse[mask] == -1:
            out.append(validate_root(Multivector.blade(sig, mask)))
    return out


def random_root(sig: Signature, rng: np.random.Generator) -> ValidatedRoot:
    """A unit combination of pairwise anticommuting blade roots.

    With distinct anticommuting roots r_k, ``(sum c_k r_k)^2 = -sum c_k^2``, so
    unit coefficient vectors give roots that are generally not blades.
    """
    blades = enumerate_blade_roots(sig)
    if not blades:
        raise NotARoot(f"{sig} has no blade roots of -1")
    order = rng.permutation(len(blades))
    chosen: list[Multivector] = []
    for k in order:
        r = blades[k].i
        if all(np.all((r * c + c * r).coeffs == 0) for c in chosen):
            chosen.append(r)
    c = rng.normal(size=len(chosen))
    c /= np.linalg.norm(c)
    coeffs = sum(ck * r.coeffs for ck, r in zip(c, chosen))
    return validate_root(Multivector(sig, coeffs), tol=1e-10)


def split_commuting(a: Multivector, r: ValidatedRoot) -> tuple[Multivector, Multivector]:
    """Split ``a`` into the parts commuting and anticommuting with ``r.i``."""
    if a.sig != r.sig:
        raise SignatureMismatch(f"{a.sig} vs {r.sig}")
    conj = r.i_inv * a * r.i
    return (a + conj) * 0.5, (a - conj) * 0.5


def split_arrays(a: np.ndarray, r: ValidatedRoot) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`split_commuting` on coefficient rows."""
    conj = a @ r.right_matrix() @ left_mul_matrix(r.sig, r.i_inv.coeffs)
    return 0.5 * (a + conj), 0.5 * (a - conj)


def kernel(u: float, r: ValidatedRoot) -> Multivector:
    """``exp(-i u) = cos(u) - sin(u) i``."""
    return math.cos(u) - math.sin(u) * r.i


@dataclass(frozen=True)
class ComplexMultivector:
    """``re + j im`` in the complexified algebra."""

    re: Multivector
    im: Multivector

    def reverse(self) -> "ComplexMultivector":
        return ComplexMultivector(self.re.reverse(), -self.im.reverse())

    def modulus_sq(self) -> float:
        return float(np.dot(self.re.coeffs, self.re.coeffs) + np.dot(self.im.coeffs, self.im.coeffs))

    def modulus(self) -> float:
        return math.sqrt(self.modulus_sq())


def complex_kernel(x: Multivector, a: Multivector, b: Multivector, r: ValidatedRoot) -> ComplexMultivector:
    """``exp(-i u(x, z))`` for the complex frequency ``z = a + j b``.

    ``u(x, z) = u(x, a) - j u(x, b)``; cos and sin of that complex scalar are
    taken with ordinary complex arithmetic.
    """
    uz = complex(pairing(x, a), -pairing(x, b))
    c = np.cos(uz)
    s = np.sin(uz)
    one = Multivector.scalar(r.sig, 1.0)
    return ComplexMultivector(c.real * one - s.real * r.i, c.imag * one - s.imag * r.i)


def kernel_bound(x: Multivector, b: Multivector, r: ValidatedRoot) -> float:
    """Upper bound ``(1 + |i|^2)^(1/2) exp(|x| |b|)`` on the complex kernel."""
    return math.sqrt(1.0 + r.modulus_sq) * math.exp(x.modulus() * b.modulus())
