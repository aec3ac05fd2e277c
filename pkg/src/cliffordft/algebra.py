"""Dense real Clifford algebra Cl(p, q).

Blades are addressed by bitmask: bit ``l - 1`` set means generator ``e_l`` is
present, and the blade is the ascending product ``e_{i1} ... e_{ik}``.
Every multivector stores all ``2**n`` coefficients.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

MAX_DIM = 10

_BLADE_RE = re.compile(r"^(?:e(\d+))+$")
_GENERATOR_RE = re.compile(r"e(\d+)")


class SignatureMismatch(ValueError):
    """Raised when operands live in different algebras."""


class NotAVector(ValueError):
    """Raised when a grade-1 argument carries other grades."""


@dataclass(frozen=True)
class Signature:
    p: int
    q: int = 0

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be nonnegative, got ({self.p}, {self.q})")
        if self.p + self.q > MAX_DIM:
            raise ValueError(f"n = p + q must be <= {MAX_DIM}, got {self.p + self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    def metric(self, k: int) -> int:
        """Square of generator ``e_k`` (1-based)."""
        if not 1 <= k <= self.n:
            raise ValueError(f"generator index {k} out of range for n={self.n}")
        return 1 if k <= self.p else -1

    @classmethod
    def parse(cls, text: str) -> "Signature":
        parts = text.replace(" ", "").split(",")
        if len(parts) != 2:
            raise ValueError(f"signature must be 'p,q', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self):
        return f"Cl({self.p},{self.q})"


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def _swap_count(a: int, b: int) -> int:
    # transpositions needed to merge the generator words of a and b
    a >>= 1
    total = 0
    while a:
        total += grade_of(a & b)
        a >>= 1
    return total


def blade_mul(a: int, b: int, sig: Signature) -> tuple[int, int]:
    """Product of two basis blades.

    Returns:
        ``(sign, mask)`` with ``e_a e_b = sign * e_mask``.
    """
    sign = -1 if _swap_count(a, b) & 1 else 1
    shared = a & b
    # bits p..n-1 are the generators squaring to -1
    negative = shared >> sig.p
    if grade_of(negative) & 1:
        sign = -sign
    return sign, a ^ b


@dataclass(frozen=True)
class _Tables:
    sign: np.ndarray        # sign[a, c] = coefficient of e_c in e_a e_(a^c)
    partner: np.ndarray     # partner[a, c] = a ^ c
    grades: np.ndarray
    reverse: np.ndarray


@lru_cache(maxsize=None)
def tables(sig: Signature) -> _Tables:
    d = sig.dim
    idx = np.arange(d)
    partner = idx[:, None] ^ idx[None, :]
    sign = np.empty((d, d), dtype=np.int8)
    for a in range(d):
        for c in range(d):
            sign[a, c] = blade_mul(a, a ^ c, sig)[0]
    grades = np.array([grade_of(m) for m in range(d)])
    rev = np.empty(d, dtype=np.int8)
    for m in range(d):
        k = grades[m]
        s = -1 if (k * (k - 1) // 2) & 1 else 1
        if grade_of(m >> sig.p) & 1:
            s = -s
        rev[m] = s
    for arr in (sign, partner, grades, rev):
        arr.setflags(write=False)
    return _Tables(sign, partner, grades, rev)


# -- array-level kernels; trailing axis holds the 2**n coefficients --------

def gp_arrays(sig: Signature, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Geometric product of coefficient arrays, broadcasting leading axes."""
    t = tables(sig)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    batch = int(np.prod(shape, dtype=int))
    if batch >= 64:
        return _gp_batched(t, np.broadcast_to(a, shape + (sig.dim,)), np.broadcast_to(b, shape + (sig.dim,)))
    out = np.zeros(shape + (sig.dim,))
    for k in range(sig.dim):
        ak = a[..., k : k + 1]
        if not ak.any():
            continue
        out += ak * t.sign[k] * b[..., t.partner[k]]
    return out


def _gp_batched(t: _Tables, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # coefficient-major layout so that the partner gather moves whole rows
    d = a.shape[-1]
    at = np.ascontiguousarray(a.reshape(-1, d).T)
    bt = np.ascontiguousarray(b.reshape(-1, d).T)
    sign = t.sign.astype(float)[:, :, None]
    out = np.zeros_like(at)
    tmp = np.empty_like(at)
    for k in range(d):
        if not at[k].any():
            continue
        np.multiply(bt[t.partner[k]], sign[k], out=tmp)
        tmp *= at[k]
        out += tmp
    return out.T.reshape(a.shape)


def right_mul_matrix(sig: Signature, r: np.ndarray) -> np.ndarray:
    """Matrix ``R`` with ``A @ R == gp_arrays(sig, A, r)``."""
    t = tables(sig)
    return t.sign * np.asarray(r, dtype=float)[t.partner]


def left_mul_matrix(sig: Signature, r: np.ndarray) -> np.ndarray:
    """Matrix ``L`` with ``B @ L == gp_arrays(sig, r, B)``."""
    t = tables(sig)
    r = np.asarray(r, dtype=float)
    mat = np.zeros((sig.dim, sig.dim))
    for k in range(sig.dim):
        if r[k]:
            # (r B)_c collects r_k * sign(k, c) * B_(k^c)
            mat[t.partner[k], np.arange(sig.dim)] += r[k] * t.sign[k]
    return mat


def reverse_arrays(sig: Signature, a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * tables(sig).reverse


def grade_arrays(sig: Signature, a: np.ndarray, k: int) -> np.ndarray:
    return np.where(tables(sig).grades == k, np.asarray(a, dtype=float), 0.0)


def modulus_sq_arrays(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.einsum("...i,...i->...", a, a)


# -- blade spelling ----------------------------------------------------------

def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"e{l + 1}" for l in range(mask.bit_length()) if mask >> l & 1)


def blade_mask(name: str, sig: Signature) -> int:
    """Parse ``"1"``, ``"e1"``, ``"e1e2"`` ... into a bitmask.

    Generators must be distinct, ascending, and exist in ``sig``.
    """
    name = name.strip()
    if name == "1":
        return 0
    if not _BLADE_RE.match(name):
        raise ValueError(f"malformed blade name {name!r}")
    idx = [int(g) for g in _GENERATOR_RE.findall(name)]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"blade {name!r} must list distinct generators in ascending order")
    mask = 0
    for l in idx:
        if not 1 <= l <= sig.n:
            raise ValueError(f"no generator e{l} in {sig}")
        mask |= 1 << (l - 1)
    return mask


class Multivector:
    """Immutable element of Cl(p, q) with dense coefficients."""

    __slots__ = ("sig", "coeffs")
    __array_priority__ = 1000

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (sig.dim,):
            raise ValueError(f"expected {sig.dim} coefficients for {sig}, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls(sig, np.zeros(sig.dim))

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> "Multivector":
        c = np.zeros(sig.dim)
        c[0] = value
        return cls(sig, c)

    @classmethod
    def blade(cls, sig: Signature, name, value: float = 1.0) -> "Multivector":
        mask = name if isinstance(name, (int, np.integer)) else blade_mask(name, sig)
        c = np.zeros(sig.dim)
        c[mask] = value
        return cls(sig, c)

    @classmethod
    def vector(cls, sig: Signature, components: Iterable[float]) -> "Multivector":
        comps = list(components)
        if len(comps) > sig.n:
            raise ValueError(f"{len(comps)} vector components given for n={sig.n}")
        c = np.zeros(sig.dim)
        for l, v in enumerate(comps):
            c[1 << l] = v
        return cls(sig, c)

    @classmethod
    def from_blades(cls, sig: Signature, coeffs: Mapping[str, float]) -> "Multivector":
        c = np.zeros(sig.dim)
        for name, v in coeffs.items():
            c[blade_mask(name, sig)] += float(v)
        return cls(sig, c)

    # structure
    def _check(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def _coerce(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.sig, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if np.isscalar(other):
            return Multivector(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.sig, self.coeffs / float(other))
        return NotImplemented

    def __xor__(self, other):
        return outer_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __getitem__(self, name):
        if isinstance(name, str):
            name = blade_mask(name, self.sig)
        return float(self.coeffs[name])

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def reverse(self) -> "Multivector":
        return principle_reverse(self)

    def modulus(self) -> float:
        return modulus(self)

    def allclose(self, other: "Multivector", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def is_vector(self) -> bool:
        return not np.any(self.coeffs[tables(self.sig).grades != 1])

    def vector_components(self) -> np.ndarray:
        """Coefficients ``x^1 .. x^n`` of a grade-1 multivector."""
        if not self.is_vector():
            raise NotAVector(f"{self!r} is not a pure vector")
        return np.array([self.coeffs[1 << l] for l in range(self.sig.n)])

    def as_dict(self) -> dict:
        return {blade_name(m): float(v) for m, v in enumerate(self.coeffs) if v != 0.0}

    def to_json(self) -> str:
        return json.dumps({"p": self.sig.p, "q": self.sig.q, "coeffs": self.as_dict()})

    @classmethod
    def from_json(cls, text) -> "Multivector":
        obj = json.loads(text) if isinstance(text, str) else text
        return cls.from_blades(Signature(int(obj["p"]), int(obj["q"])), obj.get("coeffs", {}))

    def __repr__(self):
        terms = [f"{float(v)!r}*{blade_name(m)}" if m else repr(float(v)) for m, v in enumerate(self.coeffs) if v]
        body = " + ".join(terms) if terms else "0"
        return f"Multivector[{self.sig}]({body})"


def parse_multivector(text: str, sig: Signature) -> Multivector:
    """Accept a blade spelling (``"e1e2"``, ``"-e1"``) or multivector JSON."""
    text = text.strip()
    if text.startswith("{"):
        mv = Multivector.from_json(text)
        if mv.sig != sig:
            raise SignatureMismatch(f"JSON multivector is in {mv.sig}, expected {sig}")
        return mv
    sign = 1.0
    if text.startswith("-"):
        sign, text = -1.0, text[1:]
    return Multivector.blade(sig, text, sign)


def geometric_product(m: Multivector, n: Multivector) -> Multivector:
    m._check(n)
    return Multivector(m.sig, gp_arrays(m.sig, m.coeffs, n.coeffs))


def grade_project(m: Multivector, k: int) -> Multivector:
    if not 0 <= k <= m.sig.n:
        raise ValueError(f"grade {k} out of range 0..{m.sig.n}")
    return Multivector(m.sig, grade_arrays(m.sig, m.coeffs, k))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """Wedge product: sum over grade pairs of ``<<a>_k <b>_s>_{k+s}``."""
    a._check(b)
    sig = a.sig
    out = np.zeros(sig.dim)
    for k in range(sig.n + 1):
        ak = grade_arrays(sig, a.coeffs, k)
        if not ak.any():
            continue
        for s in range(sig.n + 1 - k):
            bs = grade_arrays(sig, b.coeffs, s)
            if bs.any():
                out += grade_arrays(sig, gp_arrays(sig, ak, bs), k + s)
    return Multivector(sig, out)


def scalar_product(a: Multivector, b: Multivector) -> float:
    """``a * b = <ab>_0``."""
    a._check(b)
    t = tables(a.sig)
    # <ab>_0 only pairs blade c with itself
    return float(np.sum(a.coeffs * b.coeffs * t.sign[:, 0]))


def principle_reverse(m: Multivector) -> Multivector:
    return Multivector(m.sig, reverse_arrays(m.sig, m.coeffs))


def star_tilde(m: Multivector, n: Multivector) -> float:
    """Coefficient pairing ``sum_A m_A n_A``, equal to ``<m ~n>_0``."""
    m._check(n)
    return float(np.dot(m.coeffs, n.coeffs))


def modulus(m: Multivector) -> float:
    return float(np.sqrt(np.dot(m.coeffs, m.coeffs)))


def pairing(a: Multivector, b: Multivector) -> float:
    """Euclidean pairing ``sum_l a^l b^l`` of two vectors.

    This is the phase ``u(x, w) = x * ~w`` and the weight used by every
    uncertainty check; it ignores the metric signs.
    """
    a._check(b)
    return float(np.dot(a.vector_components(), b.vector_components()))
