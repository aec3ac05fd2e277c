"""Multivector-valued functions sampled on uniform midpoint grids."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    Multivector,
    NotAVector,
    Signature,
    SignatureMismatch,
    blade_mask,
    blade_name,
    gp_arrays,
    reverse_arrays,
)
from .expr import EvaluationError, Expr, parse_scalar_expr

MAX_GRID_DIM = 3


class GridError(ValueError):
    pass


class BoundaryDecayWarning(UserWarning):
    """The field is not negligible on the edge of its box."""


@dataclass(frozen=True)
class Grid:
    """Cell-centred grid on a box: node ``k`` of axis ``d`` is at
    ``min[d] + (k + 1/2) * h[d]`` with ``h[d] = (max[d] - min[d]) / shape[d]``.
    """

    min: tuple[float, ...]
    max: tuple[float, ...]
    shape: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "min", tuple(float(v) for v in self.min))
        object.__setattr__(self, "max", tuple(float(v) for v in self.max))
        object.__setattr__(self, "shape", tuple(int(v) for v in self.shape))
        if not (len(self.min) == len(self.max) == len(self.shape)):
            raise GridError("min, max and shape must have the same length")
        if not 1 <= len(self.shape) <= MAX_GRID_DIM:
            raise GridError(f"grid dimension must be 1..{MAX_GRID_DIM}, got {len(self.shape)}")
        if any(s < 2 for s in self.shape):
            raise GridError(f"every axis needs at least 2 samples, got {self.shape}")
        if any(not (b > a) for a, b in zip(self.min, self.max)):
            raise GridError(f"grid bounds must satisfy min < max, got {self.min}, {self.max}")

    @classmethod
    def box(cls, lo: float, hi: float, n: int, dim: int = 1) -> "Grid":
        return cls((lo,) * dim, (hi,) * dim, (n,) * dim)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``"min:max:N[,min:max:N...]"``."""
        lo, hi, shape = [], [], []
        for part in text.split(","):
            fields = part.strip().split(":")
            if len(fields) != 3:
                raise GridError(f"grid axis must be 'min:max:N', got {part!r}")
            try:
                lo.append(float(fields[0]))
                hi.append(float(fields[1]))
                shape.append(int(fields[2]))
            except ValueError as exc:
                raise GridError(f"bad grid axis {part!r}: {exc}") from None
        return cls(tuple(lo), tuple(hi), tuple(shape))

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / s for a, b, s in zip(self.min, self.max, self.shape))

    @property
    def vol(self) -> float:
        return math.prod(self.spacing)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def axes(self) -> list[np.ndarray]:
        return [a + (np.arange(s) + 0.5) * h for a, s, h in zip(self.min, self.shape, self.spacing)]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def points(self) -> np.ndarray:
        """Node coordinates, shape ``(size, n)``, row-major."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def radius_sq(self) -> np.ndarray:
        return sum(m * m for m in self.mesh())

    def scaled(self, factor: float) -> "Grid":
        """Grid whose nodes are the nodes of ``self`` times ``factor > 0``."""
        return Grid(tuple(factor * a for a in self.min), tuple(factor * b for b in self.max), self.shape)

    def to_dict(self) -> dict:
        return {"min": list(self.min), "max": list(self.max), "shape": list(self.shape)}


@dataclass(frozen=True, eq=False)
class SampledField:
    """One multivector per grid node; ``values`` has shape ``grid.shape + (2**n,)``."""

    sig: Signature
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.shape + (self.sig.dim,):
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape} x {self.sig.dim}")
        if self.grid.n > self.sig.n:
            raise GridError(f"grid dimension {self.grid.n} exceeds algebra dimension {self.sig.n}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, sig: Signature, grid: Grid) -> "SampledField":
        return cls(sig, grid, np.zeros(grid.shape + (sig.dim,)))

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1, self.sig.dim)

    def with_values(self, values) -> "SampledField":
        return SampledField(self.sig, self.grid, values)

    def modulus(self) -> np.ndarray:
        return np.sqrt(np.einsum("...i,...i->...", self.values, self.values))

    def max_modulus(self) -> float:
        return float(self.modulus().max())

    def boundary_max(self) -> float:
        mod = self.modulus()
        edge = 0.0
        for d in range(mod.ndim):
            edge = max(edge, float(np.take(mod, 0, axis=d).max()), float(np.take(mod, -1, axis=d).max()))
        return edge

    def __add__(self, other: "SampledField") -> "SampledField":
        _check_compatible(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledField") -> "SampledField":
        _check_compatible(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, other):
        """Scalar scaling or right multiplication by a constant multivector."""
        if isinstance(other, Multivector):
            return self.with_values(gp_arrays(self.sig, self.values, other.coeffs))
        return self.with_values(self.values * float(other))

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return self.with_values(gp_arrays(self.sig, other.coeffs, self.values))
        return self.with_values(self.values * float(other))

    def blades_present(self) -> list[int]:
        return [m for m in range(self.sig.dim) if np.any(self.values[..., m])]

    # -- I/O --------------------------------------------------------------
    def to_dict(self, extra: Mapping | None = None) -> dict:
        masks = self.blades_present() or [0]
        out = {
            "p": self.sig.p,
            "q": self.sig.q,
            "grid": self.grid.to_dict(),
            "blades": [blade_name(m) for m in masks],
        }
        if extra:
            out.update(extra)
        out["data"] = self.flat()[:, masks].tolist()
        return out

    def to_json(self, extra: Mapping | None = None) -> str:
        return json.dumps(self.to_dict(extra))

    @classmethod
    def from_dict(cls, obj: Mapping) -> "SampledField":
        sig = Signature(int(obj["p"]), int(obj["q"]))
        g = obj["grid"]
        grid = Grid(tuple(g["min"]), tuple(g["max"]), tuple(g["shape"]))
        masks = [blade_mask(b, sig) for b in obj["blades"]]
        data = np.asarray(obj["data"], dtype=float).reshape(grid.size, len(masks))
        values = np.zeros((grid.size, sig.dim))
        values[:, masks] = data
        return cls(sig, grid, values.reshape(grid.shape + (sig.dim,)))

    @classmethod
    def from_json(cls, text: str) -> "SampledField":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        masks = self.blades_present() or [0]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{d + 1}" for d in range(self.grid.n)] + [blade_name(m) for m in masks])
        for x, row in zip(self.grid.points(), self.flat()):
            w.writerow([repr(float(v)) for v in x] + [repr(float(row[m])) for m in masks])
        return buf.getvalue()


def _check_compatible(f: SampledField, g: SampledField):
    if f.sig != g.sig:
        raise SignatureMismatch(f"{f.sig} vs {g.sig}")
    if f.grid != g.grid:
        raise GridError("fields live on different grids")


def sample_field(exprs: Mapping[str, Expr | str], grid: Grid, sig: Signature) -> SampledField:
    """Evaluate one scalar expression per blade at every node.

    Raises:
        EvaluationError: naming the coordinates of the first failing node.
    """
    if grid.n > sig.n:
        raise GridError(f"grid dimension {grid.n} exceeds algebra dimension {sig.n}")
    values = np.zeros(grid.shape + (sig.dim,))
    mesh = grid.mesh()
    for name, e in exprs.items():
        mask = blade_mask(name, sig)
        if isinstance(e, str):
            e = parse_scalar_expr(e)
        if e.max_variable() > grid.n:
            raise EvaluationError(f"x{e.max_variable()} used on a {grid.n}-dimensional grid")
        try:
            values[..., mask] += e.evaluate(mesh)
        except EvaluationError as exc:
            if exc.index is None:
                raise
            node = tuple(float(m.ravel()[exc.index]) for m in mesh)
            raise EvaluationError(f"{exc} in component {name!r} at x = {node}", exc.index) from None
    return SampledField(sig, grid, values)


def kahan_sum(terms: np.ndarray) -> np.ndarray:
    """Compensated sum over the leading axis, strictly in index order."""
    terms = np.asarray(terms, dtype=float)
    if terms.ndim == 1:
        # plain floats are much cheaper than numpy scalars in this loop
        total = comp = 0.0
        for t in terms.tolist():
            y = t - comp
            s = total + y
            comp = (s - total) - y
            total = s
        return np.float64(total)
    total = np.zeros(terms.shape[1:])
    comp = np.zeros(terms.shape[1:])
    for t in terms:
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


class KahanAccumulator:
    """Running compensated sum for terms produced one at a time."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, term):
        y = term - self.comp
        s = self.total + y
        self.comp = (s - self.total) - y
        self.total = s


def integrate(f: SampledField) -> Multivector:
    """Midpoint rule ``vol * sum_nodes f(node)``."""
    return Multivector(f.sig, f.grid.vol * kahan_sum(f.flat()))


def integrate_scalar(grid: Grid, density: np.ndarray) -> float:
    """Midpoint rule for a real density sampled on ``grid``."""
    return float(grid.vol * kahan_sum(np.ravel(density)))


def inner(f: SampledField, g: SampledField) -> tuple[Multivector, float]:
    """Full product ``int f ~g`` and its symmetric scalar part ``int f * ~g``."""
    _check_compatible(f, g)
    sig = f.sig
    full = gp_arrays(sig, f.flat(), reverse_arrays(sig, g.flat()))
    scalar = np.einsum("ij,ij->i", f.flat(), g.flat())
    vol = f.grid.vol
    return Multivector(sig, vol * kahan_sum(full)), float(vol * kahan_sum(scalar))


def norm_sq(f: SampledField) -> float:
    return integrate_scalar(f.grid, np.einsum("...i,...i->...", f.values, f.values))


def _direction(a: Multivector, f: SampledField) -> np.ndarray:
    if a.sig != f.sig:
        raise SignatureMismatch(f"{a.sig} vs {f.sig}")
    if not a.is_vector():
        raise NotAVector("direction must be a grade-1 vector")
    return a.vector_components()[: f.grid.n]


def directional_derivative(f: SampledField, a: Multivector) -> SampledField:
    """``a . grad f = sum_l a^l d_l f`` by central differences.

    Neighbours outside the grid count as zero.
    """
    comps = _direction(a, f)
    out = np.zeros_like(f.values)
    for d, (al, h) in enumerate(zip(comps, f.grid.spacing)):
        if al == 0:
            continue
        pad = [(0, 0)] * f.values.ndim
        pad[d] = (1, 1)
        v = np.pad(f.values, pad)
        n = f.values.shape[d]
        fwd = np.take(v, np.arange(2, n + 2), axis=d)
        bwd = np.take(v, np.arange(0, n), axis=d)
        out += al * (fwd - bwd) / (2.0 * h)
    return f.with_values(out)


def ibp_residual(f: SampledField, g: SampledField, a: Multivector, decay_tol: float = 1e-12) -> float:
    """``|int f (a.grad g) + int (a.grad f) g|``; the boundary term is dropped."""
    _check_compatible(f, g)
    edge = max(f.boundary_max(), g.boundary_max())
    if edge >= decay_tol:
        warnings.warn(
            f"fields reach {edge:.3g} on the grid boundary; the boundary term is not negligible",
            BoundaryDecayWarning,
            stacklevel=2,
        )
    sig = f.sig
    dg = directional_derivative(g, a)
    df = directional_derivative(f, a)
    terms = gp_arrays(sig, f.flat(), dg.flat()) + gp_arrays(sig, df.flat(), g.flat())
    total = f.grid.vol * kahan_sum(terms)
    return float(np.sqrt(np.dot(total, total)))


def warn_if_not_decaying(f: SampledField, rel: float = 1e-6):
    peak = f.max_modulus()
    if peak > 0 and f.boundary_max() > rel * peak:
        warnings.warn(
            f"field is {f.boundary_max() / peak:.3g} of its peak on the box boundary",
            BoundaryDecayWarning,
            stacklevel=3,
        )


def parse_expr_flag(text: str | Sequence[str]) -> dict[str, str]:
    """Split ``"1=exp(-x1^2),e1=x1"`` into ``{"1": ..., "e1": ...}``."""
    parts = [text] if isinstance(text, str) else list(text)
    out: dict[str, str] = {}
    for chunk in parts:
        for item in chunk.split(","):
            if not item.strip():
                continue
            if "=" not in item:
                raise ValueError(f"expected 'blade=expr', got {item!r}")
            blade, e = item.split("=", 1)
            out[blade.strip()] = e.strip()
    return out
