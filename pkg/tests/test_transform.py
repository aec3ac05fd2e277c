import json
import math

import numpy as np
import pytest
from scipy import integrate as spi

from cliffordft.algebra import Multivector, Signature, gp_arrays
from cliffordft.field import Grid, GridError, SampledField, sample_field
from cliffordft.roots import random_root, validate_root
from cliffordft.samples import gaussian, random_hermite_gaussian
from cliffordft.transform import (
    Spectrum,
    cft,
    cft_at,
    cft_direct,
    cft_fast,
    check_derivative_property,
    check_fast_vs_direct,
    check_inversion,
    check_linearity,
    check_parseval,
    check_plancherel,
    check_scaling,
    frequency_grid,
    icft,
)

S01 = Signature(0, 1)
E1 = validate_root(Multivector.blade(S01, "e1"))
GRID = Grid.box(-10.0, 10.0, 512)


def root(sig, name):
    return validate_root(Multivector.blade(sig, name))


def test_frequency_grid_is_dft_natural():
    g = Grid.box(-1.0, 1.0, 8)
    w = frequency_grid(g).axes()[0]
    h = g.spacing[0]
    np.testing.assert_allclose(w, 2 * math.pi * np.arange(-4, 4) / (8 * h), atol=1e-13)


def test_gaussian_eigenfunction_at_zero():
    spec = cft(gaussian(S01, GRID), E1)
    k = int(np.argmin(np.abs(spec.wgrid.axes()[0])))
    assert abs(spec.values[k, 0] - math.sqrt(2 * math.pi)) <= 1e-9
    assert abs(spec.values[k, 1]) <= 1e-12
    spec1 = cft(gaussian(S01, GRID, k=1.0), E1)
    assert abs(spec1.values[k, 0] - math.sqrt(math.pi)) <= 1e-9


def test_zero_field():
    z = SampledField.zeros(S01, GRID)
    assert np.all(cft(z, E1).values == 0)
    spec = cft(z, E1)
    assert np.all(icft(spec, GRID).values == 0)


def test_against_quadrature_oracle():
    # F(w) = int f cos(w x) dx - (int f sin(w x) dx) i, each blade separately
    sig = Signature(0, 2)
    r = random_root(sig, np.random.default_rng(3))
    amp = np.array([0.5, -1.0, 2.0, 0.25])

    def prof(x):
        return (1 + x - 0.3 * x * x) * math.exp(-0.6 * x * x)

    g = Grid.box(-10.0, 10.0, 256)
    x = g.axes()[0]
    f = SampledField(sig, g, ((1 + x - 0.3 * x * x) * np.exp(-0.6 * x * x))[:, None] * amp)
    ws = np.array([[-2.3], [0.0], [0.7], [1.9]])
    got = cft_at(f, r, ws)
    for w, row in zip(ws[:, 0], got):
        c = spi.quad(lambda t: prof(t) * math.cos(w * t), -np.inf, np.inf, epsabs=1e-13)[0]
        s = spi.quad(lambda t: prof(t) * math.sin(w * t), -np.inf, np.inf, epsabs=1e-13)[0]
        expected = c * amp - s * gp_arrays(sig, amp, r.i.coeffs)
        np.testing.assert_allclose(row, expected, atol=1e-10)


def test_complex_case_matches_closed_form():
    # Cl(0,1) with i = e1 is the complex field; x e^{-x^2/2} -> -i w sqrt(2 pi) e^{-w^2/2}
    f = sample_field({"1": "x1*exp(-0.5*x1^2)"}, GRID, S01)
    spec = cft(f, E1)
    w = spec.wgrid.axes()[0]
    band = np.abs(w) <= 6
    np.testing.assert_allclose(spec.values[band, 0], 0.0, atol=1e-10)
    np.testing.assert_allclose(spec.values[band, 1], -w[band] * math.sqrt(2 * math.pi) * np.exp(-w[band] ** 2 / 2),
                               atol=1e-9)


def test_two_dimensional_gaussian():
    sig = Signature(2, 0)
    g = Grid.box(-8.0, 8.0, 64, dim=2)
    spec = cft(gaussian(sig, g), root(sig, "e1e2"))
    w1, w2 = spec.wgrid.mesh()
    np.testing.assert_allclose(spec.values[..., 0], 2 * math.pi * np.exp(-(w1**2 + w2**2) / 2), atol=1e-9)
    np.testing.assert_allclose(spec.values[..., 1:], 0.0, atol=1e-9)


def test_fast_matches_direct():
    rng = np.random.default_rng(1)
    for sig, grid, name in ((S01, Grid.box(-10, 10, 64), "e1"), (Signature(2, 0), Grid.box(-8, 8, 16, dim=2), "e1e2")):
        f = random_hermite_gaussian(sig, grid, rng)
        assert check_fast_vs_direct(f, root(sig, name)).passed


def test_fast_needs_power_of_two():
    with pytest.raises(GridError):
        cft_fast(gaussian(S01, Grid.box(-10, 10, 100)), E1)
    # auto falls back to direct
    spec = cft(gaussian(S01, Grid.box(-10, 10, 100)), E1, method="auto")
    assert spec.values.shape == (100, 2)
    with pytest.raises(ValueError):
        cft(gaussian(S01, GRID), E1, method="magic")


def test_direct_on_custom_frequencies():
    f = gaussian(S01, GRID)
    wgrid = Grid.box(-3, 3, 7)
    spec = cft_direct(f, E1, wgrid)
    np.testing.assert_allclose(spec.values[:, 0], math.sqrt(2 * math.pi) * np.exp(-wgrid.axes()[0] ** 2 / 2), atol=1e-12)


def test_parseval_and_plancherel():
    rng = np.random.default_rng(2)
    sig = Signature(1, 1)
    r = root(sig, "e2")
    g = Grid.box(-10, 10, 256)
    h1 = random_hermite_gaussian(sig, g, rng)
    h2 = random_hermite_gaussian(sig, g, rng)
    assert check_parseval(h1, r).passed
    rep = check_plancherel(h1, h2, r)
    assert rep.passed, rep.to_dict()


def test_inversion_round_trip():
    rng = np.random.default_rng(5)
    sig = Signature(0, 3)
    r = random_root(sig, rng)
    f = random_hermite_gaussian(sig, Grid.box(-10, 10, 256), rng)
    assert check_inversion(f, r).diagnostics["max_error"] <= 1e-10


def test_inversion_direct_path():
    f = gaussian(S01, Grid.box(-10, 10, 100))
    back = icft(cft(f, E1, "direct"), f.grid)
    assert np.abs(back.values - f.values).max() <= 1e-10


@pytest.mark.parametrize("a", [1.0, 2.0, -1.0, 0.5, -3.0])
def test_scaling(a):
    rep = check_scaling(gaussian(S01, GRID, amplitude=Multivector(S01, [1.0, 0.5])), a, E1)
    assert rep.passed, rep.to_dict()
    if a == 1.0:
        assert rep.lhs == 0.0


def test_scaling_rejects_zero():
    with pytest.raises(ValueError):
        check_scaling(gaussian(S01, GRID), 0.0, E1)


def test_derivative_property():
    a = Multivector.vector(S01, [1.0])
    rep = check_derivative_property(gaussian(S01, GRID), a, E1)
    assert rep.passed and rep.lhs <= 5e-3
    zero = check_derivative_property(gaussian(S01, GRID), Multivector.zero(S01), E1)
    assert zero.lhs == 0.0 and zero.rhs == 0.0


def test_derivative_convergence():
    a = Multivector.vector(S01, [1.0])
    d1 = check_derivative_property(gaussian(S01, Grid.box(-10, 10, 256)), a, E1).lhs
    d2 = check_derivative_property(gaussian(S01, Grid.box(-10, 10, 512)), a, E1).lhs
    assert 3.5 <= d1 / d2 <= 4.5


def test_linearity():
    sig = Signature(2, 0)
    r = root(sig, "e1e2")
    g = Grid.box(-8, 8, 32, dim=2)
    rng = np.random.default_rng(9)
    h1, h2 = random_hermite_gaussian(sig, g, rng), random_hermite_gaussian(sig, g, rng)
    one, zero = Multivector.scalar(sig, 1), Multivector.zero(sig)
    assert check_linearity(h1, h2, one, zero, r).lhs <= 1e-15
    assert check_linearity(h1, h2, r.i, zero, r).passed
    assert check_linearity(h1, h2, Multivector(sig, rng.normal(size=4)), Multivector(sig, rng.normal(size=4)), r).passed


def test_anticommuting_constant_flips_root():
    sig = Signature(2, 0)
    r = root(sig, "e1e2")
    neg = validate_root(-r.i)
    g = Grid.box(-8, 8, 32, dim=2)
    h = random_hermite_gaussian(sig, g, np.random.default_rng(4))
    e1 = Multivector.blade(sig, "e1")
    lhs = cft(h * e1, r).values
    rhs = gp_arrays(sig, cft(h, neg).values, e1.coeffs)
    assert np.abs(lhs - rhs).max() <= 1e-9 * np.abs(rhs).max()


def test_spectrum_serialisation():
    sig = Signature(0, 2)
    r = random_root(sig, np.random.default_rng(0))
    spec = cft(gaussian(sig, Grid.box(-8, 8, 16)), r)
    obj = json.loads(spec.to_json())
    assert obj["domain"] == "frequency"
    back = Spectrum.from_dict(obj)
    assert np.array_equal(back.values, spec.values)
    assert back.root.i == r.i
    e1 = cft(gaussian(S01, Grid.box(-8, 8, 16)), E1).to_dict()
    assert e1["root"] == "e1"
