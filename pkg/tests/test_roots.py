import cmath
import math

import numpy as np
import pytest

from cliffordft.algebra import Multivector, Signature, SignatureMismatch, principle_reverse
from cliffordft.roots import (
    NotARoot,
    ReverseConditionFailed,
    complex_kernel,
    enumerate_blade_roots,
    kernel,
    kernel_bound,
    random_root,
    split_arrays,
    split_commuting,
    validate_root,
)
from cliffordft.transform import root_spelling


def blade(sig, name, v=1.0):
    return Multivector.blade(sig, name, v)


def test_validate_examples():
    assert validate_root(blade(Signature(0, 1), "e1")).i == blade(Signature(0, 1), "e1")
    validate_root(blade(Signature(2, 0), "e1e2"))
    validate_root(blade(Signature(3, 0), "e1e2e3"))
    with pytest.raises(NotARoot):
        validate_root(blade(Signature(2, 0), "e1"))


def test_inverse_is_negation():
    r = validate_root(blade(Signature(1, 2), "e1e2e3"))
    assert r.i * r.i_inv == Multivector.scalar(r.sig, 1)
    assert r.i_inv == -r.i


def test_reverse_condition_failure():
    # a e1 + b e2 in Cl(1,1) squares to a^2 - b^2 but its reverse is a e1 - b e2
    sig = Signature(1, 1)
    m = Multivector.vector(sig, [1.0, math.sqrt(2.0)])
    assert (m * m).allclose(Multivector.scalar(sig, -1), atol=1e-12)
    with pytest.raises(ReverseConditionFailed):
        validate_root(m)


def test_enumerate_examples():
    def names(sig):
        return [root_spelling(r) for r in enumerate_blade_roots(sig)]

    assert names(Signature(2, 0)) == ["e1e2"]
    assert names(Signature(0, 1)) == ["e1"]
    assert names(Signature(1, 0)) == []
    assert sorted(names(Signature(0, 2))) == ["e1", "e1e2", "e2"]


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_is_exhaustive(n):
    for p in range(n + 1):
        sig = Signature(p, n - p)
        found = {int(np.flatnonzero(r.i.coeffs)[0]) for r in enumerate_blade_roots(sig)}
        for mask in range(sig.dim):
            b = blade(sig, mask)
            is_root = b * b == Multivector.scalar(sig, -1) and principle_reverse(b) == -b
            assert (mask in found) == is_root


def test_random_roots_are_valid_and_unit():
    rng = np.random.default_rng(0)
    for sig in (Signature(0, 2), Signature(0, 3), Signature(3, 0), Signature(2, 2)):
        for _ in range(10):
            r = random_root(sig, rng)
            assert (r.i * r.i).allclose(Multivector.scalar(sig, -1), atol=1e-12)
            assert principle_reverse(r.i).allclose(-r.i, atol=1e-12)
            assert math.isclose(r.modulus_sq, 1.0, rel_tol=1e-12)
    with pytest.raises(NotARoot):
        random_root(Signature(1, 0), rng)


def test_split_examples():
    s = Signature(0, 1)
    i = validate_root(blade(s, "e1"))
    one = Multivector.scalar(s, 1)
    assert split_commuting(one, i) == (one, Multivector.zero(s))
    assert split_commuting(blade(s, "e1"), i) == (blade(s, "e1"), Multivector.zero(s))
    s2 = Signature(2, 0)
    j = validate_root(blade(s2, "e1e2"))
    assert split_commuting(blade(s2, "e1"), j) == (Multivector.zero(s2), blade(s2, "e1"))


def test_split_relations_random():
    sig = Signature(1, 2)
    rng = np.random.default_rng(4)
    for r in enumerate_blade_roots(sig) + [random_root(sig, rng)]:
        a = Multivector(sig, rng.normal(size=sig.dim))
        plus, minus = split_commuting(a, r)
        assert (plus + minus).allclose(a, atol=1e-14)
        assert (plus * r.i).allclose(r.i * plus, atol=1e-13)
        assert (minus * r.i).allclose(-(r.i * minus), atol=1e-13)


def test_split_arrays_matches_single():
    sig = Signature(2, 1)
    r = enumerate_blade_roots(sig)[0]
    a = np.random.default_rng(1).normal(size=(7, sig.dim))
    plus, minus = split_arrays(a, r)
    for k in range(7):
        p1, m1 = split_commuting(Multivector(sig, a[k]), r)
        np.testing.assert_allclose(plus[k], p1.coeffs, atol=1e-14)
        np.testing.assert_allclose(minus[k], m1.coeffs, atol=1e-14)


def test_split_signature_mismatch():
    r = validate_root(blade(Signature(0, 1), "e1"))
    with pytest.raises(SignatureMismatch):
        split_commuting(Multivector.scalar(Signature(1, 0), 1), r)


def test_kernel_values_and_group_law():
    sig = Signature(0, 2)
    r = validate_root(blade(sig, "e1e2"))
    assert kernel(0.0, r) == Multivector.scalar(sig, 1)
    assert kernel(math.pi / 2, r).allclose(-r.i, atol=1e-15)
    assert kernel(math.pi, r).allclose(Multivector.scalar(sig, -1), atol=1e-15)
    u, v = 0.7, -1.9
    assert (kernel(u, r) * kernel(-u, r)).allclose(Multivector.scalar(sig, 1), atol=1e-15)
    assert kernel(u + v, r).allclose(kernel(u, r) * kernel(v, r), atol=1e-15)
    assert math.isclose(kernel(1.234, r).modulus() ** 2, math.cos(1.234) ** 2 + math.sin(1.234) ** 2)


def test_complex_kernel_examples():
    sig = Signature(0, 1)
    r = validate_root(blade(sig, "e1"))
    x = Multivector.vector(sig, [1.0])
    zero = Multivector.zero(sig)
    k = complex_kernel(x, zero, x, r)
    assert math.isclose(k.modulus(), math.sqrt(math.cosh(1) ** 2 + math.sinh(1) ** 2), rel_tol=1e-14)
    assert k.modulus() <= kernel_bound(x, x, r)
    assert math.isclose(kernel_bound(x, x, r), math.sqrt(2) * math.e)
    a = Multivector.vector(sig, [0.3])
    real = complex_kernel(x, a, zero, r)
    assert real.re.allclose(kernel(0.3, r), atol=1e-15)
    assert real.im == zero


def test_complex_kernel_against_complex_arithmetic():
    # in Cl(0,1) the re/im parts are cos(u) - sin(u) e1 with complex u
    sig = Signature(0, 1)
    r = validate_root(blade(sig, "e1"))
    x, a, b = (Multivector.vector(sig, [v]) for v in (0.8, -1.1, 0.6))
    uz = complex(0.8 * -1.1, -0.8 * 0.6)
    k = complex_kernel(x, a, b, r)
    c, s = cmath.cos(uz), cmath.sin(uz)
    np.testing.assert_allclose(k.re.coeffs, [c.real, -s.real], atol=1e-15)
    np.testing.assert_allclose(k.im.coeffs, [c.imag, -s.imag], atol=1e-15)
