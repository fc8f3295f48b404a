import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from coxext.polynomials import IntPolynomial
from coxext.roots import (
    RootClusterError,
    RootNotConvergedError,
    isolate_negative_real_roots,
    square_free_decomposition,
)
from coxext.statistics import factor_eulerian_polynomial
from coxext.groups import IrreducibleFactor, Kind


def _sympy_q(coeffs):
    z = sympy.symbols("z")
    poly = sympy.Poly(list(reversed(coeffs)), z)
    return sorted(float(-r) for r in poly.real_roots())


def test_linear():
    assert isolate_negative_real_roots(IntPolynomial([1, 1])).q == [1.0]


def test_quadratics():
    rl = isolate_negative_real_roots(IntPolynomial([1, 8, 1]))
    assert rl.q == pytest.approx([4 - math.sqrt(15), 4 + math.sqrt(15)], rel=1e-12)
    rl = isolate_negative_real_roots(IntPolynomial([1, 4, 1]))
    assert rl.q == pytest.approx([2 - math.sqrt(3), 2 + math.sqrt(3)], rel=1e-12)
    assert rl.residual < 1e-12


def test_constant_has_no_roots():
    assert len(isolate_negative_real_roots(IntPolynomial([3]))) == 0


def test_rejects_nonpositive_coefficients():
    with pytest.raises(ValueError):
        isolate_negative_real_roots(IntPolynomial([1, -1]))
    with pytest.raises(ValueError):
        isolate_negative_real_roots(IntPolynomial([1, 0, 1]))


def test_not_real_rooted_is_reported():
    # 1 + z + z^2 has complex roots
    with pytest.raises(RootNotConvergedError):
        isolate_negative_real_roots(IntPolynomial([1, 1, 1]))


def test_repeated_roots_via_square_free():
    # (1+z)^3 (2+z)^2
    p = IntPolynomial([1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([1, 1])
    p = p * IntPolynomial([2, 1]) * IntPolynomial([2, 1])
    rl = isolate_negative_real_roots(p)
    assert rl.q == pytest.approx([1, 1, 1, 2, 2], rel=1e-12)
    assert rl.multiplicity == {1.0: 3, 2.0: 2}


def test_square_free_decomposition():
    p = IntPolynomial([1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([3, 1])
    parts = square_free_decomposition(p)
    assert sorted((part.coeffs, k) for part, k in parts) == [((1, 1), 2), ((3, 1), 1)]


def test_cluster_reported():
    # roots 1 and 1 + 1e-13 are distinct but closer than the tolerance
    a = 10**13
    p = IntPolynomial([1, 1]) * IntPolynomial([a + 1, a])
    with pytest.raises(RootClusterError) as info:
        isolate_negative_real_roots(p, rel_tol=1e-10)
    assert info.value.cluster_size == 2


@pytest.mark.parametrize("kind,n", [(Kind.A, 8), (Kind.B, 9), (Kind.D, 7), (Kind.A, 12),
                                    (Kind.B, 11)])
def test_eulerian_roots_match_sympy(kind, n):
    p = factor_eulerian_polynomial(IrreducibleFactor(kind, n))
    got = isolate_negative_real_roots(p).q
    assert got == pytest.approx(_sympy_q(p.coeffs), rel=1e-10)


@pytest.mark.parametrize("n", [10, 30, 60])
def test_reconstruction(n):
    p = factor_eulerian_polynomial(IrreducibleFactor(Kind.B, n))
    rl = isolate_negative_real_roots(p)
    assert len(rl) == n and all(q > 0 for q in rl.q)
    # coefficients of prod(z + q) from the top, compared relatively
    rebuilt = np.poly1d([1.0])
    for q in rl.q:
        rebuilt = rebuilt * np.poly1d([1.0, q])
    lead = p.lead
    expected = [c / lead for c in reversed(p.coeffs)]
    np.testing.assert_allclose(rebuilt.coeffs, expected, rtol=1e-8)


@given(st.lists(st.integers(1, 60), min_size=1, max_size=7, unique=True),
       st.lists(st.integers(1, 60), min_size=1, max_size=7, unique=True))
def test_random_real_rooted(nums, dens):
    # roots q = num/den, distinct after reduction
    qs = sorted({sympy.Rational(a, b) for a, b in zip(nums, dens)})
    poly = IntPolynomial([1])
    for q in qs:
        poly = poly * IntPolynomial([int(q.p), int(q.q)])
    got = isolate_negative_real_roots(poly).q
    assert got == pytest.approx([float(q) for q in qs], rel=1e-11)
