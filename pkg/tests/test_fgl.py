from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from morava.coeff import IdealSpec, TheoryTag, reduce_mod
from morava.fgl import FGLError, FGLSpec, bzp_ring, p_series, vn_torsion_check


@pytest.mark.parametrize("p,bound,text", [
    (2, 8, "2*y + v1*y^2 + v2*y^4 + v3*y^8"),
    (3, 27, "3*y + v1*y^3 + v2*y^9 + v3*y^27"),
    (5, 125, "5*y + v1*y^5 + v2*y^25 + v3*y^125"),
    (3, 2, "3*y"),
])
def test_bp_pseries(p, bound, text):
    assert str(p_series(FGLSpec.bp(p), bound)) == text


def test_honda():
    assert str(p_series(FGLSpec.honda("K(1)@p=2"), 4)) == "v1*y^2"
    assert str(p_series(FGLSpec.honda("P(2)@p=3"), 9)) == "v2*y^9"


def test_honda_bound_too_small():
    with pytest.raises(FGLError, match="bound too small to contain leading term"):
        p_series(FGLSpec.honda("K(2)@p=2"), 3)


def test_fgl_kind_validation():
    with pytest.raises(FGLError):
        FGLSpec("honda", TheoryTag.BP(2))
    with pytest.raises(FGLError):
        FGLSpec("mod-I2", TheoryTag.P(1, 2))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pseries_homogeneous(p):
    assert p_series(FGLSpec.bp(p), p**3).degree() == 2


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_reduction_matches_honda_leading_term(p, n):
    s = p_series(FGLSpec.bp(p), p**3)
    reduced = {k: reduce_mod(c, IdealSpec.I(n)) for k, c in s.coeffs}
    reduced = {k: c for k, c in reduced.items() if c}
    assert min(reduced) == p**n
    assert str(reduced[p**n]) == f"v{n}"


def test_quotient_relation_display():
    R = bzp_ring("P(1)@p=2", 8)
    assert str(R.relation) == "v1*y^2 + v2*y^4 + v3*y^8"
    R = bzp_ring("P(2)@p=3", 27)
    assert str(R.relation) == "v2*y^9 + v3*y^27"


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1)])
def test_k_ring_rank(p, n):
    R = bzp_ring(TheoryTag.K(n, p), p**n + 3)
    assert R.free_rank() == p**n
    assert not R.normal_form({p**n: 1}).coeffs


def test_p_ring_rewrites_leading_term():
    R = bzp_ring("P(1)@p=3", 27)
    out = R.normal_form({3: R.ring.v(1)})
    expected = R.element({9: -R.ring.v(2), 27: -R.ring.v(3)})
    assert out == expected


@pytest.mark.parametrize("p,n,bound", [(2, 1, 16), (3, 2, 27), (2, 1, 1), (3, 1, 10)])
def test_vn_torsion(p, n, bound):
    assert vn_torsion_check(bzp_ring(TheoryTag.P(n, p), bound))


def test_unsupported_theory():
    with pytest.raises(FGLError):
        bzp_ring("HF@p=2", 4)


def test_relation_is_zero():
    for t in ("BP@p=2", "P(1)@p=2", "P(2)@p=3"):
        assert not bzp_ring(t, 9).relation_value().coeffs


# -- independent oracle for BP normal forms -------------------------------------------

Y = sympy.Symbol("y")
V = sympy.symbols("v1:6")


def _series_to_sympy(s):
    out = 0
    for k, c in s.coeffs:
        for mono, a in c.terms:
            t = sympy.Rational(Fraction(a).numerator, Fraction(a).denominator) * Y**k
            for i, e in mono:
                t *= V[i - 1] ** e
            out += t
    return sympy.expand(out)


def _plocal(expr, p):
    for c in sympy.Poly(expr, Y, *V).coeffs():
        if sympy.Rational(c).q % p == 0:
            return False
    return True


def _congruent(f, g, p, bound):
    """f - g = q * [p](y) mod y^(bound+1) with q having p-local coefficients."""
    ps = p * Y + sum(V[i - 1] * Y ** (p**i) for i in range(1, 6) if p**i <= bound)
    diff = sympy.expand(f - g)
    # divide by y * (p + v1 y^(p-1) + ...) as a power series over Q
    q = sympy.series(sympy.cancel(diff / ps), Y, 0, bound).removeO()
    q = sympy.expand(q)
    rem = sympy.expand(diff - q * ps)
    rem = sum(t for t in sympy.Add.make_args(rem) if sympy.degree(t, Y) <= bound)
    return sympy.expand(rem) == 0 and _plocal(q, p) if q != 0 else diff == 0


def test_bp_normal_form_of_2y():
    R = bzp_ring("BP@p=2", 8)
    nf = R.normal_form({1: 2})
    assert not nf[1]
    assert _congruent(_series_to_sympy(nf), 2 * Y, 2, 8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]),
       st.dictionaries(st.integers(1, 6), st.integers(-9, 9), max_size=3))
def test_bp_normal_form_oracle(p, coeffs):
    R = bzp_ring(TheoryTag.BP(p), 9)
    x = R.element(coeffs)
    nf = R.normal_form(x)
    assert R.normal_form(nf) == nf
    for k, c in nf.coeffs:
        assert all(0 < Fraction(a) < p for _, a in c.terms)
    assert _congruent(_series_to_sympy(nf), _series_to_sympy(x), p, 9)
