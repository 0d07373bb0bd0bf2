from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from morava.coeff import (CoeffError, IdealSpec, TheoryTag, default_bound, local_scalar,
                          make_ring, quotient_theory, reduce_mod, valuation)
from morava.presentation import base_change, presentation


def test_p2_kills_v1():
    R = make_ring("P(2)@p=2")
    assert R.v(1) * R.one() == R.zero()
    assert R.v(2) != R.zero()


def test_bp_identity():
    R = make_ring("BP@p=3")
    x = R.parse("2 + v1*v2^2 - 3/5*v1")
    assert R.one() * x == x


def test_k1_unit():
    R = make_ring("K(1)@p=2")
    assert R.v(1) * R.v(1, -1) == R.one()


def test_negative_exponent_outside_unit():
    R = make_ring("K(1)@p=2")
    with pytest.raises(CoeffError):
        R.v(2, -1)


def test_bad_height():
    with pytest.raises(CoeffError):
        TheoryTag.parse("K(0)@p=2")


def test_local_scalar_rejects_p_in_denominator():
    assert local_scalar(1, 3, p=2) == Fraction(1, 3)
    with pytest.raises(CoeffError):
        local_scalar(1, 4, p=2)


def test_valuation():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(0, 3) == float("inf")


def test_default_bound():
    assert default_bound(2) == 30
    assert default_bound(3) == 160


def test_reduce_mod_examples():
    R = make_ring("BP@p=2")
    assert reduce_mod(R.parse("2 + v1*v2"), IdealSpec.I(2)) == 0
    v2 = reduce_mod(R.v(2), IdealSpec.I(2))
    assert str(v2) == "v2" and v2.theory == TheoryTag.P(2, 2)
    out = reduce_mod(R.parse("v3*v1 + v2^2"), IdealSpec.J(3))
    assert str(out) == "v2^2"


def test_reduce_mod_unit_is_error():
    R = make_ring("K(2)@p=2")
    with pytest.raises(CoeffError):
        reduce_mod(R.v(2), IdealSpec.custom(["v2"]))


def test_ideal_parsing():
    assert IdealSpec.parse("I2") == IdealSpec.I(2)
    assert IdealSpec.parse("I(0)").is_zero
    assert IdealSpec.parse("J(3)").kills(7)
    assert not IdealSpec.parse("J(3)").kills(2)
    assert IdealSpec.parse("Iinf").kills(100)
    assert IdealSpec.parse("{p,v1}") == IdealSpec.I(2)


def test_quotient_theory_names():
    bp = TheoryTag.BP(2)
    assert quotient_theory(bp, IdealSpec.I(3)) == TheoryTag.P(3, 2)
    assert quotient_theory(bp, IdealSpec.J(2)) == TheoryTag.BPn(1, 2)
    assert quotient_theory(bp, IdealSpec.I(2) + IdealSpec.J(3)) == TheoryTag.k(2, 2)
    assert quotient_theory(bp, IdealSpec.custom(["v2"])) is None


def test_tag_round_trip():
    for s in ("BP@p=3", "P(2)@p=2", "K(1)@p=2", "BP<1>@p=2", "k(2)@p=3"):
        assert str(TheoryTag.parse(s)) == s


def test_degree_additivity():
    R = make_ring("BP@p=2")
    x, y = R.parse("v1^3 + 3*v2"), R.parse("v1*v2")
    assert (x * y).degree() == x.degree() + y.degree()


# -- base change ---------------------------------------------------------------------

SO7_OMEGA = presentation("BP@p=2", [("1", (0, 0), ""), ("y6", (6, 3), "p,v1")])


def test_base_change_so7():
    k1 = base_change(SO7_OMEGA, "K(1)@p=2")
    k2 = base_change(SO7_OMEGA, "K(2)@p=2")
    assert k1.labels() == ["1"]
    assert k2.labels() == ["1", "y6"]


def test_base_change_below_height_is_zero():
    m = presentation("P(3)@p=2", [("b", (0, 0), "")])
    assert len(base_change(m, "K(2)@p=2")) == 0
    assert len(base_change(m, "K(1)@p=2")) == 0


def test_base_change_uninvert_is_error():
    m = presentation("K(1)@p=2", [("b", (0, 0), "")])
    with pytest.raises(ValueError):
        base_change(m, "P(1)@p=2")


# -- randomized ring axioms against a sympy oracle ------------------------------------

V = sympy.symbols("v1:5")


def _to_sympy(x):
    out = 0
    for mono, c in x.terms:
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for i, e in mono:
            term *= V[i - 1] ** e
        out += term
    return sympy.expand(out)


def _truncate(expr, p, bound):
    poly = sympy.Poly(expr, *V)
    out = 0
    for exps, c in poly.terms():
        deg = sum(-2 * (p ** (i + 1) - 1) * e for i, e in enumerate(exps))
        if abs(deg) <= bound:
            out += c * sympy.prod(v**e for v, e in zip(V, exps))
    return sympy.expand(out)


def elements(p):
    term = st.tuples(st.lists(st.tuples(st.integers(1, 3), st.integers(0, 3)), max_size=2),
                     st.fractions(min_value=-6, max_value=6, max_denominator=7))
    return st.lists(term, max_size=4).map(
        lambda ts: [(tuple((i, e) for i, e in mono), c) for mono, c in ts
                    if Fraction(c).denominator % p])


@settings(max_examples=250, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_ring_axioms(p, data):
    R = make_ring(TheoryTag.BP(p))
    x, y, z = (R.element(_merge(data.draw(elements(p)))) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + (-x) == R.zero()
    assert _to_sympy(x * y) == _truncate(_to_sympy(x) * _to_sympy(y), p, R.bound)
    for c in (x * y).terms:
        assert Fraction(c[1]).denominator % p


@settings(max_examples=250, deadline=None)
@given(st.data())
def test_mod_p_ring_axioms(data):
    R = make_ring("P(1)@p=3")
    x, y, z = (R.element(_merge(data.draw(elements(3)))) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert all(0 < c < 3 for _, c in (x * y).terms)


@settings(max_examples=250, deadline=None)
@given(st.data(), st.sampled_from(["I1", "I2", "I3", "J2", "J3", "{v2}", "{p,v3}"]))
def test_reduce_mod_idempotent(data, ideal):
    R = make_ring("BP@p=2")
    x = R.element(_merge(data.draw(elements(2))))
    A = IdealSpec.parse(ideal)
    once = reduce_mod(x, A)
    assert reduce_mod(once, A) == once


ANNS = ["", "p", "v1", "p,v1", "v2", "p,v1,v2", "v1,v3", "p,v2"]


@settings(max_examples=250, deadline=None)
@given(st.lists(st.sampled_from(ANNS), min_size=1, max_size=5), st.integers(1, 3))
def test_base_change_functorial(anns, n):
    m = presentation("BP@p=2", [(f"g{j}", (2 * j, j), a) for j, a in enumerate(anns)])
    direct = base_change(m, TheoryTag.K(n, 2))
    via = base_change(base_change(m, TheoryTag.P(n, 2)), TheoryTag.K(n, 2))
    assert direct.same(via)


def _merge(terms):
    out = {}
    for mono, c in terms:
        d = {}
        for i, e in mono:
            d[i] = d.get(i, 0) + e
        key = tuple(sorted(d.items()))
        out[key] = out.get(key, 0) + c
    return out
