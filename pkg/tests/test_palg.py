import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morava import palg
from morava.palg import (Generator, PalgError, PresentedAlgebra, chow_part, direct_sum,
                         free_qmodule, q_shift, verify_q_freeness)
from morava.presentation import ParseError, loads


def test_q_shift():
    assert q_shift(0, 2) == (1, 0)
    assert q_shift(1, 2) == (3, 1)
    assert q_shift(2, 3) == (17, 8)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("s", [0, 1, 2])
def test_bzp_action(p, s):
    A = palg.bzp_algebra(p)
    assert A.apply_q(s, A.parse("x")) == A.parse(f"y^{p**s}")


def test_unit_is_killed():
    for A in (palg.bzp_algebra(3), palg.so7_algebra(), palg.so3_algebra()):
        for i in range(3):
            assert A.apply_q(i, A.one() and {A.one(): 1}) == {}


def test_so7_relations():
    A = palg.so7_algebra()
    assert A.mul(A.parse("x3"), A.parse("x3")) == A.parse("t y6")
    assert A.mul(A.parse("x5"), A.parse("x5")) == {}
    assert [A.mono_str(m) for m in A.basis(20)] == [
        "1", "x3", "x5", "y6", "x3x5", "x3y6", "x5y6", "x3x5y6"]


def test_so7_leibniz():
    A = palg.so7_algebra()
    assert A.apply_q(1, A.parse("x3 x5")) == A.parse("x5 y6")
    assert A.apply_q(0, A.parse("x3 x5")) == A.parse("x3 y6")


def test_q0_leibniz_square_is_zero():
    A = palg.bzp_algebra(2)
    assert A.q0_leibniz(["y", "y"]) == {}


def test_weights():
    A = palg.so7_algebra()
    assert A.weight(A.parse("t")) == 2
    assert A.weight({A.one(): 1}) == 0
    assert A.weight(A.parse("y6")) == 0
    assert A.dimension(A.parse("x5")) == 2
    with pytest.raises(PalgError):
        A.weight(A.parse("x3 + y6"))


def test_smooth_weight_check():
    A = PresentedAlgebra(2, [Generator("g", (3, 1))], smooth=True)
    with pytest.raises(PalgError):
        A.weight(A.parse("g"))


def test_weight_additive():
    A = palg.so7_algebra()
    for a, b in itertools.product(["x3", "x5", "y6", "t"], repeat=2):
        prod = A.mul(A.parse(a), A.parse(b))
        if prod:
            assert A.weight(prod) == A.weight(A.parse(a)) + A.weight(A.parse(b))


def test_bad_qtable_bidegree():
    A = palg.so7_algebra()
    with pytest.raises(PalgError):
        A.set_q(1, "x5", "y6")


def test_chow_part():
    A = palg.so7_algebra()
    omega = loads("theory BP@p=2\ngen 1 (0,0) ann {}\ngen y6 (6,3) ann {p,v1}\n")
    assert chow_part(omega) == ["1", "y6"]
    assert chow_part(A, 20) == ["1", "y6"]
    assert chow_part(palg.point_algebra(2)) == ["1"]


def test_q_relations_on_standard_algebras():
    for A, window in ((palg.so7_algebra(), 20), (palg.bzp_algebra(2), 24), (palg.bzp_algebra(3), 60)):
        mod = A.qmodule(window, tau_max=6)
        inner = mod.restrict(lambda lab: mod.bidegree(lab)[0] <= window - 20 and "t^6" not in lab)
        assert inner.check_relations([0, 1, 2]) == []


def test_so3_relations():
    A = palg.so3_algebra()
    mod = A.qmodule(14, tau_max=6).restrict(lambda lab: not lab.startswith("t"))
    mod.check_bidegrees([0, 1, 2])
    assert mod.check_relations([0, 1, 2]) == []


def test_free_qmodule_relations():
    for p, n in ((2, 2), (3, 2), (2, 3), (3, 3)):
        mod = free_qmodule(p, n, [("b", (0, 0)), ("c", (4, 2))])
        assert len(mod) == 2 * 2**n
        assert mod.check_relations(range(n + 1)) == []


def test_bzp_q0_freeness():
    p = 2
    mod = palg.bzp_algebra(p).qmodule(2 * p * p + 1)
    cand = [lab for lab in mod.labels if lab.startswith("x") and mod.bidegree(lab)[0] < 2 * p * p]
    cert, report = verify_q_freeness(mod, 1, cand, ignore=["1"], max_m=2 * p * p)
    assert report is None and cert is not None


def test_chi_tilde_free_and_xi():
    for p, n in ((2, 2), (3, 2), (2, 3)):
        mod = palg.chi_tilde(p, n, xi_max=1)
        cert, report = verify_q_freeness(mod, n, ["a'", "xia'"])
        assert report is None
        assert mod.apply_word(range(n), "a'") in ({"xi": 1}, {"xi": p - 1})
        (m, w), (m2, w2) = mod.bidegree("xi"), mod.bidegree("a'")
        assert mod.bidegree("xia'") == (m + m2, w + w2)


def test_trivial_module_is_not_free():
    mod = free_qmodule(2, 0, [("g", (4, 2))])
    cert, report = verify_q_freeness(mod, 1, ["g"])
    assert cert is None and "Q0g" in report


def test_direct_sum_and_shift():
    m1 = free_qmodule(2, 1, [("b", (0, 0))])
    m2 = palg.shift(m1, (2, 1), suffix="h")
    s = direct_sum(m1, m2)
    assert s.labels == ("b", "Q0b", "bh", "Q0bh")
    assert s.q(0, "bh") == {"Q0bh": 1}
    assert s.bidegree("Q0bh") == (3, 1)


# -- text format ---------------------------------------------------------------------

@pytest.mark.parametrize("alg", [palg.so7_algebra(), palg.so3_algebra(), palg.bzp_algebra(2),
                                 palg.bzp_algebra(3)])
def test_algebra_round_trip(alg):
    text = palg.dumps_algebra(alg)
    back = palg.loads_algebra(text)
    assert palg.dumps_algebra(back) == text
    assert palg.algebras_equal(alg, back)


def test_parse_error_has_line():
    text = "[base]\nZ/2[t]\n[generators]\nx3 (3,2)\ny6 (6,3)\n[qtable]\nQ1(x3) = x3\n"
    with pytest.raises(ParseError, match="line 7"):
        palg.loads_algebra(text)


def test_parse_error_bad_generator():
    with pytest.raises(ParseError, match="line 4"):
        palg.loads_algebra("[base]\nZ/2[t]\n[generators]\nx3 (3;2)\n")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["x3", "x5", "y6", "t"]), min_size=1, max_size=4),
       st.sampled_from([0, 1]))
def test_so7_bidegree_shift(factors, i):
    A = palg.so7_algebra()
    x = A.parse(" ".join(factors))
    if not x:
        return
    (m0, mp0), = {A.bidegree(m) for m in x}
    for m in A.apply_q(i, x):
        assert A.bidegree(m) == (m0 + 2 * 2**i - 1, mp0 + 2**i - 1)
