import random

import pytest

from morava import ahss, build_rost_motive, palg
from morava.ahss import AHSSError, DifferentialRule


def _anns(pres):
    return {s.label: tuple(s.ann.generators()) for s in pres.summands}


def test_rule_weight_and_shift():
    for p in (2, 3, 5):
        for s in (1, 2, 3):
            r = DifferentialRule(s, p)
            assert r.weight == -1
            assert r.shift[2] == -2 * (p**s - 1)
            assert r.page == 2 * p**s - 1


def test_e2_so7_labels():
    page = ahss.e2_page(palg.so7_algebra(), "P(1)@p=2", window=20)
    labels = {lab for k in page.slices for lab, _ in page.slices[k]}
    assert labels == {"1", "x3", "x5", "y6", "x3x5", "x3y6", "x5y6", "x3x5y6"}


def test_e2_point():
    page = ahss.e2_page(palg.point_algebra(2), "P(1)@p=2", window=6)
    assert {k[:2] for k in page.keys()} == {(0, 0)}
    assert {k[2] for k in page.dims()} == {0, -2, -4, -6}


def test_e2_errors():
    with pytest.raises(AHSSError, match="window too small"):
        ahss.e2_page(palg.point_algebra(2), "P(1)@p=2", window=-1)
    with pytest.raises(AHSSError):
        ahss.e2_page(palg.point_algebra(2), "K(1)@p=2")
    with pytest.raises(AHSSError):
        ahss.e2_page(palg.point_algebra(2), "P(2)@p=2", rules=[1])


def test_differential_order_errors():
    page = ahss.e2_page(palg.bzp_algebra(2), "P(1)@p=2", window=12, rules=[1, 2])
    with pytest.raises(AHSSError):
        ahss.apply_differential(page, 3)
    page2 = ahss.apply_differential(page, 2)
    with pytest.raises(AHSSError):
        ahss.apply_differential(page2, 1)
    with pytest.raises(AHSSError):
        ahss.apply_differential(page2, 2)


def test_zero_differential_leaves_page():
    page = ahss.e2_page(palg.point_algebra(2), "P(1)@p=2", window=6)
    assert ahss.apply_differential(page, 1).dims() == page.dims()


@pytest.mark.parametrize("p,window", [(2, 12), (3, 24)])
def test_bzp_run(p, window):
    res = ahss.run(palg.bzp_algebra(p), f"P(1)@p={p}", window=window)
    anns = _anns(res.presentation)
    free = [lab for lab, a in anns.items() if not a]
    assert free == ["1"] + ["y" if k == 1 else f"y^{k}" for k in range(1, p)]
    assert all(a == ("v1",) for lab, a in anns.items() if lab not in free)
    assert all(s.bidegree[0] % 2 == 0 for s in res.presentation.summands)
    assert res.certificate == "even"


def test_bzp_run_at_p2_theory():
    res = ahss.run(palg.bzp_algebra(2), "P(2)@p=2", window=16)
    anns = _anns(res.presentation)
    assert [lab for lab, a in anns.items() if not a] == ["1", "y", "y^2", "y^3"]
    assert set(a for a in anns.values() if a) == {("v2",)}


def test_so7_run():
    res = ahss.run(palg.so7_algebra(), "P(1)@p=2", window=20)
    assert _anns(res.presentation) == {
        "1": (), "x5": (), "x3y6": (), "x3x5y6": (),
        "y6": ("v1",), "x5y6": ("v1",)}


def test_m2_chow():
    res = ahss.run(build_rost_motive(2), "P(1)@p=2", window=20)
    chow = res.presentation.filter(lambda s: s.weight == 0)
    assert _anns(chow) == {"1": (), "Q0a'": (), "Q1a'": ("v1",)}


def test_permanence():
    res = ahss.run(build_rost_motive(2), "P(1)@p=2", window=20)
    rep = ahss.permanent_cycle_check(res.page)
    assert rep.ok and rep.chow_rank == 3
    with pytest.raises(AHSSError):
        ahss.permanent_cycle_check(ahss.e2_page(palg.so3_algebra(), "P(1)@p=2", window=10))


def test_uncertified_collapse_refuses():
    A = palg.so7_algebra()
    with pytest.raises(AHSSError, match="potential higher differentials"):
        ahss.run(A, "P(1)@p=2", rules=[], window=20)
    assert ahss.run(A, "P(1)@p=2", rules=[], window=20, force=True).certificate == "forced"


def test_dims_never_grow():
    page = ahss.e2_page(palg.bzp_algebra(2), "P(1)@p=2", window=16, rules=[1, 2])
    before = page.dims(inner_only=False)
    for t in (1, 2):
        page = ahss.apply_differential(page, t)
        after = page.dims(inner_only=False)
        assert all(after.get(k, 0) <= d for k, d in before.items())
        before = after


def test_d_squared_detects_bad_action():
    table = {"a": {"b": 1}, "b": {"c": 1}}
    mod = palg.QModule(2, ("a", "b", "c"), {"a": (0, 0), "b": (3, 1), "c": (6, 2)},
                       lambda i, lab: table.get(lab, {}) if i == 1 else {})
    with pytest.raises(AHSSError, match="d_1 o d_1"):
        ahss.run(mod, "P(1)@p=2", rules=[1], window=12)


def _random_base(rng, p, n):
    gens = []
    for j in range(rng.randint(1, 3)):
        mp = rng.randint(0, 3)
        gens.append((f"b{j}", (2 * mp + rng.choice([0, 2]), mp)))
    return gens


@pytest.mark.parametrize("seed", range(8))
def test_tower_synthetic(seed):
    rng = random.Random(seed)
    p, n = rng.choice([2, 3]), rng.choice([2, 3])
    base = _random_base(rng, p, n)
    mod = palg.free_qmodule(p, n, base)
    res = ahss.run(mod, f"P(1)@p={p}", rules=list(range(1, n)), window=60)
    want = tuple(f"v{i}" for i in range(1, n))
    assert all(tuple(s.ann.generators()) == want for s in res.presentation.summands)
    prefix = "".join(f"Q{i}" for i in range(1, n))
    labels = sorted(s.label for s in res.presentation.summands)
    assert labels == sorted(w + prefix + b for b, _ in base for w in ("", "Q0"))
