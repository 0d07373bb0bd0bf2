"""Curated example records and the pipelines that recompute them.

Each record carries its inputs, the expected outputs and a provenance note.
:func:`check_example` recomputes every output and returns the list of
differences (empty means agreement).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from . import ahss, fgl, palg, realmot
from .coeff import IdealSpec, TheoryTag, make_ring
from .palg import word_label
from .presentation import ModulePresentation, base_change, loads, presentation
from .theories import (LinearMap, LinearModule, check_les, collapse_k, free_pairings,
                       morava_k, omega_quotient, tower_step)

NAMES = ("bzp", "bz2", "so3", "so7", "v_n", "chi_tilde(n)", "m2", "q3", "f4_p3")


class ExampleError(KeyError):
    pass


@dataclass(frozen=True)
class ExampleRecord:
    name: str
    provenance: str
    inputs: dict
    expected: dict
    compute: Callable = field(repr=False, compare=False)

    def __post_init__(self):
        if not self.provenance:
            raise ExampleError(f"{self.name}: provenance must be nonempty")

    def run(self, window: int = 40) -> dict:
        return self.compute(window)

    def diff(self, window: int = 40) -> list[str]:
        got = self.run(window)
        out = []
        for key, want in self.expected.items():
            have = got.get(key)
            if isinstance(want, ModulePresentation):
                ok = isinstance(have, ModulePresentation) and want.same(have)
            else:
                ok = want == have
            if not ok:
                out.append(f"{self.name}/{key}: expected\n{want}\ngot\n{have}")
        return out


def _in_window(pres: ModulePresentation, window: int) -> ModulePresentation:
    return pres.filter(lambda s: s.bidegree[0] <= window)


def _chow(pres: ModulePresentation) -> ModulePresentation:
    return pres.filter(lambda s: s.weight == 0)


# -- BZ/p ---------------------------------------------------------------------------

def _ypow(k: int) -> str:
    return "1" if k == 0 else ("y" if k == 1 else f"y^{k}")


def _bz_expected(p: int, s: int, window: int) -> ModulePresentation:
    """P(s)*[y]/(v_s y^{p^s}) as a module: y^k free below p^s, v_s-torsion above."""
    items = [(_ypow(k), (2 * k, k), "" if k < p**s else f"v{s}")
             for k in range(window // 2 + 1)]
    return presentation(TheoryTag.P(s, p), items)


def _bz_les(p: int, K: int, degrees: tuple) -> tuple:
    """Omega -p-> Omega -r-> Omega/p -> 0 for BP*[y]/([p](y), y^(K+1))."""
    BP, P1 = TheoryTag.BP(p), TheoryTag.P(1, p)
    R = make_ring(BP)
    gens = tuple((_ypow(k), 2 * k) for k in range(K + 1))

    def rels(ring, start):
        out = []
        for j in range(K):
            rel = {}
            for i in range(start, 8):
                k = j + p**i
                if k > K:
                    break
                c = ring.scalar(p) if i == 0 else ring.v(i)
                rel[_ypow(k if i else j + 1)] = c
            if rel:
                out.append(rel)
        return tuple(out)

    om_a = LinearModule(BP, gens, {}, rels(R, 0))
    om_b = LinearModule(BP, gens, {}, rels(R, 0))
    quo = LinearModule(P1, gens, {}, rels(make_ring(P1), 1))
    zero = LinearModule(P1, ())
    times_p = LinearMap("p", om_a, om_b, 0, {g: {g: p} for g, _ in gens})
    red = LinearMap("r", om_b, quo, 0, {g: {g: 1} for g, _ in gens})
    end = LinearMap("0", quo, zero, 0, {})
    rep = check_les([times_p, red, end], degrees, odd_zero=[quo])
    return rep, quo


def _fgl_dim(p: int, K: int, d: int) -> int:
    """F_p-dimension in degree d of the normal-form basis of P(1)*[y]/([p](y), y^(K+1))."""
    from .coeff import theory_generators, v_monomials
    P1 = TheoryTag.P(1, p)
    total = 0
    for k in range(K + 1):
        deg = d - 2 * k
        if deg > 0:
            continue
        for mu in v_monomials(theory_generators(P1, -deg), p, deg):
            if k >= p and dict(mu).get(1):
                continue
            total += 1
    return total


def _bz_record(name: str, p: int) -> ExampleRecord:
    alg = palg.bzp_algebra(p)
    expected_series = {2: "2*y + v1*y^2 + v2*y^4 + v3*y^8",
                       3: "3*y + v1*y^3 + v2*y^9 + v3*y^27"}[p]
    quot = {2: "v1*y^2 + v2*y^4 + v3*y^8", 3: "v1*y^3 + v2*y^9 + v3*y^27"}[p]
    ranks = {f"K({n}) rank": p**n for n in (1, 2)}

    def compute(window):
        out = {}
        out["p-series"] = str(fgl.p_series(fgl.FGLSpec.bp(p), p**3))
        omega = fgl.bzp_ring(TheoryTag.BP(p), p**3)
        red = omega_quotient(omega, IdealSpec.I(1))
        out["Omega/I1 relation"] = str(red.relation)
        out["v1-torsion free"] = fgl.vn_torsion_check(red)
        for n in (1, 2):
            out[f"K({n}) rank"] = morava_k(fgl.bzp_ring(TheoryTag.BP(p), p**n + 2), n).free_rank()
        for s in (1, 2):
            w = min(window, 2 * p ** (s + 1))
            res = ahss.run(alg, TheoryTag.P(s, p), [s], window=w)
            got = _in_window(res.presentation.filter(lambda g: "x" not in g.label), w)
            out[f"P({s})"] = got
            out[f"P({s}) odd survivors"] = [g.label for g in res.presentation.summands
                                            if g.bidegree[0] % 2]
        K = 2 * p + 1
        rep, quo = _bz_les(p, K, (-2 * p * p, 2 * K))
        out["les"] = str(rep)
        out["les dims"] = all(quo.rank_mod_p(d) == _fgl_dim(p, K, d)
                              for d in range(-2 * p * p, 2 * K + 1))
        return out

    def expected_for(window):
        e = {"p-series": expected_series, "Omega/I1 relation": quot, "v1-torsion free": True, **ranks}
        for s in (1, 2):
            w = min(window, 2 * p ** (s + 1))
            e[f"P({s})"] = _bz_expected(p, s, w)
            e[f"P({s}) odd survivors"] = []
        K = 2 * p + 1
        e["les"] = f"exact in degrees {-2 * p * p}..{2 * K}"
        e["les dims"] = True
        return e

    rec = ExampleRecord(name, f"BZ/{p}: p-series, P(n) and K(n) quotients, AHSS at P(1), P(2)",
                        {"algebra": alg}, expected_for(40), compute)
    return rec


# -- SO_7 ---------------------------------------------------------------------------

_SO7_P1 = """theory P(1)@p=2
gen 1 (0,0) ann {}
gen x5 (5,3) ann {}
gen x3y6 (9,5) ann {}
gen x3x5y6 (14,8) ann {}
gen y6 (6,3) ann {v1}
gen x5y6 (11,6) ann {v1}
"""

_SO7_OMEGA = """theory BP@p=2
gen 1 (0,0) ann {}
gen y6 (6,3) ann {p,v1}
"""


def so7_les(degrees=(-12, 16)):
    """BP*(SO7) -2-> BP*(SO7) -r-> P(1)*(SO7) -δ-> BP*(SO7) with δ(x5) = y6."""
    p = 2
    BP, P1 = TheoryTag.BP(p), TheoryTag.P(1, p)
    R, R1 = make_ring(BP), make_ring(P1)
    gens = (("1", 0), ("2x3", 3), ("x3x5y6", 14), ("x3y6", 9), ("x5y6", 11), ("y6", 6))
    ann = {"y6": IdealSpec.custom(["p", "v1"])}
    rel = ({"x3y6": R.scalar(2), "x5y6": -R.v(1)},)
    om = [LinearModule(BP, gens, ann, rel) for _ in range(3)]
    pg = (("1", 0), ("x5", 5), ("x3y6", 9), ("x3x5y6", 14), ("y6", 6), ("x5y6", 11))
    tors = IdealSpec.custom(["v1"])
    a1 = LinearModule(P1, pg, {"y6": tors, "x5y6": tors})
    delta0 = LinearMap("δ", a1, om[0], 1, {"x5": {"y6": 1}})
    two = LinearMap("2", om[0], om[1], 0, {g: {g: 2} for g, _ in gens})
    red = LinearMap("r", om[1], a1, 0, {"1": {"1": 1}, "2x3": {"x5": R1.v(1)},
                                         **{g: {g: 1} for g in ("x3x5y6", "x3y6", "x5y6", "y6")}})
    delta = LinearMap("δ", a1, om[2], 1, {"x5": {"y6": 1}})
    alg = palg.so7_algebra()
    qtab = {"x5": {alg.mono_str(k): c for k, c in alg.apply_q(0, alg.parse("x5")).items()}}
    return check_les([delta0, two, red, delta], degrees, q_checks=[(red, delta, qtab)])


def _so7_record() -> ExampleRecord:
    alg = palg.so7_algebra()
    omega = loads(_SO7_OMEGA)

    def compute(window):
        out = {}
        out["P(1)"] = _in_window(ahss.run_to_collapse(alg, "P(1)@p=2", [1], window=window), window)
        out["Omega/I1"] = omega_quotient(omega, IdealSpec.I(1))
        out["K(1)"] = morava_k(omega, 1)
        out["K(2)"] = morava_k(omega, 2)
        out["K(3)"] = morava_k(omega, 3)
        out["les"] = str(so7_les())
        return out

    expected = {
        "P(1)": loads(_SO7_P1),
        "Omega/I1": presentation("P(1)@p=2", [("1", (0, 0), ""), ("y6", (6, 3), "v1")]),
        "K(1)": presentation("K(1)@p=2", [("1", (0, 0), "")]),
        "K(2)": presentation("K(2)@p=2", [("1", (0, 0), ""), ("y6", (6, 3), "")]),
        "K(3)": presentation("K(3)@p=2", [("1", (0, 0), ""), ("y6", (6, 3), "")]),
        "les": "exact in degrees -12..16",
    }
    return ExampleRecord("so7", "SO7 at p=2: AHSS at P(1), Omega and its K(n) reductions, the P(1) exact sequence",
                         {"algebra": alg, "omega": omega}, expected, compute)


# -- BSO_3 --------------------------------------------------------------------------

def _so3_grbp(max_deg: int) -> ModulePresentation:
    """(BP*{1} ⊕ BP*[c3]^+/(2,v1)) ⊗ Z[c2], c2 in degree 4 and c3 in degree 6."""
    items = []
    for a in range(max_deg // 4 + 1):
        for b in range((max_deg - 4 * a) // 6 + 1):
            lab = "".join(x for x in (_pw("c2", a), _pw("c3", b)) if x) or "1"
            items.append((lab, (4 * a + 6 * b, 2 * a + 3 * b), "" if b == 0 else "p,v1"))
    return presentation("BP@p=2", items)


def _pw(g, k):
    return "" if k == 0 else (g if k == 1 else f"{g}^{k}")


def _so3_record() -> ExampleRecord:
    alg = palg.so3_algebra()

    def compute(window):
        w = min(window, 24)
        mod = alg.qmodule(w, tau_max=w // 2).restrict(lambda lab: not lab.startswith("t"))
        mod = mod.restrict(lambda lab: mod.bidegrees[lab][0] <= w - 6)
        out = {"Q relations": mod.check_relations([0, 1, 2])}
        out["Q0(w2)"] = alg.poly_str(alg.apply_q(0, alg.parse("w2")))
        out["Q1(w3)"] = alg.poly_str(alg.apply_q(1, alg.parse("w3")))
        # free rank of grBP ⊗ Z_(2) equals the Q0-homology of H in each degree
        hom = {d: _q0_homology(mod, d) for d in range(w - 6)}
        grbp = _so3_grbp(w - 6)
        free = {d: sum(1 for s in grbp.summands if s.bidegree[0] == d and s.ann.is_zero)
                for d in range(w - 6)}
        out["Q0-homology = free rank"] = hom == free
        return out

    expected = {"Q relations": [], "Q0(w2)": "w3", "Q1(w3)": "w3^2",
                "Q0-homology = free rank": True}
    return ExampleRecord("so3", "BSO3 at p=2: Q-table consistency and the free part of grBP*",
                         {"algebra": alg, "grBP (curated)": _so3_grbp(24)}, expected, compute)


def _q0_homology(mod: palg.QModule, d: int) -> int:
    """dim of Q0-homology in first degree d (labels outside the module count as zero)."""
    import numpy as np

    from . import linalg

    def deg(k):
        return [lab for lab in mod.labels if mod.bidegree(lab)[0] == k]

    def rank(src, tgt):
        if not src or not tgt:
            return 0
        idx = {lab: j for j, lab in enumerate(tgt)}
        M = np.zeros((len(src), len(tgt)), dtype=np.int64)
        for r, lab in enumerate(src):
            for k, c in mod.q(0, lab).items():
                if k in idx:
                    M[r, idx[k]] = c % 2
        return linalg.rank(M, 2)

    here = deg(d)
    return len(here) - rank(here, deg(d + 1)) - rank(deg(d - 1), here)


# -- the Morava tower on synthetic free modules -------------------------------------

def _unalias(pres: ModulePresentation, mapping: dict) -> ModulePresentation:
    from dataclasses import replace
    return replace(pres, summands=tuple(replace(s, label=mapping.get(s.label, s.label))
                                        for s in pres.summands))


def tower_pipeline(module, p: int, n: int, base: list, window: int, aliases=None) -> dict:
    """AHSS at P(s) for s = 1..n, the tower from P(1), and K(s) for s <= n+1."""
    aliases = aliases or {}
    out = {}
    pr = free_pairings(p, n, base)
    ahss_levels = {}
    for s in range(1, n + 1):
        res = ahss.run_to_collapse(module, TheoryTag.P(s, p), list(range(s, n)) or [s],
                                   window=window, force=(s == n))
        ahss_levels[s] = _unalias(res, aliases)
    level = ahss_levels[1]
    for s in range(1, n):
        level = tower_step(level, s, pr[s], n)
        out[f"tower P({s + 1}) = AHSS P({s + 1})"] = level.same(ahss_levels[s + 1])
    out["P(n) rank"] = len(level)
    for s in range(1, n + 2):
        out[f"K({s}) rank"] = len(collapse_k(ahss_levels[1], s, pr))
    return out


def _free_labels(n: int, base: list) -> list:
    import itertools
    return [word_label(J, b) for b in base for k in range(n + 1)
            for J in itertools.combinations(range(n), k)]


def _vn_record(n: int = 2) -> ExampleRecord:
    p = 2
    mod = palg.free_qmodule(p, n + 1, [("b", (0, 0))])

    def compute(window):
        out = {}
        res = ahss.run_to_collapse(mod, TheoryTag.P(1, p), list(range(1, n + 1)), window=window)
        out["P(1)"] = res
        pr = free_pairings(p, n + 1, ["b"], mod)
        for s in range(1, n + 2):
            out[f"K({s})"] = collapse_k(res, s, pr)
        return out

    top = word_label(range(1, n + 1), "b")
    dm = sum(palg.q_shift(i, p)[0] for i in range(1, n + 1))
    dmp = sum(palg.q_shift(i, p)[1] for i in range(1, n + 1))
    ann = ",".join(f"v{i}" for i in range(1, n + 1))
    expected = {"P(1)": presentation(TheoryTag.P(1, p), [(top, (dm, dmp), ann),
                                                          ("Q0" + top, (dm + 1, dmp), ann)])}
    for s in range(1, n + 1):
        expected[f"K({s})"] = ModulePresentation(TheoryTag.K(s, p), ())
    full = palg.free_qmodule(p, n + 1, [("b", (0, 0))])
    expected[f"K({n + 1})"] = presentation(TheoryTag.K(n + 1, p),
                                           [(lab, full.bidegree(lab), "") for lab in full.labels])
    return ExampleRecord("v_n", f"V({n}) at p=2: H* free over Q({n}); P(1)* is P({n + 1})*-free",
                         {"module": mod, "n": n}, expected, compute)


def _chi_record(n: int = 2) -> ExampleRecord:
    p = 2
    mod = palg.chi_tilde(p, n, xi_max=1)
    base = ["a'", "xia'"]
    full = frozenset(range(n))
    aliases = {"xi": word_label(full, "a'"), "xi^2": word_label(full, "xia'")}

    def compute(window):
        out = {}
        cert, report = palg.verify_q_freeness(mod, n, base)
        out["Q(n-1)-free"] = cert is not None
        res = ahss.run(mod, TheoryTag.P(1, p), list(range(1, n)) or [1], window=window)
        out["I_n-torsion"] = res.presentation.is_torsion_for(IdealSpec.I(n).minus(IdealSpec.I(1)))
        out.update(tower_pipeline(mod, p, n, base, window, aliases))
        kn = collapse_k(_unalias(res.presentation, aliases), n, free_pairings(p, n, base))
        out[f"K({n}) bidegrees"] = sorted(s.bidegree for s in kn.summands)
        return out

    expected = {"Q(n-1)-free": True, "I_n-torsion": True, "P(n) rank": len(mod.labels),
                f"K({n}) bidegrees": sorted(mod.bidegree(lab) for lab in mod.labels)}
    for s in range(1, n):
        expected[f"tower P({s + 1}) = AHSS P({s + 1})"] = True
        expected[f"K({s}) rank"] = 0
    expected[f"K({n}) rank"] = len(mod.labels)
    expected[f"K({n + 1}) rank"] = len(mod.labels)
    return ExampleRecord(f"chi_tilde({n})", f"the reduced motive of a pure symbol of length {n + 1}, p=2",
                         {"module": mod, "n": n}, expected, compute)


# -- Rost motives over the reals ----------------------------------------------------

def _m2_record() -> ExampleRecord:
    M = realmot.build_rost_motive(2)

    def compute(window):
        out = {"basis": [M.label(m) for m in M.basis()]}
        out["Q0(t^-1)"] = {realmot.mono_str(k): v for k, v in realmot.derive_q0_tau_inverse().items()}
        out["t injective"] = M.tau_injective()
        for s in (1, 2, 3):
            res = ahss.run_to_collapse(M, TheoryTag.P(s, 2), [s], window=window)
            out[f"P({s}) chow"] = _chow(res)
        out["K(1) chow"] = base_change(out["P(1) chow"], TheoryTag.K(1, 2))
        out["cycle map"] = {n: [realmot.mono_str(realmot.cycle_map(n, i)) for i in range(n)]
                            for n in (1, 2, 3)}
        out["cycle map injective"] = all(realmot.cycle_map_injective(n) for n in (1, 2, 3))
        return out

    def chow(s, torsion):
        items = [("1", (0, 0), ""), ("Q0a'", (4, 2), ""),
                 ("Q1a'", (6, 3), "v1" if torsion else "")]
        return presentation(TheoryTag.P(s, 2), items)

    expected = {
        "basis": ["1", "r", "r^2", "a'", "Q0a'", "rQ0a'", "Q1a'"],
        "Q0(t^-1)": {"r t^-2": 1},
        "t injective": True,
        "P(1) chow": chow(1, True), "P(2) chow": chow(2, False), "P(3) chow": chow(3, False),
        "K(1) chow": presentation("K(1)@p=2", [("1", (0, 0), ""), ("Q0a'", (4, 2), "")]),
        "cycle map": {1: ["r^2"], 2: ["r^6", "r^4"], 3: ["r^14", "r^12", "r^8"]},
        "cycle map injective": True,
    }
    return ExampleRecord("m2", "the Rost motive M_2 over the reals at p=2",
                         {"motive": M}, expected, compute)


def q3_module() -> palg.QModule:
    """H^{*,*'}(Q^3; Z/2) over the reals as M_2 ⊕ M_1(1)[2]."""
    m2 = realmot.build_rost_motive(2).qmodule()
    m1 = realmot.build_rost_motive(1).qmodule()
    m2 = palg.shift(m2, (0, 0), rename={"Q1a'": "h^3"})
    m1 = palg.shift(m1, (2, 1), rename={"1": "h", "a'": "h^2"}, suffix="h")
    return palg.direct_sum(m2, m1, name="Q3")


def _q3_record() -> ExampleRecord:
    mod = q3_module()

    def compute(window):
        res = _chow(ahss.run_to_collapse(mod, TheoryTag.P(1, 2), [1], window=window))
        return {"P(1) chow": res, "K(1) chow": morava_k(res, 1)}

    expected = {
        "P(1) chow": presentation("P(1)@p=2", [("1", (0, 0), ""), ("h", (2, 1), ""),
                                               ("h^2", (4, 2), ""), ("Q0a'", (4, 2), ""),
                                               ("h^3", (6, 3), "v1")]),
        "K(1) chow": presentation("K(1)@p=2", [("1", (0, 0), ""), ("h", (2, 1), ""),
                                               ("h^2", (4, 2), ""), ("Q0a'", (4, 2), "")]),
    }
    return ExampleRecord("q3", "the real quadric Q^3: h^3 = Q1a', c = Q0a'",
                         {"module": mod}, expected, compute)


# -- F_4 at p = 3 -------------------------------------------------------------------

def _f4_record() -> ExampleRecord:
    from . import adjoint

    def compute(window):
        spec = adjoint.AdAlgebraSpec(3)
        rep = adjoint.nonnilpotency_witness(3, 8)
        return {"ad table": [str(x) for x in rep.values], "witness": rep.ok,
                "K(2) rank": spec.rank()}

    expected = {"ad table": ["-v2*z0", "v2^2*z0", "-v2^3*z0", "v2^4*z0"],
                "witness": True, "K(2) rank": 48}
    return ExampleRecord("f4_p3", "F4 at p=3: ad(y)^2(z) = -v2 z in K(2)_*(F4)",
                         {"p": 3}, expected, compute)


# -- registry -----------------------------------------------------------------------

def example(name: str) -> ExampleRecord:
    """Look up a curated example; ``chi_tilde(3)`` and ``v_n(3)`` select n."""
    m = re.fullmatch(r"(chi_tilde|v_n)(?:\((\d+|n)\))?", name.strip())
    if m:
        n = int(m.group(2)) if m.group(2) and m.group(2) != "n" else 2
        return _chi_record(n) if m.group(1) == "chi_tilde" else _vn_record(n)
    builders = {"bzp": lambda: _bz_record("bzp", 3), "bz2": lambda: _bz_record("bz2", 2),
                "so3": _so3_record, "so7": _so7_record, "m2": _m2_record,
                "q3": _q3_record, "f4_p3": _f4_record}
    if name not in builders:
        raise ExampleError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    return builders[name]()


def check_example(name: str, window: int = 40) -> list[str]:
    return example(name).diff(window)
