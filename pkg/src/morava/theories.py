"""Quotient theories on module presentations, the Morava tower, and exact sequences."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import fgl, linalg
from .coeff import (CoeffElement, IdealSpec, TheoryTag, mono_mul,
                    quotient_theory, theory_generators, v_monomials)
from .palg import QModule, q_shift, word_label
from .presentation import CyclicSummand, ModulePresentation, base_change


class TheoryError(ValueError):
    pass


# -- quotients and tensor products -------------------------------------------------

def omega_quotient(omega, ideal: IdealSpec | str):
    """Omega/(ideal): P(n) for I(n), BP<m-1> for J(m), and so on.

    A :class:`morava.fgl.BZpRing` over BP is sent to the corresponding ring over
    P(n) (only I(n) is meaningful there).
    """
    if isinstance(ideal, str):
        ideal = IdealSpec.parse(ideal)
    if isinstance(omega, fgl.BZpRing):
        if omega.theory.kind != "BP":
            raise TheoryError("omega_quotient expects the BP ring")
        if ideal.is_zero:
            return omega
        target = quotient_theory(omega.theory, ideal)
        if target is None or target.kind != "P":
            raise TheoryError(f"only I(n) quotients are supported on rings, not {ideal}")
        return fgl.bzp_ring(target, omega.bound)
    if omega.theory.kind != "BP":
        raise TheoryError("omega_quotient expects a BP presentation")
    if ideal.is_zero:
        return omega
    target = quotient_theory(omega.theory, ideal)
    if target is None:
        raise TheoryError(f"{ideal} is not an I- or J-type ideal")
    return base_change(omega, target)


def morava_k(omega, n: int):
    """Omega ⊗_{BP*} K(n)*."""
    if isinstance(omega, fgl.BZpRing):
        return fgl.bzp_ring(TheoryTag.K(n, omega.p), omega.bound)
    return base_change(omega, TheoryTag.K(n, omega.theory.p))


# -- the tower ---------------------------------------------------------------------

def torsion_height(pres: ModulePresentation) -> int:
    """n such that every summand is P(n)*-free and I_n-torsion; error otherwise."""
    t = pres.theory
    if t.kind != "P":
        raise TheoryError(f"expected a P(s)-presentation, got {t}")
    heights = set()
    for s in pres.summands:
        full = s.ann + t.kills
        if full.tail is not None or not full.has_p:
            raise TheoryError(f"summand {s.label} is not of the form P(n)*")
        k = len(full.vs) + 1
        if full != IdealSpec.I(k):
            raise TheoryError(f"summand {s.label} has annihilator {full}, not an I_n")
        heights.add(k)
    if len(heights) > 1:
        raise TheoryError(f"mixed heights {sorted(heights)}: not P(n)*-free")
    return heights.pop() if heights else t.n


def _split(label: str, bases: Iterable[str], s: int):
    for b in sorted(bases, key=len, reverse=True):
        if label.endswith(b):
            pre = label[: len(label) - len(b)]
            idx = [int(x) for x in re.findall(r"Q(\d+)", pre)]
            if "".join(f"Q{i}" for i in idx) == pre and idx == sorted(set(idx)) and all(i < s for i in idx):
                return idx, b
    return None


def tower_step(pres: ModulePresentation, s: int, pairing: dict, n: int | None = None) -> ModulePresentation:
    """P(s) ≅ P(n)⊗Q(s-1)⊗B_s  ->  P(s+1) ≅ P(n)⊗Q(s)⊗B_{s+1}.

    ``pairing`` maps each label of B_s to its Q_s-preimage in B_{s+1}.  Labels
    of ``pres`` must read (Q-word in indices < s) + (B_s label).
    """
    t = pres.theory
    if t.kind != "P" or t.n != s:
        raise TheoryError(f"tower_step at s={s} needs a P({s}) presentation")
    h = torsion_height(pres) if pres.summands else (n or s + 1)
    if n is not None and pres.summands and n != h:
        raise TheoryError(f"presentation has height {h}, not {n}")
    n = h if n is None else n
    if s >= n:
        raise TheoryError(f"tower_step needs s < n (s={s}, n={n})")
    if len(set(pairing.values())) != len(pairing):
        raise TheoryError("pairing is not bijective")
    target = TheoryTag.P(s + 1, t.p)
    ann = IdealSpec.I(n)
    dm, dmp = q_shift(s, t.p)
    out = []
    for sm in pres.summands:
        split = _split(sm.label, pairing, s)
        if split is None:
            raise TheoryError(f"label {sm.label} is not a Q-word on B_{s}")
        idx, b = split
        m, mp = sm.bidegree
        out.append(CyclicSummand(sm.label, sm.bidegree, ann))
        new = "".join(f"Q{i}" for i in idx) + pairing[b]
        out.append(CyclicSummand(new, (m - dm, mp - dmp), ann))
    used = {(_split(sm.label, pairing, s) or (None, None))[1] for sm in pres.summands}
    if pres.summands and used != set(pairing):
        raise TheoryError("pairing is not bijective onto the B_s labels in use")
    return ModulePresentation(target, tuple(out), pres.invariant)


def free_pairings(p: int, n: int, base: Iterable[str], module: QModule | None = None) -> dict:
    """Pairings B_s -> B_{s+1} for Q(n-1)⊗B, with B_s = Q_s..Q_{n-1} B.

    With ``module`` given, each pair is verified: Q_s(B_{s+1} label) = B_s label.
    """
    out = {}
    for s in range(1, n):
        pr = {}
        for b in base:
            hi = word_label(range(s + 1, n), b)
            lo = word_label(range(s, n), b)
            if module is not None and module.q(s, hi) != {lo: 1} and module.q(s, hi) != {lo: p - 1}:
                raise TheoryError(f"Q{s}({hi}) != {lo}")
            pr[lo] = hi
        out[s] = pr
    return out


def collapse_k(pres: ModulePresentation, s: int, pairings: dict | None = None) -> ModulePresentation:
    """K(s)* ⊗ X for X = P(n)*⊗B certified: 0 for s < n, K(s)*⊗(P(n)-level basis) for s >= n."""
    n = torsion_height(pres)
    p = pres.theory.p
    if s < n:
        return ModulePresentation(TheoryTag.K(s, p), ())
    level = pres
    for k in range(pres.theory.n, n):
        if not pairings or k not in pairings:
            raise TheoryError(f"uncertified: need the Q{k}-pairing to reach P({n})")
        level = tower_step(level, k, pairings[k], n)
    return base_change(level, TheoryTag.K(s, p))


# -- exact sequences of finitely presented modules ---------------------------------

@dataclass(frozen=True)
class LinearModule:
    """h*-module with generators, monomial annihilators and extra relations."""
    theory: TheoryTag
    gens: tuple  # ((label, degree), ...)
    ann: dict = field(default_factory=dict)  # label -> IdealSpec
    relations: tuple = ()  # dicts label -> CoeffElement, homogeneous

    def degree_of(self, label):
        return dict(self.gens)[label]

    def _killed(self, label, mono) -> bool:
        a = self.ann.get(label, IdealSpec()) + self.theory.kills
        return any(a.kills(i) for i, e in mono if e > 0)

    def _monos(self, deg):
        if deg > 0:
            return []
        return v_monomials(theory_generators(self.theory, -deg), self.theory.p, deg)

    def basis(self, d: int) -> list:
        out = []
        for lab, dg in self.gens:
            for mu in self._monos(d - dg):
                if not self._killed(lab, mu):
                    out.append((lab, mu))
        return out

    def relation_columns(self, d: int) -> list[dict]:
        """Relations in degree d as sparse columns {(label, mono): scalar}."""
        p = self.theory.p
        cols = []
        for lab, mu in self.basis(d):
            a = self.ann.get(lab, IdealSpec()) + self.theory.kills
            if a.has_p:
                cols.append({(lab, mu): Fraction(p)})
        for rel in self.relations:
            rd = _rel_degree(self, rel)
            for mu in self._monos(d - rd):
                col: dict = {}
                for lab, coeff in rel.items():
                    for mono, sc in coeff.terms:
                        mm = mono_mul(mu, mono)
                        if not self._killed(lab, mm):
                            col[(lab, mm)] = col.get((lab, mm), 0) + Fraction(sc)
                col = {k: v for k, v in col.items() if v}
                if col:
                    cols.append(col)
        return cols

    def rank_mod_p(self, d: int) -> int:
        """F_p-dimension of the module in degree d after tensoring with F_p."""
        import numpy as np
        bas = self.basis(d)
        if not bas:
            return 0
        idx = {b: j for j, b in enumerate(bas)}
        p = self.theory.p
        rows = []
        for col in self.relation_columns(d):
            r = np.zeros(len(bas), dtype=np.int64)
            for k, v in col.items():
                if v.denominator % p:
                    r[idx[k]] = int(v.numerator * pow(v.denominator, -1, p)) % p
            rows.append(r)
        return len(bas) - (linalg.rank(np.array(rows), p) if rows else 0)


def _rel_degree(mod: LinearModule, rel: dict) -> int:
    degs = {mod.degree_of(lab) + d for lab, c in rel.items() for d in c.degrees()}
    if len(degs) != 1:
        raise TheoryError("relation is not homogeneous")
    return degs.pop()


@dataclass(frozen=True)
class LinearMap:
    """Map of degree ``shift`` given on generators by label -> {label: CoeffElement|int}."""
    name: str
    source: LinearModule
    target: LinearModule
    shift: int
    images: dict

    def column(self, lab, mu) -> dict:
        out: dict = {}
        for lab2, coeff in self.images.get(lab, {}).items():
            terms = coeff.terms if isinstance(coeff, CoeffElement) else (((), Fraction(coeff)),)
            for mono, sc in terms:
                mm = mono_mul(mu, mono)
                if not self.target._killed(lab2, mm):
                    out[(lab2, mm)] = out.get((lab2, mm), 0) + Fraction(sc)
        return {k: v for k, v in out.items() if v}


def _dense(cols: list[dict], basis: list) -> list[list[Fraction]]:
    """Columns -> row-major matrix (len(basis) x len(cols))."""
    idx = {b: j for j, b in enumerate(basis)}
    M = [[Fraction(0)] * len(cols) for _ in basis]
    for c, col in enumerate(cols):
        for k, v in col.items():
            if k not in idx:
                raise TheoryError(f"image term {k} is outside the target basis")
            M[idx[k]][c] = Fraction(v)
    return M


@dataclass
class LESReport:
    ok: bool
    failures: list
    degrees: tuple

    def __str__(self):
        if self.ok:
            return f"exact in degrees {self.degrees[0]}..{self.degrees[1]}"
        return "not exact: " + "; ".join(self.failures[:5])


def check_les(maps: list[LinearMap], degrees: tuple, q_checks: Iterable = (),
              odd_zero: Iterable[LinearModule] = ()) -> LESReport:
    """Exactness at every interior node of the chain maps[0], maps[1], ...

    ``q_checks`` holds (r, delta, {label: {label: coefficient}}): the composite
    r∘delta on a generator must equal the tabled Q-image.  ``odd_zero`` lists
    modules that must vanish in odd degrees.
    """
    lo, hi = degrees
    p = maps[0].source.theory.p
    failures = []
    for f, g in zip(maps, maps[1:]):
        if f.target is not g.source:
            raise TheoryError(f"{f.name} and {g.name} do not compose")
        A, B, C = f.source, f.target, g.target
        for d in range(lo, hi + 1):
            bA, bB = A.basis(d - f.shift), B.basis(d)
            bC = C.basis(d + g.shift)
            if not bB:
                continue
            F = _dense([f.column(*x) for x in bA], bB) if bA else [[] for _ in bB]
            RB = _dense(B.relation_columns(d), bB)
            G = _dense([g.column(*x) for x in bB], bC) if bC else []
            RC = _dense(C.relation_columns(d + g.shift), bC) if bC else []
            imgB = [F[i] + RB[i] for i in range(len(bB))]
            # g o f lands in the relations of C
            if bC:
                for j in range(len(bA)):
                    v = [sum(G[r][k] * F[k][j] for k in range(len(bB))) for r in range(len(bC))]
                    if any(v) and not linalg.plocal_solvable(RC, v, p):
                        failures.append(f"{g.name}∘{f.name} != 0 in degree {d}")
                        break
            # ker g ⊆ im f + relations
            if bC:
                stacked = [G[r] + RC[r] for r in range(len(bC))]
                kern = linalg.plocal_kernel(stacked, len(bB) + len(RC[0]) if RC else len(bB), p)
                kern = [v[: len(bB)] for v in kern]
            else:
                kern = [[Fraction(int(i == j)) for j in range(len(bB))] for i in range(len(bB))]
            for v in kern:
                if any(v) and not (imgB[0] and linalg.plocal_solvable(imgB, v, p)):
                    failures.append(f"ker {g.name} ⊄ im {f.name} in degree {d}")
                    break
    for r, delta, table in q_checks:
        for lab, expected in table.items():
            once = delta.images.get(lab, {})
            total: dict = {}
            for lab2, c in once.items():
                terms = c.terms if isinstance(c, CoeffElement) else (((), Fraction(c)),)
                for mono, sc in terms:
                    for lab3, c3 in r.images.get(lab2, {}).items():
                        t3 = c3.terms if isinstance(c3, CoeffElement) else (((), Fraction(c3)),)
                        for mono3, sc3 in t3:
                            if not mono_mul(mono, mono3):
                                total[lab3] = (total.get(lab3, 0) + Fraction(sc) * Fraction(sc3))
            got = {k: int(v) % p for k, v in total.items() if int(v) % p}
            want = {k: v % p for k, v in expected.items() if v % p}
            if got != want:
                failures.append(f"r∘δ({lab}) = {got}, expected Q-image {want}")
    for mod in odd_zero:
        for d in range(lo, hi + 1):
            if d % 2 and mod.rank_mod_p(d):
                failures.append(f"odd degree {d} is nonzero")
                break
    return LESReport(not failures, failures, (lo, hi))
