"""p-series of formal group laws and the rings h*[y]/([p](y)).

Only two representatives are implemented: the mod-I_inf^2 p-series over BP*,

    [p](y) = p*y + v1*y^p + v2*y^(p^2) + ...,

and the Honda series v_n*y^(p^n) over P(n)*, k(n)*, K(n)*.  Power series in y
are truncated at an explicit y-exponent ``bound``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .coeff import (CoeffElement, CoeffError, CoeffRing, IdealSpec, TheoryTag,
                    default_bound, mono_mul, reduce_mod, residue)


class FGLError(ValueError):
    pass


@dataclass(frozen=True)
class FGLSpec:
    kind: str  # "mod-I2" or "honda"
    theory: TheoryTag
    n: int | None = None

    def __post_init__(self):
        if self.kind == "mod-I2":
            if self.theory.kind != "BP":
                raise FGLError("the mod-I^2 p-series lives over BP")
        elif self.kind == "honda":
            if self.theory.kind not in ("P", "k", "K"):
                raise FGLError("the Honda law needs P(n), k(n) or K(n)")
            if self.n is None:
                object.__setattr__(self, "n", self.theory.n)
            if self.n != self.theory.n:
                raise FGLError("Honda height must match the theory height")
        else:
            raise FGLError(f"unknown formal group law kind {self.kind!r}")

    @classmethod
    def bp(cls, p: int) -> FGLSpec:
        return cls("mod-I2", TheoryTag.BP(p))

    @classmethod
    def honda(cls, theory: TheoryTag | str) -> FGLSpec:
        if isinstance(theory, str):
            theory = TheoryTag.parse(theory)
        return cls("honda", theory, theory.n)

    @property
    def p(self) -> int:
        return self.theory.p


def _ring_for(theory: TheoryTag, ybound: int) -> CoeffRing:
    return CoeffRing(theory, max(default_bound(theory.p), 2 * ybound + 2))


@dataclass(frozen=True)
class TruncatedSeries:
    ring: CoeffRing
    coeffs: tuple  # ((k, CoeffElement), ...) with k ascending, nonzero
    bound: int
    var: str = "y"

    @classmethod
    def from_dict(cls, ring, d: dict, bound: int, var: str = "y") -> TruncatedSeries:
        items = tuple(sorted((k, c) for k, c in d.items() if c and k <= bound))
        return cls(ring, items, bound, var)

    def __getitem__(self, k: int) -> CoeffElement:
        return dict(self.coeffs).get(k, self.ring.zero())

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def degree(self) -> int:
        """Total topological degree (|y| = 2); error if not homogeneous."""
        ds = set()
        for k, c in self.coeffs:
            ds |= {d + 2 * k for d in c.degrees()}
        if len(ds) != 1:
            raise FGLError("series is not homogeneous")
        return ds.pop()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for k, c in self.coeffs:
            ypart = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            sign, body = _coef_str(c)
            term = body if not ypart else (ypart if body == "1" else f"{body}*{ypart}")
            if not out:
                out = ("-" if sign < 0 else "") + term
            else:
                out += (" - " if sign < 0 else " + ") + term
        return out

    __repr__ = __str__


def _coef_str(c: CoeffElement) -> tuple[int, str]:
    if len(c.terms) == 1:
        s = str(c)
        if s.startswith("-"):
            return -1, s[1:]
        return 1, s
    return 1, f"({c})"


def p_series(spec: FGLSpec, bound: int) -> TruncatedSeries:
    if bound < 1:
        raise FGLError("bound must be >= 1")
    p = spec.p
    ring = _ring_for(spec.theory, bound)
    if spec.kind == "mod-I2":
        d = {1: ring.scalar(p)}
        i = 1
        while p**i <= bound:
            d[p**i] = d.get(p**i, ring.zero()) + ring.v(i)
            i += 1
        return TruncatedSeries.from_dict(ring, d, bound)
    n = spec.n
    if p**n > bound:
        raise FGLError("bound too small to contain leading term")
    return TruncatedSeries.from_dict(ring, {p**n: ring.v(n)}, bound)


# -- h*[y]/([p](y)) --------------------------------------------------------------

class BZpRing:
    """h*[y]/([p](y)) truncated at y^bound, for h = BP, P(n), K(n).

    ``normal_form`` eliminates the lowest relation term: p*y over BP, v_n*y^(p^n)
    over P(n), y^(p^n) over K(n).  Each rewrite strictly raises the y-exponent,
    so one ascending pass reaches the normal form.
    """

    def __init__(self, theory: TheoryTag | str, bound: int):
        if isinstance(theory, str):
            theory = TheoryTag.parse(theory)
        if theory.kind not in ("BP", "P", "K"):
            raise FGLError(f"bzp_ring is not supported for {theory}")
        if bound < 1:
            raise FGLError("bound must be >= 1")
        self.theory = theory
        self.bound = bound
        self.p = theory.p
        self.ring = _ring_for(theory, bound + theory.p ** ((theory.n or 0) + 1))
        if theory.kind == "BP":
            self.relation = p_series(FGLSpec.bp(self.p), bound)
        else:
            full = p_series(FGLSpec.bp(self.p), bound)
            ring = self.ring
            self.relation = TruncatedSeries.from_dict(
                ring, {k: ring.element(reduce_mod(c, theory.kills).terms) for k, c in full.coeffs}, bound)

    def __repr__(self):
        return f"BZpRing({self.theory}, bound={self.bound})"

    # construction
    def element(self, d: dict) -> TruncatedSeries:
        ring = self.ring
        conv = {}
        for k, c in d.items():
            if isinstance(c, (int, Fraction)):
                c = ring.scalar(c)
            elif isinstance(c, str):
                c = ring.parse(c)
            conv[k] = c
        return TruncatedSeries.from_dict(ring, conv, self.bound)

    def y(self, k: int = 1) -> TruncatedSeries:
        return self.element({k: 1})

    # arithmetic
    def add(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        d = a.as_dict()
        for k, c in b.coeffs:
            d[k] = d.get(k, self.ring.zero()) + c
        return self.normal_form(d)

    def mul(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        d: dict = {}
        for k1, c1 in a.coeffs:
            for k2, c2 in b.coeffs:
                if k1 + k2 <= self.bound:
                    d[k1 + k2] = d.get(k1 + k2, self.ring.zero()) + c1 * c2
        return self.normal_form(d)

    def normal_form(self, x) -> TruncatedSeries:
        d = dict(x.coeffs) if isinstance(x, TruncatedSeries) else dict(x)
        ring, p, B = self.ring, self.p, self.bound
        d = {k: (ring.scalar(c) if isinstance(c, (int, Fraction)) else c) for k, c in d.items() if k <= B}
        t = self.theory
        if t.kind == "K":
            top = p**t.n
            return TruncatedSeries.from_dict(ring, {k: c for k, c in d.items() if k < top}, B)
        for k in range(B + 1):
            c = d.get(k)
            if not c:
                continue
            if t.kind == "BP":
                if k == 0:
                    continue
                keep, carry = [], []
                for mono, s in c.terms:
                    r = residue(s, p)
                    q = (Fraction(s) - r) / p
                    if r:
                        keep.append((mono, r))
                    if q:
                        carry.append((mono, q))
                if not carry:
                    continue
                d[k] = ring.element(keep)
                carry_el = ring.element(carry)
                i = 1
                while k - 1 + p**i <= B:
                    kk = k - 1 + p**i
                    d[kk] = d.get(kk, ring.zero()) - carry_el * ring.v(i)
                    i += 1
            else:
                n = t.n
                if k < p**n:
                    continue
                keep, carry = [], []
                for mono, s in c.terms:
                    e = dict(mono).get(n, 0)
                    if e >= 1:
                        carry.append((mono_mul(mono, ((n, -1),)), s))
                    else:
                        keep.append((mono, s))
                if not carry:
                    continue
                d[k] = ring.element(keep)
                carry_el = ring.element(carry)
                j = 1
                while k - p**n + p ** (n + j) <= B:
                    kk = k - p**n + p ** (n + j)
                    d[kk] = d.get(kk, ring.zero()) - carry_el * ring.v(n + j)
                    j += 1
        return TruncatedSeries.from_dict(ring, d, B)

    def relation_value(self) -> TruncatedSeries:
        """[p](y) in normal form; zero by construction."""
        return self.normal_form(self.relation)

    def free_rank(self) -> int:
        """Number of y^k (k <= bound) that survive normal form (K(n) only)."""
        if self.theory.kind != "K":
            raise FGLError("free_rank is defined for K(n)")
        return sum(1 for k in range(self.bound + 1) if self.normal_form({k: 1}).coeffs)


def bzp_ring(theory: TheoryTag | str, bound: int) -> BZpRing:
    return BZpRing(theory, bound)


def vn_torsion_check(R: BZpRing) -> bool:
    """True iff v_n acts injectively on {y^k : k < bound} in P(n)*[y]/([p](y)).

    The images are computed in a larger ring so that v_n*y^k (which rewrites to
    -v_{n+1} y^(k - p^n + p^(n+1)) - ...) stays inside the truncation.
    """
    t = R.theory
    if t.kind != "P":
        raise FGLError("vn_torsion_check needs a P(n) ring")
    n, p = t.n, t.p
    big = BZpRing(t, R.bound - p**n + p ** (n + 1) + 1)
    vn = big.ring.v(n)
    images = [big.normal_form({k: vn}) for k in range(R.bound)]
    keys = sorted({(k, mono) for im in images for k, c in im.coeffs for mono, _ in c.terms})
    if not keys:
        return R.bound == 0
    index = {key: j for j, key in enumerate(keys)}
    M = np.zeros((len(images), len(keys)), dtype=np.int64)
    for r, im in enumerate(images):
        for k, c in im.coeffs:
            for mono, s in c.terms:
                M[r, index[(k, mono)]] = int(s) % p
    return linalg.rank(M, p) == len(images)
