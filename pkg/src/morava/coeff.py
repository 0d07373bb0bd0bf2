"""Graded coefficient rings BP*, P(n)*, k(n)*, K(n)*, BP<n>* and their ideals.

Elements are sparse polynomials in v_1, v_2, ... with |v_i| = -2(p^i - 1).
Scalars are exact: ``Fraction`` with p-free denominator for the p-local
theories, residues ``0 <= c < p`` for the mod-p ones.  Every ring carries an
absolute degree bound ``bound``; terms with ``|degree| > bound`` are dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

Monomial = tuple  # tuple[(index, exponent), ...] sorted by index


class CoeffError(ValueError):
    pass


# -- p-local scalars ---------------------------------------------------------

def local_scalar(num: int | Fraction, den: int = 1, *, p: int) -> Fraction:
    """Return num/den as an element of Z_(p); raise if p divides the denominator."""
    x = Fraction(num) / den
    if x.denominator % p == 0:
        raise CoeffError(f"{x} is not in Z_({p})")
    return x


def valuation(x: Fraction | int, p: int) -> float:
    """p-adic valuation; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def residue(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise CoeffError(f"{x} is not in Z_({p})")
    return x.numerator * pow(x.denominator, -1, p) % p


def v_degree(i: int, p: int) -> int:
    return -2 * (p**i - 1)


def default_bound(p: int) -> int:
    return 2 * (p**4 - 1)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


# -- ideals ------------------------------------------------------------------

@dataclass(frozen=True)
class IdealSpec:
    """Monomial ideal (p?, v_i for i in ``vs``, v_i for all i >= ``tail``).

    Covers I(n) = (p, v_1..v_{n-1}), J(m) = (v_m, v_{m+1}, ...), I(inf), and
    custom lists of the generators "p", "v3", "v5.." (tail from v5 on).
    """
    has_p: bool = False
    vs: frozenset = frozenset()
    tail: int | None = None

    def __post_init__(self):
        vs = frozenset(int(i) for i in self.vs)
        if any(i < 1 for i in vs):
            raise CoeffError("v_i needs i >= 1")
        if self.tail is not None:
            if self.tail < 1:
                raise CoeffError("tail index must be >= 1")
            vs = frozenset(i for i in vs if i < self.tail)
        object.__setattr__(self, "vs", vs)

    @classmethod
    def zero(cls) -> IdealSpec:
        return cls()

    @classmethod
    def I(cls, n: int | float) -> IdealSpec:
        if n == float("inf"):
            return cls(True, frozenset(), 1)
        n = int(n)
        if n < 0:
            raise CoeffError("I(n) needs n >= 0")
        return cls(n >= 1, frozenset(range(1, n)))

    @classmethod
    def J(cls, m: int) -> IdealSpec:
        return cls(False, frozenset(), m)

    @classmethod
    def custom(cls, gens: Iterable[str]) -> IdealSpec:
        has_p, vs, tail = False, set(), None
        for g in gens:
            g = g.strip()
            if not g:
                continue
            if g == "p":
                has_p = True
            elif m := re.fullmatch(r"v(\d+)\.\.", g):
                t = int(m.group(1))
                tail = t if tail is None else min(tail, t)
            elif m := re.fullmatch(r"v(\d+)", g):
                vs.add(int(m.group(1)))
            else:
                raise CoeffError(f"unsupported ideal generator {g!r}")
        return cls(has_p, frozenset(vs), tail)

    @classmethod
    def parse(cls, text: str) -> IdealSpec:
        s = text.strip()
        if s in ("0", "()", "{}", ""):
            return cls()
        if s in ("Iinf", "I(inf)"):
            return cls.I(float("inf"))
        if m := re.fullmatch(r"I\(?(\d+)\)?", s):
            return cls.I(int(m.group(1)))
        if m := re.fullmatch(r"J\(?(\d+)\)?", s):
            return cls.J(int(m.group(1)))
        s = s.strip("(){}")
        return cls.custom(s.split(","))

    def kills(self, i: int) -> bool:
        return i in self.vs or (self.tail is not None and i >= self.tail)

    def __add__(self, other: IdealSpec) -> IdealSpec:
        tails = [t for t in (self.tail, other.tail) if t is not None]
        return IdealSpec(self.has_p or other.has_p, self.vs | other.vs,
                         min(tails) if tails else None)

    def issubset(self, other: IdealSpec) -> bool:
        if self.has_p and not other.has_p:
            return False
        if not all(other.kills(i) for i in self.vs):
            return False
        if self.tail is not None:
            if other.tail is None or other.tail > self.tail:
                # a finite set can never contain an infinite tail
                return False
        return True

    def minus(self, other: IdealSpec) -> IdealSpec:
        """Generators of ``self`` that ``other`` does not already contain."""
        has_p = self.has_p and not other.has_p
        vs = frozenset(i for i in self.vs if not other.kills(i))
        tail = self.tail
        if tail is not None and other.tail is not None and other.tail <= tail:
            tail = None
        elif tail is not None and other.tail is not None:
            vs |= frozenset(i for i in range(tail, other.tail) if not other.kills(i))
            tail = None
        return IdealSpec(has_p, vs, tail)

    @property
    def is_zero(self) -> bool:
        return not self.has_p and not self.vs and self.tail is None

    def generators(self) -> list[str]:
        out = ["p"] if self.has_p else []
        out += [f"v{i}" for i in sorted(self.vs)]
        if self.tail is not None:
            out.append(f"v{self.tail}..")
        return out

    def __str__(self) -> str:
        return "(" + ",".join(self.generators()) + ")"


# -- theories ----------------------------------------------------------------

_TAG_RE = re.compile(r"^(BP<(\d+)>|BP|P\((\d+)\)|k\((\d+)\)|K\((\d+)\)|HZ|HF)@p=(\d+)$")


@dataclass(frozen=True)
class TheoryTag:
    kind: str  # BP, P, k, K, BP<>, HZ, HF
    p: int
    n: int | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise CoeffError(f"p={self.p} is not prime")
        if self.kind in ("P", "k", "K"):
            if self.n is None or self.n < 1:
                raise CoeffError(f"{self.kind}(n) needs height n >= 1, got {self.n}")
        elif self.kind == "BP<>":
            if self.n is None or self.n < 0:
                raise CoeffError("BP<n> needs n >= 0")
        elif self.kind in ("BP", "HZ", "HF"):
            if self.n is not None:
                raise CoeffError(f"{self.kind} takes no height")
        else:
            raise CoeffError(f"unknown theory kind {self.kind!r}")

    @classmethod
    def BP(cls, p):
        return cls("BP", p)

    @classmethod
    def P(cls, n, p):
        return cls("P", p, n)

    @classmethod
    def K(cls, n, p):
        return cls("K", p, n)

    @classmethod
    def k(cls, n, p):
        return cls("k", p, n)

    @classmethod
    def BPn(cls, n, p):
        return cls("BP<>", p, n)

    @classmethod
    def parse(cls, text: str) -> TheoryTag:
        m = _TAG_RE.match(text.strip())
        if not m:
            raise CoeffError(f"cannot parse theory tag {text!r}")
        head, p = m.group(1), int(m.group(6))
        if m.group(2) is not None:
            return cls("BP<>", p, int(m.group(2)))
        if m.group(3) is not None:
            return cls("P", p, int(m.group(3)))
        if m.group(4) is not None:
            return cls("k", p, int(m.group(4)))
        if m.group(5) is not None:
            return cls("K", p, int(m.group(5)))
        return cls(head, p)

    def __str__(self) -> str:
        name = {"BP": "BP", "HZ": "HZ", "HF": "HF"}.get(self.kind)
        if name is None:
            name = f"BP<{self.n}>" if self.kind == "BP<>" else f"{self.kind}({self.n})"
        return f"{name}@p={self.p}"

    @property
    def kills(self) -> IdealSpec:
        """The ideal of BP* this theory's coefficient ring is a quotient by."""
        k, n = self.kind, self.n
        if k == "BP":
            return IdealSpec()
        if k == "P":
            return IdealSpec.I(n)
        if k == "BP<>":
            return IdealSpec.J(n + 1)
        if k in ("k", "K"):
            return IdealSpec.I(n) + IdealSpec.J(n + 1)
        if k == "HZ":
            return IdealSpec.J(1)
        return IdealSpec.I(float("inf"))

    @property
    def unit(self) -> int | None:
        return self.n if self.kind == "K" else None

    @property
    def modp(self) -> bool:
        return self.kills.has_p

    def supports(self, i: int) -> bool:
        return not self.kills.kills(i)

    @property
    def height(self) -> int | None:
        return self.n


def quotient_theory(tag: TheoryTag, ideal: IdealSpec) -> TheoryTag | None:
    """Name of tag*/ideal if it is one of the standard theories."""
    if tag.kind == "K":
        return tag if (ideal.minus(tag.kills)).is_zero else None
    total = tag.kills + ideal
    p = tag.p
    if total.is_zero:
        return TheoryTag.BP(p)
    if total.tail is None:
        if total.has_p and total.vs == frozenset(range(1, len(total.vs) + 1)):
            return TheoryTag.P(len(total.vs) + 1, p)
        return None
    t = total.tail
    if total.has_p and total.vs == frozenset(range(1, t)):
        return TheoryTag("HF", p)
    if total.has_p and t >= 2 and total.vs == frozenset(range(1, t - 1)):
        return TheoryTag.k(t - 1, p)
    if not total.has_p and not total.vs:
        return TheoryTag("HZ", p) if t == 1 else TheoryTag.BPn(t - 1, p)
    return None


# -- monomials and elements --------------------------------------------------

def mono_degree(mono: Monomial, p: int) -> int:
    return sum(e * v_degree(i, p) for i, e in mono)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in d.items() if e != 0))


def mono_str(mono: Monomial) -> str:
    return "*".join(f"v{i}" if e == 1 else f"v{i}^{e}" for i, e in mono)


def mono_parse(text: str) -> Monomial:
    text = text.strip()
    if text in ("", "1"):
        return ()
    d: dict[int, int] = {}
    for f in text.split("*"):
        m = re.fullmatch(r"v(\d+)(?:\^(-?\d+))?", f.strip())
        if not m:
            raise CoeffError(f"bad v-monomial factor {f!r}")
        i, e = int(m.group(1)), int(m.group(2) or 1)
        d[i] = d.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in d.items() if e))


@dataclass(frozen=True)
class CoeffRing:
    """Handle for arithmetic in one theory's coefficient ring."""
    theory: TheoryTag
    bound: int | None = None

    def __post_init__(self):
        if self.bound is None:
            object.__setattr__(self, "bound", default_bound(self.theory.p))

    @property
    def p(self) -> int:
        return self.theory.p

    # normal form
    def _scalar(self, c) -> Fraction | int:
        if self.theory.modp:
            return residue(c, self.p)
        return local_scalar(c, p=self.p)

    def _keep(self, mono: Monomial) -> bool:
        t = self.theory
        for i, e in mono:
            if e < 0 and i != t.unit:
                raise CoeffError(f"negative exponent of v{i} in {t}")
            if not t.supports(i):
                return False
        return abs(mono_degree(mono, self.p)) <= self.bound

    def element(self, terms: dict | Iterable = ()) -> CoeffElement:
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for mono, c in items:
            mono = tuple(sorted((i, e) for i, e in mono if e != 0))
            if not self._keep(mono):
                continue
            acc[mono] = acc.get(mono, 0) + Fraction(c)
        out = {}
        for mono, c in acc.items():
            c = self._scalar(c)
            if c != 0:
                out[mono] = c
        return CoeffElement(self, tuple(sorted(out.items(), key=lambda t: _order(t[0], self.p))))

    def zero(self) -> CoeffElement:
        return CoeffElement(self, ())

    def one(self) -> CoeffElement:
        return self.scalar(1)

    def scalar(self, c) -> CoeffElement:
        return self.element({(): c})

    def v(self, i: int, e: int = 1) -> CoeffElement:
        return self.element({((i, e),): 1})

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def negate(self, a):
        return -a

    def parse(self, text: str) -> CoeffElement:
        """Parse sums like ``2 + v1*v2^2 - 3/5*v1``."""
        s = text.replace(" ", "")
        if not s:
            raise CoeffError("empty coefficient")
        terms = re.findall(r"[+-]?[^+-]+", s)
        acc = self.zero()
        for t in terms:
            sign = -1 if t.startswith("-") else 1
            t = t.lstrip("+-")
            factors = t.split("*")
            coef = Fraction(1)
            vfac = []
            for f in factors:
                if re.fullmatch(r"\d+(/\d+)?", f):
                    coef *= Fraction(f)
                else:
                    vfac.append(f)
            acc = acc + self.element({mono_parse("*".join(vfac)): sign * coef})
        return acc


def _order(mono: Monomial, p: int):
    return (abs(mono_degree(mono, p)), mono)


def make_ring(tag: TheoryTag | str, bound: int | None = None) -> CoeffRing:
    if isinstance(tag, str):
        tag = TheoryTag.parse(tag)
    return CoeffRing(tag, bound)


@dataclass(frozen=True)
class CoeffElement:
    ring: CoeffRing = field(compare=False)
    terms: tuple = ()

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, CoeffElement):
            return NotImplemented
        return self.ring.theory == other.ring.theory and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.theory, self.terms))

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        if other.ring.theory != self.ring.theory:
            raise CoeffError(f"mixed theories {self.ring.theory} and {other.ring.theory}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return self.ring.element(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        out = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                out.append((mono_mul(m1, m2), Fraction(c1) * Fraction(c2)))
        return self.ring.element(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        acc = self.ring.one()
        for _ in range(k):
            acc = acc * self
        return acc

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    @property
    def theory(self) -> TheoryTag:
        return self.ring.theory

    def degrees(self) -> set[int]:
        return {mono_degree(m, self.ring.p) for m, _ in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise CoeffError(f"{self} is not homogeneous")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, mono: Monomial):
        return dict(self.terms).get(tuple(mono), 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            c = Fraction(c)
            neg = c < 0
            a = abs(c)
            ms = mono_str(mono)
            if not ms:
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


def reduce_mod(x: CoeffElement, ideal: IdealSpec) -> CoeffElement:
    """Normal form of x in theory/ideal.

    The result lives in the named quotient theory when there is one (BP/I(n) is
    P(n), BP/J(n+1) is BP<n>, ...); otherwise in x's own theory with the ideal's
    generators set to zero.
    """
    tag = x.ring.theory
    if tag.unit is not None and ideal.kills(tag.unit):
        raise CoeffError(f"v{tag.unit} is a unit of {tag}; quotient is the zero ring")
    target = quotient_theory(tag, ideal)
    if target is not None:
        ring = CoeffRing(target, x.ring.bound)
        return ring.element(list(x.terms))
    ring = x.ring
    out = []
    for mono, c in x.terms:
        if any(ideal.kills(i) for i, _ in mono):
            continue
        if ideal.has_p and not tag.modp:
            c = residue(c, tag.p)
        out.append((mono, c))
    return ring.element(out)


def v_monomials(indices: Iterable[int], p: int, degree: int) -> list[Monomial]:
    """All monomials in the given v_i of exactly the given (<= 0) degree."""
    idx = sorted(set(indices))
    out: list[Monomial] = []

    def rec(k, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if k == len(idx):
            return
        i = idx[k]
        step = -v_degree(i, p)
        e = 0
        while e * step <= remaining:
            rec(k + 1, remaining - e * step, acc + ([(i, e)] if e else []))
            e += 1

    if degree > 0:
        return []
    rec(0, -degree, [])
    return sorted(out)


def theory_generators(tag: TheoryTag, max_degree: int) -> list[int]:
    """Indices i >= 1 with v_i nonzero in tag and |v_i| <= max_degree."""
    out = []
    i = 1
    while -v_degree(i, tag.p) <= max_degree:
        if tag.supports(i):
            out.append(i)
        i += 1
    return out
