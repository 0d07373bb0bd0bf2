"""Commutators in K(2)_*[y]/(y^p) ⊗ Λ(z_0..z_{p-2}) ⊗ Λ(z'_0..z'_{p-2}).

The bracket rules are [y, z_i] = z_{i+1} for i < p-2 and [y, z_{p-2}] = -v2 z_0
(likewise for the primed family).  Elements are normal-ordered: the power of y
stands on the left, then the z's with indices ascending.  Moving y^b to the
left across a z-word Z uses

    Z y^b = sum_k binom(b, k) y^(b-k) (-ad y)^k (Z),

and powers y^a with a >= p are dropped.  The truncation is not compatible with
the bracket (ad(y)^p is not zero), so the product is associative only on
triples whose y-exponents add up to less than p.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb


class AdjointError(ValueError):
    pass


@dataclass(frozen=True)
class AdAlgebraSpec:
    p: int

    def __post_init__(self):
        if self.p < 3 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise AdjointError("the adjoint algebra needs an odd prime p")

    @property
    def family(self) -> int:
        """Number of z's in each family (p - 1)."""
        return self.p - 1

    def z_name(self, j: int) -> str:
        f = self.family
        return f"z{j}" if j < f else f"z{j - f}'"

    def z(self, i: int, primed: bool = False) -> AdElement:
        if not 0 <= i < self.family:
            raise AdjointError(f"z index {i} out of range 0..{self.family - 1}")
        return AdElement(self, {(0, (i + self.family * primed,), 0): 1})

    def y(self, a: int = 1) -> AdElement:
        return AdElement(self, {(a, (), 0): 1} if a < self.p else {})

    def scalar(self, c: int, v2: int = 0) -> AdElement:
        return AdElement(self, {(0, (), v2): c})

    def basis(self):
        """Normal-ordered words y^a z_J: p * 2^(p-1) * 2^(p-1) of them."""
        n = 2 * self.family
        for a in range(self.p):
            for mask in range(1 << n):
                yield a, tuple(j for j in range(n) if mask >> j & 1)

    def rank(self) -> int:
        return sum(1 for _ in self.basis())

    def ad_z(self, j: int) -> tuple[int, int, int]:
        """[y, z_j] as (coefficient, index, v2 exponent)."""
        f = self.family
        fam, i = divmod(j, f)
        if i < f - 1:
            return 1, j + 1, 0
        return -1, fam * f, 1


def _sort_sign(word: list[int]) -> tuple[int, tuple] | None:
    """Exterior sort: sign of the permutation, or None if an index repeats."""
    if len(set(word)) != len(word):
        return None
    sign = 1
    w = list(word)
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    return sign, tuple(w)


class AdElement:
    """Linear combination of normal words ``(a, zs, e)`` -> coefficient, e the v2 exponent."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AdAlgebraSpec, terms: dict):
        p = spec.p
        self.spec = spec
        self.terms = {k: c % p for k, c in terms.items() if c % p and k[0] < p}

    def _check(self, other):
        if not isinstance(other, AdElement):
            return NotImplemented
        if other.spec != self.spec:
            raise AdjointError("elements of different adjoint algebras")
        return None

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return AdElement(self.spec, t)

    def __neg__(self):
        return AdElement(self.spec, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return AdElement(self.spec, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, AdElement) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.spec.p
        parts = []
        for (a, zs, e), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            c = c if c <= p // 2 else c - p
            factors = []
            if e:
                factors.append("v2" if e == 1 else f"v2^{e}")
            if a:
                factors.append("y" if a == 1 else f"y^{a}")
            factors += [self.spec.z_name(j) for j in zs]
            body = "*".join(factors) or "1"
            mag = abs(c)
            term = body if mag == 1 else (f"{mag}" if body == "1" else f"{mag}*{body}")
            parts.append(("-" if c < 0 else "+", term))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, term in parts[1:]:
            out += f" {sg} {term}"
        return out

    __repr__ = __str__


def _ad_word(spec: AdAlgebraSpec, zpart: dict) -> dict:
    """ad(y) on a combination {(zs, e): c} of z-words (a derivation, y even)."""
    out: dict = {}
    for (zs, e), c in zpart.items():
        for pos, j in enumerate(zs):
            coef, j2, de = spec.ad_z(j)
            word = list(zs)
            word[pos] = j2
            srt = _sort_sign(word)
            if srt is None:
                continue
            sign, w = srt
            key = (w, e + de)
            out[key] = (out.get(key, 0) + sign * coef * c) % spec.p
    return {k: v for k, v in out.items() if v}


def multiply(u: AdElement, w: AdElement) -> AdElement:
    """Normal-ordered product; y-powers >= p are dropped."""
    if u.spec != w.spec:
        raise AdjointError("elements of different adjoint algebras")
    spec, p = u.spec, u.spec.p
    out: dict = {}
    for (a, Z, e1), c1 in u.terms.items():
        for (b, W, e2), c2 in w.terms.items():
            zpart = {(Z, e1 + e2): c1 * c2 % p}
            for k in range(b + 1):
                ya = a + b - k
                if ya < p:
                    scale = comb(b, k) * (-1) ** k
                    for (zs, e), c in zpart.items():
                        srt = _sort_sign(list(zs) + list(W))
                        if srt is None:
                            continue
                        sign, word = srt
                        key = (ya, word, e)
                        out[key] = out.get(key, 0) + scale * sign * c
                zpart = _ad_word(spec, zpart)
                if not zpart:
                    break
    return AdElement(spec, out)


def bracket(u: AdElement, w: AdElement) -> AdElement:
    return multiply(u, w) - multiply(w, u)


def ad_power(k: int, target: AdElement) -> AdElement:
    """ad(y)^k (target), computed by iterated commutators."""
    if k < 0:
        raise AdjointError("k must be >= 0")
    y = target.spec.y()
    x = target
    for _ in range(k):
        x = bracket(y, x)
    return x


@dataclass
class WitnessReport:
    p: int
    exponents: list
    values: list
    expected: list
    ok: bool

    def table(self) -> str:
        lines = [f"ad^{k}(y)(z0) = {v}" for k, v in zip(self.exponents, self.values)]
        verdict = ("nonzero for every tested power: not homotopy nilpotent" if self.ok
                   else "FAILED: some power differs from (-v2)^k z0")
        return "\n".join(lines + [verdict])

    __str__ = table


def nonnilpotency_witness(p: int, max_k: int) -> WitnessReport:
    """Check ad^{(p-1)k}(y)(z0) = (-v2)^k z0 for 1 <= k <= max_k/(p-1)."""
    spec = AdAlgebraSpec(p)
    if max_k < p - 1:
        raise AdjointError(f"max_k must be at least p-1 = {p - 1}")
    z0 = spec.z(0)
    exps, values, expected = [], [], []
    x = z0
    for k in range(1, max_k // (p - 1) + 1):
        x = ad_power(p - 1, x)
        exps.append((p - 1) * k)
        values.append(x)
        expected.append(AdElement(spec, {(0, (0,), k): (-1) ** k}))
    ok = all(v == e and v for v, e in zip(values, expected))
    return WitnessReport(p, exps, values, expected, ok)
