"""Subalgebras of Z/2[r, t, t^-1]/(r^N) over the reals (r = rho, t = tau).

A monomial r^a t^b has bidegree (a, a + b).  Q_0 is the Bockstein derivation
with Q_0(r) = 0 and Q_0(t) = r; its value on t^-1 is derived by the Leibniz rule
from t * t^-1 = 1.  Q_i for i >= 1 is read from a table.  A Q_i-value that is
not in the table is zero in exactly two cases:

* the unique monomial of the target bidegree is zero in the algebra;
* the source is a base-field class r^a t^b with b >= 0 and the target needs
  a negative power of t.

Any other missing value raises :class:`QActionUndefined`.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from .palg import PalgError, QActionUndefined, QModule, q_shift, word_label

Mono = tuple  # (a, b) for r^a t^b


def mono_str(m: Mono) -> str:
    a, b = m
    parts = []
    if a:
        parts.append("r" if a == 1 else f"r^{a}")
    if b:
        parts.append("t" if b == 1 else f"t^{b}")
    return " ".join(parts) or "1"


def parse_mono(text: str) -> Mono:
    a = b = 0
    for tok in text.replace("*", " ").split():
        name, _, e = tok.partition("^")
        e = int(e) if e else 1
        if name == "r":
            a += e
        elif name == "t":
            b += e
        elif tok != "1":
            raise PalgError(f"unknown factor {tok!r} over the real base")
    return (a, b)


def bidegree(m: Mono) -> tuple:
    return (m[0], m[0] + m[1])


def _mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for (a, b), c in x.items():
        for (a2, b2), d in y.items():
            k = (a + a2, b + b2)
            out[k] = (out.get(k, 0) + c * d) % 2
    return {k: v for k, v in out.items() if v}


def _add(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = (out.get(k, 0) + v) % 2
    return {k: v for k, v in out.items() if v}


def derive_q0_tau_inverse() -> dict:
    """Solve 0 = Q0(t t^-1) = Q0(t) t^-1 + t Q0(t^-1) for Q0(t^-1) in char 2."""
    q0_t = {(1, 0): 1}
    known = _mul(q0_t, {(0, -1): 1})  # Q0(t) * t^-1
    # t * X = known  =>  X = t^-1 * known
    return _mul({(0, -1): 1}, known)


_Q0_ATOMS = {"r": {}, "t": {(1, 0): 1}}


def q0_leibniz(factors: Iterable[str]) -> dict:
    """Q_0 of a product of the atoms "r", "t", "t^-1" by the derivation rule."""
    factors = list(factors)
    atoms = dict(_Q0_ATOMS)
    atoms["t^-1"] = derive_q0_tau_inverse()
    vals = {"r": {(1, 0): 1}, "t": {(0, 1): 1}, "t^-1": {(0, -1): 1}}
    out: dict = {}
    for k, f in enumerate(factors):
        if f not in atoms:
            raise PalgError(f"unknown atom {f!r}")
        term = {(0, 0): 1}
        for j, g in enumerate(factors):
            term = _mul(term, atoms[g] if j == k else vals[g])
        out = _add(out, term)
    return out


class RealAlgebra:
    """Monomial subalgebra of Z/2[r, t^{+-1}]/(r^trunc) closed under Q-operations.

    The subalgebra is described by ``floor[a]``: r^a t^b belongs to it iff
    a < trunc and b >= floor[a].  It is the closure of {r, t} and the named
    generators under products, Q_0 and the table entries.
    """

    def __init__(self, trunc: int, generators: dict, qtable: dict | None = None,
                 labels: dict | None = None, name: str = "", smooth: bool = True):
        if trunc < 1:
            raise PalgError("rho truncation must be >= 1")
        self.trunc = trunc
        self.generators = {k: tuple(v) for k, v in generators.items()}
        self.qtable = {}
        self.name = name
        self.smooth = smooth
        for (i, src), tgt in (qtable or {}).items():
            self.set_q(i, tuple(src), tgt)
        self.floor = self._closure()
        self.word_labels = dict(labels) if labels is not None else self._derive_labels()

    def set_q(self, i: int, src: Mono, tgt) -> None:
        if i < 1:
            raise PalgError("Q_0 is derived, not tabled")
        if tgt is not None:
            tgt = tuple(tgt)
            dm, dmp = q_shift(i, 2)
            s, t = bidegree(src), bidegree(tgt)
            if (t[0] - s[0], t[1] - s[1]) != (dm, dmp):
                raise PalgError(f"Q{i}({mono_str(src)}) = {mono_str(tgt)} violates the bidegree shift")
        self.qtable[(i, src)] = tgt

    def _closure(self) -> list[int]:
        N = self.trunc
        fl = [0] * N
        changed = True

        def lower(a, b):
            nonlocal changed
            if a < N and b < fl[a]:
                fl[a] = b
                changed = True

        while changed:
            changed = False
            for a, b in self.generators.values():
                lower(a, b)
            for a1 in range(N):
                for a2 in range(N - a1):
                    lower(a1 + a2, fl[a1] + fl[a2])
            for a in range(N - 1):
                # the smallest odd exponent >= fl[a] feeds Q_0
                b = fl[a] if fl[a] % 2 else fl[a] + 1
                lower(a + 1, b - 1)
            for (i, src), tgt in self.qtable.items():
                if tgt is not None and self.contains(src, fl):
                    lower(*tgt)
        return fl

    def _derive_labels(self) -> dict:
        """Label Q-words on the generators that involve t^-1 (e.g. Q0Q1a')."""
        top = max((i for i, _ in self.qtable), default=0)
        out = {}
        frontier = [(frozenset(), name, m) for name, m in self.generators.items() if m[1] < 0]
        while frontier:
            J, base, m = frontier.pop()
            if m in out or not self.contains(m):
                continue
            out[m] = word_label(J, base)
            for i in range(top + 1):
                if i in J:
                    continue
                try:
                    t = self.apply_q(i, m)
                except QActionUndefined:
                    continue
                if t is not None:
                    frontier.append((J | {i}, base, t))
        return out

    def contains(self, m: Mono, floor=None) -> bool:
        fl = self.floor if floor is None else floor
        a, b = m
        return 0 <= a < self.trunc and b >= fl[a]

    def basis(self, tau_extra: int = 0) -> list[Mono]:
        """Monomials r^a t^b with floor[a] <= b <= floor[a] + tau_extra."""
        return [(a, b) for a in range(self.trunc)
                for b in range(self.floor[a], self.floor[a] + tau_extra + 1)]

    def label(self, m: Mono) -> str:
        if m in self.word_labels:
            return self.word_labels[m]
        best = None
        for (a0, b0), lab in self.word_labels.items():
            if b0 == m[1] and a0 <= m[0] and (best is None or a0 > best[0]):
                best = (a0, lab)
        if best is not None:
            k = m[0] - best[0]
            return ("r" if k == 1 else f"r^{k}") + best[1]
        return mono_str(m).replace(" ", "")

    def q0(self, m: Mono) -> dict:
        a, b = m
        factors = ["r"] * a + (["t"] * b if b > 0 else ["t^-1"] * (-b))
        out = q0_leibniz(factors)
        return {k: v for k, v in out.items() if self.contains(k)}

    def apply_q(self, i: int, m: Mono) -> Mono | None:
        """Q_i on a monomial; returns the image monomial or None for zero."""
        m = tuple(m)
        if not self.contains(m):
            raise PalgError(f"{mono_str(m)} is not in the algebra")
        if i == 0:
            out = self.q0(m)
            return next(iter(out)) if out else None
        if (i, m) in self.qtable:
            tgt = self.qtable[(i, m)]
            return tgt if tgt is not None and self.contains(tgt) else None
        dm, _ = q_shift(i, 2)
        tgt = (m[0] + dm, m[1] - 2**i)
        if not self.contains(tgt):
            return None
        if m[1] >= 0 and tgt[1] < 0:
            return None
        raise QActionUndefined(f"Q-action undefined: Q{i}({mono_str(m)})")

    def weight(self, m: Mono) -> int:
        a, b = m
        return a + 2 * b

    def qmodule(self, tau_extra: int = 0) -> QModule:
        monos = self.basis(tau_extra)
        labels = tuple(self.label(m) for m in monos)
        by_label = dict(zip(labels, monos))
        bd = {lab: bidegree(m) for lab, m in zip(labels, monos)}

        def action(i, lab):
            m = by_label[lab]
            tgt = self.apply_q(i, m)
            if tgt is None:
                return {}
            name = self.label(tgt)
            by_label.setdefault(name, tgt)
            return {name: 1}

        return QModule(2, labels, bd, action, self.smooth, None, self.name)

    def tau_injective(self, tau_extra: int = 2) -> bool:
        """Multiplication by t is injective on the window (monomial algebra)."""
        return all(self.contains((a, b + 1)) for a, b in self.basis(tau_extra))

    def __repr__(self):
        return f"RealAlgebra({self.name or 'unnamed'}, trunc={self.trunc}, floor={self.floor})"


def q_word_mono(n: int, word: Iterable[int]) -> Mono:
    """Q_J(a') in M_n as a monomial (it is determined by its bidegree)."""
    word = list(word)
    return (n + 1 + sum(2 ** (j + 1) - 1 for j in word), -1 - sum(2**j for j in word))


def build_rost_motive(n: int) -> RealAlgebra:
    """Mod-2 motivic cohomology of the Rost motive M_n over the reals."""
    if n < 1:
        raise PalgError("Rost motives need n >= 1")
    N = 2 ** (n + 1) - 1
    words = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    labels = {}
    qtab = {}
    for J in words:
        m = q_word_mono(n, J)
        if m[0] < N:
            labels[m] = word_label(J, "a'")
        for i in range(1, n):
            if i not in J and m[0] < N:
                t = q_word_mono(n, J | {i})
                qtab[(i, m)] = t if t[0] < N else None
    return RealAlgebra(N, {"a": (n + 1, 0), "a'": (n + 1, -1)}, qtab, labels, name=f"M{n}")


def chow_classes(n: int) -> list[Mono]:
    """c_i = Q_0..^Q_i..Q_{n-1}(a'), 0 <= i < n."""
    return [(2 ** (n + 1) - 2 ** (i + 1), -(2**n) + 2**i) for i in range(n)]


def cycle_map(n: int, i: int) -> Mono:
    """cl(c_i): multiply by the t-power that lands in bidegree (2k, 2k)."""
    if not 0 <= i < n:
        raise PalgError(f"index {i} out of range for n = {n}")
    a, b = chow_classes(n)[i]
    return (a, b - b)


def cycle_map_injective(n: int) -> bool:
    M = build_rost_motive(n)
    images = [cycle_map(n, i) for i in range(n)]
    return all(M.contains((a, 0)) for a, _ in images) and len(set(images)) == n
