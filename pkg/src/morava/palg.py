"""Mod-p cohomology with Milnor operations Q_i.

Two layers:

* ``QModule``: a finite F_p-basis of labelled classes with motivic bidegrees and a
  Q-action.  This is everything the spectral-sequence engine consumes.
* ``PresentedAlgebra``: generators, monomial rewrite rules and a Q-table over the
  base Z/p[t] (t = tau, bidegree (0,1)).  Q_i extend as derivations with Koszul
  signs and kill t.  ``qmodule`` enumerates the monomial basis in a window.

Real-base algebras (Z/2[r, t^{+-1}], r = rho) live in :mod:`morava.realmot`.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import linalg


class PalgError(ValueError):
    pass


class QActionUndefined(PalgError):
    pass


def q_shift(i: int, p: int) -> tuple[int, int]:
    return 2 * p**i - 1, p**i - 1


def weight(bd: tuple) -> int:
    m, mp = bd
    return 2 * mp - m


def dimension(bd: tuple) -> int:
    m, mp = bd
    return m - mp


def _add_into(acc: dict, key, c: int, p: int) -> None:
    v = (acc.get(key, 0) + c) % p
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# -- Q-modules ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QModule:
    """Finite F_p-module with basis ``labels`` and Q-action ``action(i, label)``.

    ``action`` returns a dict label -> coefficient.  Labels outside ``labels`` may
    appear (classes beyond the enumerated window); consumers decide how to treat
    them.  ``action`` may raise :class:`QActionUndefined`.
    """
    p: int
    labels: tuple
    bidegrees: dict
    action: Callable = field(repr=False)
    smooth: bool = False
    dim: int | None = None
    name: str = ""

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise PalgError("duplicate basis labels")
        for lab in self.labels:
            if lab not in self.bidegrees:
                raise PalgError(f"no bidegree for {lab!r}")
            if self.smooth:
                self._check_smooth(lab)

    def _check_smooth(self, lab):
        bd = self.bidegrees[lab]
        if weight(bd) < 0:
            raise PalgError(f"{lab} has negative weight in a smooth presentation")
        if self.dim is not None and dimension(bd) > self.dim:
            raise PalgError(f"{lab} has d > dim X")

    def __len__(self):
        return len(self.labels)

    def bidegree(self, label: str) -> tuple:
        return self.bidegrees[label]

    def weight(self, label: str) -> int:
        return weight(self.bidegrees[label])

    def dimension(self, label: str) -> int:
        return dimension(self.bidegrees[label])

    def q(self, i: int, label: str) -> dict:
        out = self.action(i, label)
        return {k: v % self.p for k, v in out.items() if v % self.p}

    def apply_q(self, i: int, vec) -> dict:
        """Q_i on a label or on a dict label -> coefficient."""
        if isinstance(vec, str):
            vec = {vec: 1}
        out: dict = {}
        for lab, c in vec.items():
            for k, v in self.q(i, lab).items():
                _add_into(out, k, c * v, self.p)
        return out

    def apply_word(self, word: Iterable[int], vec) -> dict:
        """Apply Q_{i_1} first, then Q_{i_2}, ...; vectors leaving the basis are kept."""
        if isinstance(vec, str):
            vec = {vec: 1}
        for i in word:
            vec = self.apply_q(i, vec)
        return vec

    def chow_part(self) -> list[str]:
        return [lab for lab in self.labels if self.weight(lab) == 0]

    def restrict(self, pred) -> QModule:
        keep = tuple(lab for lab in self.labels if pred(lab))
        return QModule(self.p, keep, {k: self.bidegrees[k] for k in keep}, self.action,
                       self.smooth, self.dim, self.name)

    def check_bidegrees(self, indices: Iterable[int]) -> None:
        """Every defined Q_i-image term sits exactly one Q_i-shift above its source."""
        for i in indices:
            dm, dmp = q_shift(i, self.p)
            for lab in self.labels:
                m, mp = self.bidegrees[lab]
                try:
                    image = self.q(i, lab)
                except QActionUndefined:
                    continue
                for tgt in image:
                    if tgt in self.bidegrees and self.bidegrees[tgt] != (m + dm, mp + dmp):
                        raise PalgError(f"Q{i}({lab}) = {tgt} has the wrong bidegree")

    def check_relations(self, indices: Iterable[int]) -> list[str]:
        """Q_i Q_i = 0 and Q_i Q_j = -Q_j Q_i on every label where both sides are
        defined; returns violations."""
        bad = []
        idx = sorted(set(indices))

        def word(w, lab):
            try:
                return self.apply_word(w, lab)
            except QActionUndefined:
                return None

        for lab in self.labels:
            for i in idx:
                if word([i, i], lab):
                    bad.append(f"Q{i}^2({lab}) != 0")
            for i, j in itertools.combinations(idx, 2):
                a, b = word([j, i], lab), word([i, j], lab)
                if a is None or b is None:
                    continue
                for k, v in b.items():
                    _add_into(a, k, v, self.p)
                if a:
                    bad.append(f"Q{i}Q{j} + Q{j}Q{i} != 0 on {lab}")
        return bad


def direct_sum(*mods: QModule, name: str = "") -> QModule:
    p = mods[0].p
    if any(m.p != p for m in mods):
        raise PalgError("direct sum across primes")
    owner = {}
    bd = {}
    labels = []
    for m in mods:
        for lab in m.labels:
            if lab in owner:
                raise PalgError(f"label {lab!r} occurs in two summands")
            owner[lab] = m
            bd[lab] = m.bidegrees[lab]
            labels.append(lab)

    def action(i, lab):
        return owner[lab].q(i, lab)

    return QModule(p, tuple(labels), bd, action, all(m.smooth for m in mods), None, name)


def shift(mod: QModule, by: tuple, rename: dict | None = None, suffix: str = "") -> QModule:
    """Twist bidegrees by ``by``; labels are renamed by ``rename`` or get ``suffix``."""
    rename = dict(rename or {})
    fwd = {lab: rename.get(lab, lab + suffix) for lab in mod.labels}
    back = {v: k for k, v in fwd.items()}

    def conv(lab):
        return fwd.get(lab, rename.get(lab, lab + suffix))

    def action(i, lab):
        return {conv(k): v for k, v in mod.q(i, back[lab]).items()}

    bd = {fwd[lab]: (mod.bidegrees[lab][0] + by[0], mod.bidegrees[lab][1] + by[1]) for lab in mod.labels}
    return QModule(mod.p, tuple(fwd[lab] for lab in mod.labels), bd, action, mod.smooth, mod.dim, mod.name)


def word_label(word: Iterable[int], base: str) -> str:
    return "".join(f"Q{i}" for i in sorted(word)) + base


def _word_sign(i: int, word: frozenset) -> int:
    return -1 if sum(1 for j in word if j < i) % 2 else 1


def free_qmodule(p: int, n: int, base: Iterable, alias: Callable | None = None,
                 name: str = "") -> QModule:
    """Q(n-1) ⊗ B: basis Q_J b for J ⊆ {0..n-1}; Q_i with i >= n act as zero.

    ``base`` is a list of (label, bidegree).  ``alias(J, b)`` may rename a word.
    """
    base = list(base)
    words = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    lab_of = {}
    key_of = {}
    bd = {}
    for b, (m, mp) in base:
        for J in words:
            lab = alias(J, b) if alias else None
            lab = lab or word_label(J, b)
            sm = sum(q_shift(i, p)[0] for i in J)
            smp = sum(q_shift(i, p)[1] for i in J)
            lab_of[(J, b)] = lab
            key_of[lab] = (J, b)
            bd[lab] = (m + sm, mp + smp)

    def action(i, lab):
        J, b = key_of[lab]
        if i >= n or i in J:
            return {}
        return {lab_of[(J | {i}, b)]: _word_sign(i, J) % p}

    labels = tuple(lab_of[(J, b)] for b, _ in base for J in words)
    return QModule(p, labels, bd, action, False, None, name or f"Q({n - 1})-free")


def chi_tilde(p: int, n: int, a_prime: tuple = None, xi_max: int = 2,
              milnor: Iterable = (("1", (0, 0)),)) -> QModule:
    """K^M ⊗ Q(n-1) ⊗ Z/p[xi]{a'} with xi = Q_{n-1}...Q_0(a').

    The top word on xi^k a' is relabelled ``xi^(k+1)`` (times the Milnor label).
    ``milnor`` models the K^M_*(k)/Ker(a) factor as a finite graded basis.
    """
    if a_prime is None:
        a_prime = (n + 1, n)
    full = frozenset(range(n))
    sm = sum(q_shift(i, p)[0] for i in range(n))
    smp = sum(q_shift(i, p)[1] for i in range(n))
    xi_bd = (a_prime[0] + sm, a_prime[1] + smp)
    base = []
    for mlab, (mm, mmp) in milnor:
        pre = "" if mlab == "1" else f"{mlab}*"
        for k in range(xi_max + 1):
            core = "a'" if k == 0 else ("xia'" if k == 1 else f"xi^{k}a'")
            bd = (mm + a_prime[0] + k * xi_bd[0], mmp + a_prime[1] + k * xi_bd[1])
            base.append((pre + core, bd))

    def alias(J, b):
        if J != full:
            return None
        pre, _, core = b.rpartition("*")
        k = 0 if core == "a'" else (1 if core == "xia'" else int(core[3:-2]))
        top = "xi" if k == 0 else f"xi^{k + 1}"
        return (pre + "*" if pre else "") + top

    return free_qmodule(p, n, base, alias, name=f"chi_tilde(n={n})")


@dataclass
class QFreenessCertificate:
    n: int
    base: list
    words: dict  # (word tuple, base label) -> vector

    def __len__(self):
        return len(self.words)


def verify_q_freeness(mod: QModule, n: int, candidate: Iterable[str],
                      ignore: Iterable[str] = (), max_m: int | None = None):
    """Check that Q-words on ``candidate`` form a basis of the module (window-wise).

    Returns ``(certificate, None)`` on success, ``(None, report)`` otherwise.
    Classes in ``ignore`` (e.g. the unit) are excluded from the spanning test;
    with ``max_m`` only classes of first degree <= max_m must be spanned.
    """
    candidate = list(candidate)
    ignore = set(ignore)
    idx = {lab: j for j, lab in enumerate(mod.labels)}
    rows, keys = [], []
    words = [tuple(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    for b in candidate:
        for w in words:
            vec = mod.apply_word(w, b)
            if not vec:
                return None, f"{word_label(w, b)} = 0"
            if any(k not in idx for k in vec):
                return None, f"{word_label(w, b)} leaves the window"
            row = np.zeros(len(idx), dtype=np.int64)
            for k, c in vec.items():
                row[idx[k]] = c
            rows.append(row)
            keys.append((w, b))
            if linalg.rank(np.array(rows), mod.p) < len(rows):
                return None, f"{word_label(w, b)} is dependent on earlier words"
    target = [lab for lab in mod.labels if lab not in ignore
              and (max_m is None or mod.bidegrees[lab][0] <= max_m)]
    M = np.array(rows) if rows else np.zeros((0, len(idx)), dtype=np.int64)
    for lab in target:
        e = np.zeros((1, len(idx)), dtype=np.int64)
        e[0, idx[lab]] = 1
        if not linalg.contains(M, e, mod.p):
            return None, f"{lab} is not spanned by Q-words on the candidate"
    cert = QFreenessCertificate(n, candidate, {k: dict(mod.apply_word(k[0], k[1])) for k in keys})
    return cert, None


def chow_part(obj, max_m: int = 40) -> list[str]:
    """Labels of weight-zero classes of a Q-module, algebra or module presentation."""
    from .presentation import ModulePresentation
    if isinstance(obj, ModulePresentation):
        return [s.label for s in obj.summands if s.weight == 0]
    if isinstance(obj, QModule):
        return obj.chow_part()
    if isinstance(obj, PresentedAlgebra):
        return obj.qmodule(max_m).chow_part()
    if hasattr(obj, "qmodule"):
        return obj.qmodule().chow_part()
    raise PalgError(f"no weights for {type(obj).__name__}")


# -- presented algebras over Z/p[t] -----------------------------------------------

_NAME = r"[A-Za-z][A-Za-z0-9_']*"
_FACTOR_RE = re.compile(rf"({_NAME})(?:\^(-?\d+))?")


@dataclass(frozen=True)
class Generator:
    name: str
    bidegree: tuple
    odd: bool | None = None

    def __post_init__(self):
        if not re.fullmatch(_NAME, self.name) or self.name in ("t", "r"):
            raise PalgError(f"bad generator name {self.name!r}")
        bd = tuple(int(x) for x in self.bidegree)
        if len(bd) != 2 or bd[0] < 1:
            raise PalgError(f"generator {self.name} needs a bidegree (m, m') with m >= 1")
        object.__setattr__(self, "bidegree", bd)
        if self.odd is None:
            object.__setattr__(self, "odd", bd[0] % 2 == 1)


class PresentedAlgebra:
    """Graded-commutative algebra over Z/p[t] given by generators and rewrite rules.

    Monomials are exponent tuples (e_1, ..., e_g, e_t).  Relations map a monomial
    to a polynomial whose monomials have fewer generator factors (or equally many
    and lexicographically smaller exponents), so rewriting terminates.  Squares of
    odd generators vanish unless a relation says otherwise.
    """

    def __init__(self, p: int, generators: Iterable[Generator], relations=(), qtable=None,
                 qrule: Callable | None = None, smooth: bool = False, dim: int | None = None,
                 name: str = "", power_rules: dict | None = None):
        self.p = p
        self.gens = tuple(generators)
        self.index = {g.name: j for j, g in enumerate(self.gens)}
        if len(self.index) != len(self.gens):
            raise PalgError("duplicate generator names")
        self.ng = len(self.gens)
        self.smooth = smooth
        self.dim = dim
        self.name = name
        self.relations = []
        for lhs, rhs in relations:
            lhs = self._as_mono(lhs)
            rhs = self._as_poly(rhs)
            for m in rhs:
                if self.bidegree(m) != self.bidegree(lhs):
                    raise PalgError(f"relation {self.mono_str(lhs)} is not homogeneous")
                if self._order_key(m) >= self._order_key(lhs):
                    raise PalgError(f"relation {self.mono_str(lhs)} does not decrease the monomial order")
            self.relations.append((lhs, rhs))
        self.qtable = {}
        for (i, g), val in (qtable or {}).items():
            self.set_q(i, g, val)
        # power_rules {g: h} means Q_i g = h^(p^i) for every i
        self.power_rules = dict(power_rules or {})
        if self.power_rules and qrule is None:
            def qrule(i, g, _pr=self.power_rules, _p=p):
                return f"{_pr[g]}^{_p**i}" if g in _pr else None
        self.qrule = qrule

    # monomials / polynomials
    def _as_mono(self, x) -> tuple:
        if isinstance(x, str):
            poly = self.parse(x)
            if len(poly) != 1 or next(iter(poly.values())) != 1:
                raise PalgError(f"{x!r} is not a monomial")
            return next(iter(poly))
        return tuple(x)

    def _as_poly(self, x) -> dict:
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, dict):
            return {tuple(k): v % self.p for k, v in x.items() if v % self.p}
        return {tuple(x): 1}

    def _order_key(self, m):
        return (sum(m[:-1]), m[:-1])

    def one(self) -> tuple:
        return (0,) * (self.ng + 1)

    def gen(self, name: str) -> tuple:
        m = [0] * (self.ng + 1)
        if name == "t":
            m[-1] = 1
        else:
            m[self.index[name]] = 1
        return tuple(m)

    def bidegree(self, m) -> tuple:
        a = sum(e * g.bidegree[0] for e, g in zip(m, self.gens))
        b = sum(e * g.bidegree[1] for e, g in zip(m, self.gens)) + m[-1]
        return (a, b)

    def mono_str(self, m) -> str:
        parts = []
        if m[-1]:
            parts.append("t" if m[-1] == 1 else f"t^{m[-1]}")
        for e, g in zip(m, self.gens):
            if e:
                parts.append(g.name if e == 1 else f"{g.name}^{e}")
        return "".join(parts) or "1"

    def poly_str(self, poly: dict) -> str:
        if not poly:
            return "0"
        terms = []
        for m in sorted(poly, key=self._order_key):
            c = poly[m]
            s = self.mono_str(m)
            terms.append(s if c == 1 else f"{c}*{s}")
        return " + ".join(terms)

    def parse(self, text: str) -> dict:
        """Parse "t y6 + 2 x3^2 - x5" (factors separated by spaces or '*')."""
        out: dict = {}
        text = text.strip()
        if text == "0":
            return out
        for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text):
            c = -1 if sign == "-" else 1
            m = list(self.one())
            for tok in body.replace("*", " ").split():
                if re.fullmatch(r"\d+", tok):
                    c *= int(tok)
                    continue
                fm = _FACTOR_RE.fullmatch(tok)
                if not fm:
                    raise PalgError(f"cannot parse factor {tok!r}")
                name, e = fm.group(1), int(fm.group(2) or 1)
                if e < 0:
                    raise PalgError("negative exponents need the real base")
                if name == "t":
                    m[-1] += e
                elif name in self.index:
                    m[self.index[name]] += e
                elif name != "1":
                    raise PalgError(f"unknown generator {name!r}")
            _add_into(out, tuple(m), c, self.p)
        return out

    def _mul_mono(self, a, b) -> tuple[int, tuple]:
        sign = 1
        if self.p != 2:
            odd_after = 0
            # moving each odd factor of b left past the odd factors of a with larger index
            for j in range(self.ng - 1, -1, -1):
                if self.gens[j].odd:
                    if b[j] % 2 and odd_after % 2:
                        sign = -sign
                    odd_after += a[j]
        return sign, tuple(x + y for x, y in zip(a, b))

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, c in x.items():
            for b, d in y.items():
                s, m = self._mul_mono(a, b)
                _add_into(out, m, s * c * d, self.p)
        return self.normal_form(out)

    def normal_form(self, poly: dict) -> dict:
        todo = dict(poly)
        out: dict = {}
        steps = 0
        while todo:
            steps += 1
            if steps > 100000:
                raise PalgError("rewriting did not terminate")
            m, c = todo.popitem()
            rule = next(((l, r) for l, r in self.relations if all(x >= y for x, y in zip(m, l))), None)
            if rule is not None:
                lhs, rhs = rule
                rest = tuple(x - y for x, y in zip(m, lhs))
                s, _ = self._mul_mono(lhs, rest)
                for r, d in rhs.items():
                    s2, mm = self._mul_mono(r, rest)
                    _add_into(todo, mm, s * s2 * c * d, self.p)
                continue
            if any(g.odd and e >= 2 for g, e in zip(self.gens, m)):
                continue
            _add_into(out, m, c, self.p)
        return out

    def is_normal(self, m) -> bool:
        return self.normal_form({tuple(m): 1}) == {tuple(m): 1}

    # Milnor operations
    def set_q(self, i: int, gen: str, value) -> None:
        if gen not in self.index:
            raise PalgError(f"Q-table entry for unknown generator {gen!r}")
        val = self.normal_form(self._as_poly(value))
        self._check_q_bidegree(i, self.gen(gen), val)
        self.qtable[(i, gen)] = val

    def _check_q_bidegree(self, i, src, val):
        m, mp = self.bidegree(src)
        dm, dmp = q_shift(i, self.p)
        for t in val:
            if self.bidegree(t) != (m + dm, mp + dmp):
                raise PalgError(f"Q{i}({self.mono_str(src)}) = {self.mono_str(t)} "
                                f"violates the bidegree shift ({dm},{dmp})")

    def q_gen(self, i: int, name: str) -> dict:
        if (i, name) in self.qtable:
            return self.qtable[(i, name)]
        if self.qrule is not None:
            val = self.qrule(i, name)
            if val is not None:
                val = self.normal_form(self._as_poly(val))
                self._check_q_bidegree(i, self.gen(name), val)
                return val
        return {}

    def apply_q(self, i: int, x) -> dict:
        """Q_i as a derivation with Koszul signs; t and the unit are Q-inert."""
        poly = self._as_poly(x) if not isinstance(x, dict) else x
        out: dict = {}
        for m, c in poly.items():
            factors = [j for j in range(self.ng) for _ in range(m[j])]
            tpart = [0] * (self.ng + 1)
            tpart[-1] = m[-1]
            prefix = {tuple(tpart): 1}
            sign = 1
            for pos, j in enumerate(factors):
                qv = self.q_gen(i, self.gens[j].name)
                if qv:
                    suffix = [0] * (self.ng + 1)
                    for jj in factors[pos + 1:]:
                        suffix[jj] += 1
                    term = self.mul(self.mul(prefix, qv), {tuple(suffix): 1})
                    for k, v in term.items():
                        _add_into(out, k, sign * c * v, self.p)
                if self.gens[j].odd:
                    sign = -sign
                prefix = self.mul(prefix, {self.gen(self.gens[j].name): 1})
        return self.normal_form(out)

    def q0_leibniz(self, factors: Iterable[str]) -> dict:
        """Q_0 of a product of named factors, expanded by the Leibniz rule."""
        polys = [self.parse(f) for f in factors]
        out: dict = {}
        for k in range(len(polys)):
            sign = 1
            for f in polys[:k]:
                if any(self.bidegree(m)[0] % 2 for m in f):
                    sign = -sign
            term = {self.one(): 1}
            for j, f in enumerate(polys):
                term = self.mul(term, self.apply_q(0, f) if j == k else f)
            for m, v in term.items():
                _add_into(out, m, sign * v, self.p)
        return out

    def weight(self, x) -> int:
        return weight(self._homog_bidegree(x))

    def dimension(self, x) -> int:
        return dimension(self._homog_bidegree(x))

    def _homog_bidegree(self, x):
        poly = self._as_poly(x)
        bds = {self.bidegree(m) for m in poly}
        if len(bds) != 1:
            raise PalgError("element is not homogeneous")
        bd = bds.pop()
        if self.smooth and (weight(bd) < 0 or (self.dim is not None and dimension(bd) > self.dim)):
            raise PalgError("smooth presentation violates w >= 0 or d <= dim X")
        return bd

    # basis and Q-module
    def basis(self, max_m: int, tau_max: int = 0) -> list[tuple]:
        out = []

        def rec(j, m, acc):
            if j == self.ng:
                for te in range(tau_max + 1):
                    mono = tuple(acc) + (te,)
                    if self.is_normal(mono):
                        out.append(mono)
                return
            d = self.gens[j].bidegree[0]
            e = 0
            while m + e * d <= max_m:
                rec(j + 1, m + e * d, acc + [e])
                e += 1
                if self.gens[j].odd and e > 1 and not any(l[j] >= 2 for l, _ in self.relations):
                    break

        rec(0, 0, [])
        out.sort(key=lambda mo: (self.bidegree(mo), mo))
        return out

    def qmodule(self, max_m: int, tau_max: int = 0) -> QModule:
        monos = self.basis(max_m, tau_max)
        labels = tuple(self.mono_str(m) for m in monos)
        bd = {lab: self.bidegree(m) for lab, m in zip(labels, monos)}
        by_label = dict(zip(labels, monos))

        def action(i, lab):
            val = self.apply_q(i, {by_label[lab]: 1})
            if any(m[-1] > tau_max for m in val):
                raise PalgError(f"Q{i}({lab}) leaves the tau window [0, {tau_max}]")
            out = {}
            for m, c in val.items():
                name = self.mono_str(m)
                by_label.setdefault(name, m)
                out[name] = c
            return out

        return QModule(self.p, labels, bd, action, self.smooth, self.dim, self.name)

    def __repr__(self):
        return f"PresentedAlgebra({self.name or 'unnamed'}, p={self.p}, gens={[g.name for g in self.gens]})"


# -- standard algebras ----------------------------------------------------------------

def bzp_algebra(p: int) -> PresentedAlgebra:
    """H^{*,*'}(BZ/p; Z/p) = Z/p[t][y] ⊗ Λ(x), Q_s x = y^(p^s); x^2 = t y at p = 2."""
    gens = [Generator("x", (1, 1)), Generator("y", (2, 1))]
    rels = [("x^2", "t y")] if p == 2 else []
    return PresentedAlgebra(p, gens, rels, power_rules={"x": "y"}, name=f"BZ/{p}")


def so7_algebra() -> PresentedAlgebra:
    """Mod-2 motivic cohomology of SO_7 over an algebraically closed field."""
    gens = [Generator("x3", (3, 2)), Generator("x5", (5, 3)), Generator("y6", (6, 3), odd=False)]
    rels = [("x3^2", "t y6"), ("x5^2", "0"), ("y6^2", "0")]
    q = {(1, "x3"): "y6", (0, "x5"): "y6"}
    return PresentedAlgebra(2, gens, rels, q, name="SO7")


def so3_algebra() -> PresentedAlgebra:
    """Z/2[w2, w3] for BSO_3 with Q_0, Q_1, Q_2 from the splitting principle."""
    gens = [Generator("w2", (2, 1)), Generator("w3", (3, 1), odd=False)]
    q = {(0, "w2"): "w3", (1, "w2"): "w2 w3", (1, "w3"): "w3^2",
         (2, "w2"): "w2^3 w3 + t w3^3", (2, "w3"): "w2^2 w3^2"}
    return PresentedAlgebra(2, gens, (), q, name="BSO3")


def point_algebra(p: int) -> PresentedAlgebra:
    return PresentedAlgebra(p, (), (), name="point")


# -- text format -------------------------------------------------------------------

_SECTIONS = ("base", "generators", "relations", "qtable")
_BASE_RE = re.compile(r"^Z/(\d+)\[(t|r,\s*t)\](?:\s+trunc\s+(\d+))?(\s+smooth)?(?:\s+dim\s+(\d+))?$")
_GEN_RE = re.compile(rf"^({_NAME})\s+\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)(\s+even|\s+odd)?$")
_QENTRY_RE = re.compile(r"^Q(\d+)\((.+)\)\s*=\s*(.+)$")
_QPOWER_RE = re.compile(r"^Qi\((\w+)\)\s*=\s*(\w+)\^\(p\^i\)$")


def loads_algebra(text: str):
    """Parse the sectioned text format; returns a PresentedAlgebra or RealAlgebra."""
    from .presentation import ParseError
    from . import realmot

    sections: dict = {s: [] for s in _SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            if m.group(1) not in sections:
                raise ParseError(f"unknown section [{m.group(1)}]", lineno)
            current = m.group(1)
            continue
        if current is None:
            raise ParseError("content before the first section", lineno)
        sections[current].append((lineno, line))
    if len(sections["base"]) != 1:
        raise ParseError("[base] needs exactly one line", 1)
    lineno, line = sections["base"][0]
    bm = _BASE_RE.match(line)
    if not bm:
        raise ParseError(f"bad base {line!r}", lineno)
    p = int(bm.group(1))
    real = "r" in bm.group(2)
    smooth = bool(bm.group(4))
    dim = int(bm.group(5)) if bm.group(5) else None

    if real:
        if p != 2 or not bm.group(3):
            raise ParseError("the real base is Z/2[r,t] with a trunc exponent", lineno)
        gens, qtab = {}, {}
        for ln, line in sections["generators"]:
            name, eq, mono = line.partition("=")
            if not eq:
                raise ParseError("real generators are written  name = r^a t^b", ln)
            try:
                gens[name.strip()] = realmot.parse_mono(mono)
            except PalgError as e:
                raise ParseError(str(e), ln) from None
        if sections["relations"]:
            raise ParseError("the real base takes no relations", sections["relations"][0][0])
        for ln, line in sections["qtable"]:
            qm = _QENTRY_RE.match(line)
            if not qm:
                raise ParseError(f"bad Q-table entry {line!r}", ln)
            i, src, tgt = int(qm.group(1)), qm.group(2).strip(), qm.group(3).strip()
            try:
                s = gens[src] if src in gens else realmot.parse_mono(src)
                t = None if tgt == "0" else realmot.parse_mono(tgt)
                qtab[(i, s)] = t
                if i >= 1:
                    realmot.RealAlgebra(int(bm.group(3)), {}, {(i, s): t})
            except PalgError as e:
                raise ParseError(str(e), ln) from None
        return realmot.RealAlgebra(int(bm.group(3)), gens, qtab, None, smooth=smooth)

    generators = []
    for ln, line in sections["generators"]:
        gm = _GEN_RE.match(line)
        if not gm:
            raise ParseError(f"bad generator line {line!r}", ln)
        par = (gm.group(4) or "").strip()
        try:
            generators.append(Generator(gm.group(1), (int(gm.group(2)), int(gm.group(3))),
                                        None if not par else par == "odd"))
        except PalgError as e:
            raise ParseError(str(e), ln) from None
    try:
        alg = PresentedAlgebra(p, generators, smooth=smooth, dim=dim)
    except PalgError as e:
        raise ParseError(str(e), sections["generators"][0][0] if sections["generators"] else 1) from None
    rels = []
    for ln, line in sections["relations"]:
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise ParseError("relations are written  monomial = polynomial", ln)
        try:
            rels.append((alg._as_mono(lhs), alg.parse(rhs)))
            PresentedAlgebra(p, generators, rels)
        except PalgError as e:
            raise ParseError(str(e), ln) from None
    powers, entries = {}, []
    for ln, line in sections["qtable"]:
        pm = _QPOWER_RE.match(line)
        if pm:
            if pm.group(1) not in alg.index or pm.group(2) not in alg.index:
                raise ParseError(f"unknown generator in {line!r}", ln)
            powers[pm.group(1)] = pm.group(2)
        else:
            entries.append((ln, line))
    alg = PresentedAlgebra(p, generators, rels, smooth=smooth, dim=dim, power_rules=powers)
    for ln, line in entries:
        qm = _QENTRY_RE.match(line)
        if not qm:
            raise ParseError(f"bad Q-table entry {line!r}", ln)
        try:
            alg.set_q(int(qm.group(1)), qm.group(2).strip(), qm.group(3))
        except PalgError as e:
            raise ParseError(str(e), ln) from None
    return alg


def dumps_algebra(alg) -> str:
    from . import realmot

    lines = ["[base]"]
    flags = (" smooth" if alg.smooth else "") + (f" dim {alg.dim}" if getattr(alg, "dim", None) is not None else "")
    if isinstance(alg, realmot.RealAlgebra):
        lines.append(f"Z/2[r,t] trunc {alg.trunc}{flags}")
        lines.append("[generators]")
        for name, m in alg.generators.items():
            lines.append(f"{name} = {realmot.mono_str(m)}")
        lines.append("[qtable]")
        names = {m: k for k, m in alg.generators.items()}
        for (i, src), tgt in sorted(alg.qtable.items()):
            s = names.get(src, realmot.mono_str(src))
            lines.append(f"Q{i}({s}) = {'0' if tgt is None else realmot.mono_str(tgt)}")
        return "\n".join(lines) + "\n"
    lines.append(f"Z/{alg.p}[t]{flags}")
    lines.append("[generators]")
    for g in alg.gens:
        default_odd = g.bidegree[0] % 2 == 1
        par = "" if g.odd == default_odd else (" odd" if g.odd else " even")
        lines.append(f"{g.name} ({g.bidegree[0]},{g.bidegree[1]}){par}")
    lines.append("[relations]")
    for lhs, rhs in alg.relations:
        lines.append(f"{_spaced(alg, lhs)} = {_poly_spaced(alg, rhs)}")
    lines.append("[qtable]")
    for g, h in alg.power_rules.items():
        lines.append(f"Qi({g}) = {h}^(p^i)")
    for (i, g), val in sorted(alg.qtable.items()):
        lines.append(f"Q{i}({g}) = {_poly_spaced(alg, val)}")
    return "\n".join(lines) + "\n"


def _spaced(alg, m) -> str:
    parts = []
    if m[-1]:
        parts.append("t" if m[-1] == 1 else f"t^{m[-1]}")
    for e, g in zip(m, alg.gens):
        if e:
            parts.append(g.name if e == 1 else f"{g.name}^{e}")
    return " ".join(parts) or "1"


def _poly_spaced(alg, poly) -> str:
    if not poly:
        return "0"
    terms = []
    for m in sorted(poly, key=alg._order_key):
        c = poly[m]
        terms.append(_spaced(alg, m) if c == 1 else f"{c} {_spaced(alg, m)}")
    return " + ".join(terms)


def algebras_equal(a, b) -> bool:
    return dumps_algebra(a) == dumps_algebra(b)
