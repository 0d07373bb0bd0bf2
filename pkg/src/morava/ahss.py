"""Atiyah-Hirzebruch spectral sequences for P(s)-theories with d = v_t ⊗ Q_t.

E_2 = H ⊗ P(s)*, where H is a finite Q-module (:class:`morava.palg.QModule`).
A class (x, mu) with x of bidegree (m, m') and mu a v-monomial of degree c
lives in the slice (m, m', c).  The differential attached to index t maps

    (m, m', c)  ->  (m + 2p^t - 1, m' + p^t - 1, c - 2(p^t - 1)),

so its weight is -1.  Each slice keeps two row spaces over F_p, the cycles Z_r
and the boundaries B_r, and E_r = Z_r / B_r.

Pages are computed on a window enlarged by (number of planned rules) times the
largest shift in both first degree and coefficient degree; only the inner window
is reported.  Classes whose differential would leave the enlarged window are
treated as cycles there, which cannot affect the inner window.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .coeff import (IdealSpec, TheoryTag, default_bound, mono_degree, mono_mul,
                    mono_str, v_degree)
from .palg import PalgError, PresentedAlgebra, QModule, q_shift
from .presentation import CyclicSummand, ModulePresentation


class AHSSError(RuntimeError):
    pass


def _shift(t: int, p: int) -> tuple[int, int, int]:
    dm, dmp = q_shift(t, p)
    return dm, dmp, v_degree(t, p)


def _vmonos(indices, p, bound):
    """All monomials in v_i (i in indices) of degree >= -bound, grouped by degree."""
    out = {0: [()]}
    for i in indices:
        step = v_degree(i, p)
        new = {}
        for deg, monos in out.items():
            e = 0
            while deg + e * step >= -bound:
                for mo in monos:
                    new.setdefault(deg + e * step, []).append(mono_mul(mo, ((i, e),) if e else ()))
                e += 1
        out = new
    return {d: sorted(ms) for d, ms in out.items()}


@dataclass(frozen=True)
class DifferentialRule:
    index: int
    p: int

    @property
    def shift(self) -> tuple[int, int, int]:
        return _shift(self.index, self.p)

    @property
    def page(self) -> int:
        return 2 * self.p**self.index - 1

    @property
    def weight(self) -> int:
        dm, dmp, _ = self.shift
        return 2 * dmp - dm


@dataclass(eq=False)
class Page:
    theory: TheoryTag
    module: QModule
    window: int
    coeff_bound: int
    ext_m: int
    ext_c: int
    planned: tuple
    vgens: tuple
    slices: dict  # key -> list of (label, vmono)
    index: dict  # key -> {(label, vmono): position}
    Z: dict
    B: dict
    applied: tuple = ()
    history: list = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.theory.p

    def dim(self, key) -> int:
        return self.Z[key].shape[0] - self.B[key].shape[0]

    def inner(self, key) -> bool:
        m, _, c = key
        return m <= self.window and c >= -self.coeff_bound

    def keys(self, inner_only: bool = True) -> list:
        return sorted(k for k in self.slices if not inner_only or self.inner(k))

    def dims(self, inner_only: bool = True) -> dict:
        return {k: self.dim(k) for k in self.keys(inner_only) if self.dim(k)}

    def vector_str(self, key, row) -> str:
        terms = []
        for j, c in enumerate(row):
            if c:
                lab, mu = self.slices[key][j]
                body = lab if not mu else f"{mono_str(mu)}*{lab}"
                terms.append(body if c == 1 else f"{c}*{body}")
        return "+".join(terms) or "0"

    def representatives(self, key) -> list[str]:
        rows = linalg.complement(self.B[key], self.Z[key], self.p)
        return [self.vector_str(key, r) for r in rows]

    def table(self) -> str:
        """Rows (m, m', c) with the labels of chosen representatives."""
        lines = [f"# {self.theory}  page after rules {list(self.applied) or '[]'}"]
        for k in self.keys():
            if self.dim(k):
                lines.append(f"({k[0]},{k[1]},{k[2]}): " + ", ".join(self.representatives(k)))
        return "\n".join(lines) + "\n"


def _as_module(source, max_m: int) -> QModule:
    if isinstance(source, QModule):
        return source.restrict(lambda lab: source.bidegrees[lab][0] <= max_m)
    if isinstance(source, PresentedAlgebra):
        return source.qmodule(max_m)
    if hasattr(source, "qmodule"):
        mod = source.qmodule()
        return mod.restrict(lambda lab: mod.bidegrees[lab][0] <= max_m)
    raise AHSSError(f"cannot build a Q-module from {type(source).__name__}")


def e2_page(source, theory: TheoryTag | str, window: int = 40, coeff_bound: int | None = None,
            rules=None) -> Page:
    """E_2 = H ⊗ P(s)* on the window, enlarged for the planned ``rules``."""
    if isinstance(theory, str):
        theory = TheoryTag.parse(theory)
    if theory.kind != "P":
        raise AHSSError(f"the engine runs P(s)-theories only, not {theory}")
    p, s = theory.p, theory.n
    if window < 0:
        raise AHSSError("window too small to contain any unit slice")
    if coeff_bound is None:
        coeff_bound = min(window, default_bound(p))
    planned = tuple(sorted(set(rules if rules is not None else [s])))
    for t in planned:
        if t < s:
            raise AHSSError(f"v_{t} vanishes in {theory}; rule {t} is not admissible")
    depth = len(planned)
    ext_m = depth * max((2 * p**t - 1 for t in planned), default=0)
    ext_c = depth * max((2 * (p**t - 1) for t in planned), default=0)
    module = _as_module(source, window + ext_m)
    if module.p != p:
        raise AHSSError("module and theory live at different primes")
    cb = coeff_bound + ext_c
    vgens = []
    i = s
    while -v_degree(i, p) <= cb:
        vgens.append(i)
        i += 1
    vm = _vmonos(vgens, p, cb)
    slices: dict = {}
    for lab in module.labels:
        m, mp = module.bidegrees[lab]
        for c, monos in vm.items():
            slices.setdefault((m, mp, c), []).extend((lab, mu) for mu in monos)
    index = {k: {e: j for j, e in enumerate(v)} for k, v in slices.items()}
    Z = {k: np.eye(len(v), dtype=np.int64) for k, v in slices.items()}
    B = {k: np.zeros((0, len(v)), dtype=np.int64) for k, v in slices.items()}
    if not any(m <= window for m, _, _ in slices):
        raise AHSSError("window too small to contain any unit slice")
    return Page(theory, module, window, coeff_bound, ext_m, ext_c, planned, tuple(vgens),
                slices, index, Z, B)


def _diff_matrix(page: Page, t: int, key):
    """Matrix of d_t from slice ``key``; None if the target slice is empty or absent."""
    dm, dmp, dc = _shift(t, page.p)
    tgt = (key[0] + dm, key[1] + dmp, key[2] + dc)
    src = page.slices[key]
    if tgt not in page.slices:
        return tgt, None
    tidx = page.index[tgt]
    D = np.zeros((len(src), len(tidx)), dtype=np.int64)
    vt = ((t, 1),)
    for r, (lab, mu) in enumerate(src):
        for lab2, c in page.module.q(t, lab).items():
            bd = page.module.bidegrees.get(lab2)
            m, mp = page.module.bidegrees[lab]
            if bd is not None and bd != (m + dm, mp + dmp):
                raise AHSSError(f"Q{t}({lab}) = {lab2} breaks w(d) = -1")
            j = tidx.get((lab2, mono_mul(mu, vt)))
            if j is not None:
                D[r, j] = (D[r, j] + c) % page.p
    return tgt, D


def apply_differential(page: Page, rule: DifferentialRule | int) -> Page:
    t = rule.index if isinstance(rule, DifferentialRule) else int(rule)
    p = page.p
    if t < page.theory.n:
        raise AHSSError(f"v_{t} vanishes in {page.theory}")
    if t not in page.planned:
        raise AHSSError(f"rule {t} was not planned at E_2 (pass rules=... to e2_page)")
    if t in page.applied:
        raise AHSSError(f"rule {t} already applied")
    if page.applied and t < max(page.applied):
        raise AHSSError("rules must be applied in ascending order")
    mats = {k: _diff_matrix(page, t, k) for k in page.slices}
    # d o d = 0 on E_2 representatives
    for k, (tgt, D) in mats.items():
        if D is None or tgt not in mats:
            continue
        _, D2 = mats[tgt]
        if D2 is not None and ((D @ D2) % p).any():
            raise AHSSError(f"d_{t} o d_{t} != 0 at slice {k}")
    Z, B = {}, {k: v.copy() for k, v in page.B.items()}
    for k, (tgt, D) in mats.items():
        Zk = page.Z[k]
        if D is None or Zk.shape[0] == 0:
            Z[k] = Zk
            continue
        img = (Zk @ D) % p
        Bt = page.B[tgt]
        S, piv = linalg.rref(Bt, p) if Bt.size else (Bt, [])
        red = linalg.reduce_mod_rows(img, S, piv, p)
        K = linalg.left_nullspace(red, p)
        Z[k] = linalg.rref((K @ Zk) % p, p)[0] if K.size else np.zeros((0, Zk.shape[1]), dtype=np.int64)
        B[tgt] = linalg.span(B[tgt], img, ncols=Bt.shape[1], p=p)
    new = replace(page, Z=Z, B=B, applied=page.applied + (t,), history=page.history + [page.dims()])
    for k in new.slices:
        if not linalg.contains(Z[k], B[k], p):
            raise AHSSError(f"boundaries escape the cycles at slice {k} (d o d != 0)")
        if new.dim(k) > page.dim(k):
            raise AHSSError(f"slice {k} grew from page to page")
    return new


# -- reassembly --------------------------------------------------------------------

@dataclass
class Generator:
    label: str
    key: tuple
    row: np.ndarray
    ann: tuple  # v-indices


def _times_v(page: Page, key, rows: np.ndarray, i: int):
    """v_i * rows from slice ``key`` into slice key + |v_i|; None if outside."""
    tgt = (key[0], key[1], key[2] + v_degree(i, page.p))
    if tgt not in page.slices:
        return tgt, None
    tidx = page.index[tgt]
    out = np.zeros((rows.shape[0], len(tidx)), dtype=np.int64)
    for j, (lab, mu) in enumerate(page.slices[key]):
        col = tidx.get((lab, mono_mul(mu, ((i, 1),))))
        if col is not None:
            out[:, col] = rows[:, j]
    return tgt, out


def generators(page: Page) -> list[Generator]:
    p = page.p
    gens = []
    for k in page.keys():
        Zk = page.Z[k]
        if Zk.shape[0] == page.B[k].shape[0]:
            continue
        parts = [page.B[k]]
        for i in page.vgens:
            src = (k[0], k[1], k[2] - v_degree(i, p))
            if src in page.slices and page.Z[src].size:
                _, img = _times_v(page, src, page.Z[src], i)
                if img is not None:
                    parts.append(img)
        dec = linalg.span(*parts, ncols=Zk.shape[1], p=p)
        for row in linalg.complement(dec, Zk, p):
            ann = []
            for i in page.vgens:
                tgt, img = _times_v(page, k, row[None, :], i)
                if img is None:
                    continue
                if linalg.contains(page.B[tgt], img, p):
                    ann.append(i)
            gens.append(Generator(page.vector_str(k, row), k, row, tuple(ann)))
    return gens


def _hilbert_check(page: Page, gens: list[Generator]) -> None:
    p = page.p
    vm_cache = {}
    for k in page.keys():
        predicted = 0
        for g in gens:
            if g.key[:2] != k[:2] or g.key[2] < k[2]:
                continue
            free = tuple(i for i in page.vgens if i not in g.ann)
            if free not in vm_cache:
                vm_cache[free] = _vmonos(free, p, page.coeff_bound + page.ext_c)
            predicted += len(vm_cache[free].get(k[2] - g.key[2], []))
        if predicted != page.dim(k):
            raise AHSSError(f"E_inf is not a direct sum of cyclic monomial summands "
                            f"(slice {k}: predicted {predicted}, found {page.dim(k)})")


def collapse_certificate(page: Page, extra=None) -> str | None:
    """"even" if all generators sit in even first degree, "vanishing" if every
    remaining d_i = v_i ⊗ Q_i is zero on the page, else None."""
    gens = generators(page)
    if all(g.key[0] % 2 == 0 for g in gens):
        return "even"
    p, s = page.p, page.theory.n
    if extra is None:
        extra = []
        i = s
        while 2 * p**i - 1 <= page.window + page.ext_m:
            if i not in page.applied:
                extra.append(i)
            i += 1
    for i in extra:
        dm, dmp, dc = _shift(i, p)
        for k in page.keys():
            Zk = page.Z[k]
            if not Zk.size:
                continue
            for row in Zk:
                img: dict = {}
                for j, c in enumerate(row):
                    if c:
                        lab, mu = page.slices[k][j]
                        for lab2, v in page.module.q(i, lab).items():
                            key2 = (lab2, mono_mul(mu, ((i, 1),)))
                            img[key2] = (img.get(key2, 0) + c * v) % p
                img = {kk: v for kk, v in img.items() if v}
                if not img:
                    continue
                tgt = (k[0] + dm, k[1] + dmp, k[2] + dc)
                if tgt not in page.slices or any(kk not in page.index[tgt] for kk in img):
                    return None
                vec = np.zeros((1, len(page.index[tgt])), dtype=np.int64)
                for kk, v in img.items():
                    vec[0, page.index[tgt][kk]] = v
                if not linalg.contains(page.B[tgt], vec, p):
                    return None
    return "vanishing"


def e_infinity(page: Page, force: bool = False) -> ModulePresentation:
    cert = collapse_certificate(page)
    if cert is None and not force:
        raise AHSSError("potential higher differentials: collapse criterion fails")
    gens = generators(page)
    _hilbert_check(page, gens)
    summands = []
    for g in gens:
        if g.key[2] != 0:
            raise AHSSError(f"generator {g.label} in coefficient degree {g.key[2]}")
        ann = IdealSpec(False, frozenset(g.ann))
        summands.append(CyclicSummand(g.label, g.key[:2], ann))
    return ModulePresentation(page.theory, tuple(summands))


@dataclass
class AHSSResult:
    presentation: ModulePresentation
    page: Page
    certificate: str


def run(source, theory: TheoryTag | str, rules=None, window: int = 40,
        coeff_bound: int | None = None, force: bool = False) -> AHSSResult:
    if isinstance(theory, str):
        theory = TheoryTag.parse(theory)
    rules = sorted(set(rules if rules is not None else [theory.n]))
    page = e2_page(source, theory, window, coeff_bound, rules)
    for t in rules:
        page = apply_differential(page, t)
    cert = collapse_certificate(page)
    if cert is None:
        if not force:
            raise AHSSError("potential higher differentials: collapse criterion fails")
        cert = "forced"
    return AHSSResult(e_infinity(page, force=True), page, cert)


def run_to_collapse(source, theory, rules=None, window: int = 40, coeff_bound=None,
                    force: bool = False) -> ModulePresentation:
    return run(source, theory, rules, window, coeff_bound, force).presentation


@dataclass
class PermanenceReport:
    chow_rank: int
    einf_weight0_rank: int
    ok: bool

    def __str__(self):
        return (f"weight-0 classes: {self.chow_rank}; surviving weight-0 rank: "
                f"{self.einf_weight0_rank}; permanent: {self.ok}")


def permanent_cycle_check(page: Page) -> PermanenceReport:
    """Differentials out of weight-0 coefficient-degree-0 slices land in empty slices."""
    mod = page.module
    if not mod.smooth:
        raise AHSSError("permanent_cycle_check needs a smooth-flagged module")
    chow = [lab for lab in mod.labels if mod.weight(lab) == 0 and mod.bidegrees[lab][0] <= page.window]
    for lab in chow:
        m, mp = mod.bidegrees[lab]
        for t in page.planned:
            dm, dmp, dc = _shift(t, page.p)
            tgt = (m + dm, mp + dmp, dc)
            if page.slices.get(tgt):
                raise AssertionError(f"slice {tgt} should be empty for smooth input")
    rank = sum(page.dim(k) for k in page.keys() if 2 * k[1] - k[0] == 0 and k[2] == 0)
    return PermanenceReport(len(chow), rank, rank <= len(chow))
