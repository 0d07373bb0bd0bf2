"""Module presentations: finite direct sums of cyclic summands h*/(A){g}.

Text format (one record per line, ``#`` starts a comment)::

    theory BP@p=2
    invariant I2                      # optional: the ideal I(X)
    gen 1 (0,0) ann {}
    gen y6 (6,3) ann {p,v1}
    gen h 1 ann {}                    # single Chow degree

Annihilators are written relative to the theory: generators already zero in
the coefficient ring are omitted.  ``parse(print(m)) == m`` for every m.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .coeff import CoeffError, IdealSpec, TheoryTag, quotient_theory


class PresentationError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


Bidegree = tuple  # (m, m') or (chow_degree,)


@dataclass(frozen=True)
class CyclicSummand:
    label: str
    bidegree: tuple
    ann: IdealSpec = field(default_factory=IdealSpec)

    def __post_init__(self):
        if not self.label or re.search(r"\s", self.label):
            raise PresentationError(f"bad generator label {self.label!r}")
        bd = self.bidegree
        if isinstance(bd, int):
            bd = (bd,)
        bd = tuple(int(x) for x in bd)
        if len(bd) not in (1, 2):
            raise PresentationError(f"bidegree {bd} must have one or two entries")
        object.__setattr__(self, "bidegree", bd)

    @property
    def weight(self) -> int | None:
        if len(self.bidegree) == 1:
            return 0
        m, mp = self.bidegree
        return 2 * mp - m

    def bidegree_str(self) -> str:
        if len(self.bidegree) == 1:
            return str(self.bidegree[0])
        return f"({self.bidegree[0]},{self.bidegree[1]})"


@dataclass(frozen=True)
class ModulePresentation:
    theory: TheoryTag
    summands: tuple = ()
    invariant: IdealSpec | None = None

    def __post_init__(self):
        out = []
        seen = set()
        unit = self.theory.unit
        for s in self.summands:
            if s.label in seen:
                raise PresentationError(f"duplicate generator label {s.label!r}")
            seen.add(s.label)
            if unit is not None and s.ann.kills(unit):
                raise PresentationError(f"summand {s.label} is killed by a unit of {self.theory}")
            out.append(replace(s, ann=s.ann.minus(self.theory.kills)))
        object.__setattr__(self, "summands", tuple(out))

    # -- queries
    def labels(self) -> list[str]:
        return [s.label for s in self.summands]

    def __len__(self):
        return len(self.summands)

    def summand(self, label: str) -> CyclicSummand:
        for s in self.summands:
            if s.label == label:
                return s
        raise KeyError(label)

    def summand_theory(self, s: CyclicSummand) -> TheoryTag | None:
        return quotient_theory(self.theory, s.ann)

    def canonical(self) -> ModulePresentation:
        key = lambda s: (s.bidegree, s.label)
        return replace(self, summands=tuple(sorted(self.summands, key=key)))

    def same(self, other: ModulePresentation) -> bool:
        """Equality up to summand order."""
        return (self.theory == other.theory
                and set(self.summands) == set(other.summands)
                and self.invariant == other.invariant)

    def by_annihilator(self) -> dict[tuple, list[str]]:
        out: dict[tuple, list[str]] = {}
        for s in self.summands:
            out.setdefault(tuple(s.ann.generators()), []).append(s.label)
        return out

    def is_torsion_for(self, ideal: IdealSpec) -> bool:
        """Every summand is killed by each generator of ``ideal`` (monomial case)."""
        full = ideal.minus(self.theory.kills)
        return all(full.issubset(s.ann) for s in self.summands)

    def check_invariant(self) -> None:
        if self.invariant is not None and not self.is_torsion_for(self.invariant):
            bad = [s.label for s in self.summands
                   if not self.invariant.minus(self.theory.kills).issubset(s.ann)]
            raise PresentationError(f"summands {bad} are not {self.invariant}-torsion")

    def filter(self, pred) -> ModulePresentation:
        return replace(self, summands=tuple(s for s in self.summands if pred(s)))

    def __str__(self) -> str:
        return dumps(self)


def presentation(theory: TheoryTag | str, items: Iterable, invariant=None) -> ModulePresentation:
    """Build from ``(label, bidegree, ann)`` triples; ``ann`` may be a string like "p,v1"."""
    if isinstance(theory, str):
        theory = TheoryTag.parse(theory)
    summands = []
    for label, bd, ann in items:
        if isinstance(ann, str):
            ann = IdealSpec.parse(ann) if ann.strip() else IdealSpec()
        elif not isinstance(ann, IdealSpec):
            ann = IdealSpec.custom(ann)
        summands.append(CyclicSummand(label, bd, ann))
    if isinstance(invariant, str):
        invariant = IdealSpec.parse(invariant)
    return ModulePresentation(theory, tuple(summands), invariant)


# -- base change ---------------------------------------------------------------

def base_change(m: ModulePresentation, target: TheoryTag | str) -> ModulePresentation:
    """h*/(A){g} -> target*/(image of A){g}; summands hit by a unit are dropped."""
    if isinstance(target, str):
        target = TheoryTag.parse(target)
    src = m.theory
    if src.p != target.p:
        raise PresentationError("base change across primes")
    if src.kind == "K" and target != src:
        raise PresentationError(f"unsupported direction {src} -> {target} (cannot un-invert)")
    unit = target.unit
    allowed = target.kills + (IdealSpec(False, frozenset({unit})) if unit else IdealSpec())
    if not src.kills.issubset(allowed):
        raise PresentationError(f"unsupported direction {src} -> {target}")
    out = []
    for s in m.summands:
        full = s.ann + src.kills
        if unit is not None and full.kills(unit):
            continue
        out.append(CyclicSummand(s.label, s.bidegree, full.minus(target.kills)))
    inv = m.invariant
    return ModulePresentation(target, tuple(out), inv)


# -- text format ---------------------------------------------------------------

_GEN_RE = re.compile(r"^gen\s+(\S+)\s+(\(\s*-?\d+\s*,\s*-?\d+\s*\)|-?\d+)\s+ann\s+\{([^}]*)\}\s*$")


def dumps(m: ModulePresentation) -> str:
    lines = [f"theory {m.theory}"]
    if m.invariant is not None:
        lines.append(f"invariant {_ideal_name(m.invariant)}")
    for s in m.summands:
        lines.append(f"gen {s.label} {s.bidegree_str()} ann {{{','.join(s.ann.generators())}}}")
    return "\n".join(lines) + "\n"


def _ideal_name(ideal: IdealSpec) -> str:
    return "(" + ",".join(ideal.generators()) + ")"


def loads(text: str) -> ModulePresentation:
    theory = None
    invariant = None
    summands = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if line.startswith("theory "):
            if theory is not None:
                raise ParseError("duplicate theory line", lineno, col)
            try:
                theory = TheoryTag.parse(line[len("theory "):])
            except CoeffError as e:
                raise ParseError(str(e), lineno, col + 7) from None
        elif line.startswith("invariant "):
            try:
                invariant = IdealSpec.parse(line[len("invariant "):])
            except CoeffError as e:
                raise ParseError(str(e), lineno, col + 10) from None
        elif line.startswith("gen "):
            mt = _GEN_RE.match(line)
            if not mt:
                raise ParseError(f"malformed gen record {line!r}", lineno, col)
            label, bd, ann = mt.groups()
            nums = [int(x) for x in re.findall(r"-?\d+", bd)]
            try:
                ideal = IdealSpec.custom(ann.split(","))
                summands.append(CyclicSummand(label, tuple(nums), ideal))
            except (CoeffError, PresentationError) as e:
                raise ParseError(str(e), lineno, col) from None
        else:
            raise ParseError(f"unknown record {line.split()[0]!r}", lineno, col)
    if theory is None:
        raise ParseError("missing theory line", 1)
    try:
        return ModulePresentation(theory, tuple(summands), invariant)
    except PresentationError as e:
        raise ParseError(str(e), 1) from None
