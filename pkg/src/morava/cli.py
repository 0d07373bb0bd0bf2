"""The ``morava`` command line.

Exit codes: 0 success, 1 an example check found differences, 2 usage or input
parse error, 3 computation error.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import adjoint, ahss, fgl, palg, theories
from .coeff import CoeffError, IdealSpec, TheoryTag
from .examples import NAMES, ExampleError, example
from .presentation import ModulePresentation, ParseError, PresentationError, dumps, loads

DEFAULT_P = 2
DEFAULT_WINDOW = 40

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_theory(text: str, p: int) -> TheoryTag:
    """Accept ``K(1)@p=2``, ``K(1)``, ``K1``, ``P2``, ``BP``."""
    s = text.strip()
    if "@p=" in s:
        return TheoryTag.parse(s)
    m = re.fullmatch(r"(BP|HZ|HF)|([PkK])\(?(\d+)\)?|BP<(\d+)>", s)
    if not m:
        raise UsageError(f"cannot parse theory {text!r}")
    if m.group(1):
        return TheoryTag(m.group(1), p)
    if m.group(4):
        return TheoryTag.BPn(int(m.group(4)), p)
    return TheoryTag(m.group(2), p, int(m.group(3)))


def pretty(pres: ModulePresentation) -> str:
    """h*{a, b} ⊕ h*/(v1){c}: summands grouped by annihilator, in input order."""
    if not pres.summands:
        return "0"
    name = _coeff_name(pres.theory)
    groups: dict = {}
    for s in pres.summands:
        groups.setdefault(tuple(s.ann.generators()), []).append(s.label)
    parts = []
    for ann, labels in groups.items():
        quot = f"/({','.join(ann)})" if ann else ""
        parts.append(f"{name}{quot}{{{', '.join(labels)}}}")
    return " ⊕ ".join(parts)


def _coeff_name(t: TheoryTag) -> str:
    return {"BP": "BP*", "HZ": "Z*", "HF": "F*"}.get(t.kind) or (
        f"BP<{t.n}>*" if t.kind == "BP<>" else f"{t.kind}({t.n})*")


def _emit(pres: ModulePresentation, fmt: str) -> str:
    return dumps(pres).rstrip("\n") if fmt == "structured" else pretty(pres)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


# -- verbs ---------------------------------------------------------------------------

def cmd_pseries(a) -> int:
    bound = a.bound if a.bound is not None else a.p**3
    if a.theory:
        spec = fgl.FGLSpec.honda(parse_theory(a.theory, a.p))
    else:
        spec = fgl.FGLSpec.bp(a.p)
    series = fgl.p_series(spec, bound)
    if a.format == "structured":
        print(f"pseries {spec.kind} {spec.theory} bound {bound}")
    print(series)
    return EXIT_OK


def cmd_ring(a) -> int:
    t = parse_theory(a.theory, a.p)
    bound = a.bound if a.bound is not None else a.p ** ((t.n or 1) + 1)
    R = fgl.bzp_ring(t, bound)
    print(f"{t} [y] / ({R.relation})   truncated at y^{bound}")
    if t.kind == "K":
        print(f"free rank {R.free_rank()}")
    elif t.kind == "P":
        print(f"v{t.n}-torsion free below y^{bound}: {fgl.vn_torsion_check(R)}")
    return EXIT_OK


def _load_algebra(path: str):
    return palg.loads_algebra(_read(path))


def cmd_ahss(a) -> int:
    source = _load_algebra(a.input)
    t = parse_theory(a.theory, getattr(source, "p", 2))
    rules = [int(x) for x in a.rules.split(",")] if a.rules else None
    res = ahss.run(source, t, rules, window=a.window, coeff_bound=a.bound, force=a.force)
    if a.pages:
        print(res.page.table())
        print()
    pres = res.presentation
    if a.chow:
        pres = pres.filter(lambda s: s.weight == 0)
    print(_emit(pres, a.format))
    if a.format != "structured":
        print(f"collapse: {res.certificate}")
    return EXIT_OK


def _load_pres(path: str) -> ModulePresentation:
    return loads(_read(path))


def cmd_quotient(a) -> int:
    pres = _load_pres(a.input)
    try:
        ideal = IdealSpec.parse(a.ideal)
    except CoeffError as e:
        raise UsageError(str(e)) from None
    print(_emit(theories.omega_quotient(pres, ideal), a.format))
    return EXIT_OK


def cmd_tensor(a) -> int:
    pres = _load_pres(a.input)
    t = parse_theory(a.theory, pres.theory.p)
    if t.kind != "K":
        from .presentation import base_change
        out = base_change(pres, t)
    else:
        out = theories.morava_k(pres, t.n)
    print(_emit(out, a.format))
    return EXIT_OK


def _bases(pres: ModulePresentation) -> list[str]:
    out = []
    for s in pres.summands:
        b = re.sub(r"^(?:Q\d+)+", "", s.label)
        if b not in out:
            out.append(b)
    return out


def cmd_tower(a) -> int:
    pres = _load_pres(a.input)
    if pres.theory.kind != "P" or pres.theory.n != a.start:
        raise UsageError(f"--from {a.start} needs a P({a.start}) presentation, got {pres.theory}")
    n = theories.torsion_height(pres)
    pairings = theories.free_pairings(pres.theory.p, n, _bases(pres))
    level = pres
    for s in range(a.start, a.to):
        level = theories.tower_step(level, s, pairings.get(s, {}), n)
    print(_emit(level, a.format))
    return EXIT_OK


def cmd_adjoint(a) -> int:
    rep = adjoint.nonnilpotency_witness(a.p or 3, a.iterations)
    print(rep.table())
    return EXIT_OK if rep.ok else EXIT_DIFF


def cmd_check(a) -> int:
    names = list(NAMES) if a.all or not a.example else [a.example]
    failed = 0
    for name in names:
        diffs = example(name).diff(a.window)
        print(f"{name}: {'ok' if not diffs else 'DIFF'}")
        for d in diffs:
            print("  " + d.replace("\n", "\n  "))
        failed += bool(diffs)
    return EXIT_DIFF if failed else EXIT_OK


def cmd_examples(a) -> int:
    for name in NAMES:
        if a.format == "structured":
            print(f"{name}\t{example(name).provenance}")
        else:
            print(name)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None,
                        help=f"prime (default {DEFAULT_P}; 3 for adjoint)")
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW,
                        help=f"largest first degree kept (default {DEFAULT_WINDOW})")
    common.add_argument("--bound", type=int, default=None,
                        help="degree bound; defaults per verb (coefficients: 2(p^4-1))")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    ap = argparse.ArgumentParser(prog="morava", description="Algebraic Morava K-theory computations.")
    sub = ap.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("pseries", parents=[common], help="p-series of the BP or Honda law")
    s.add_argument("--theory", help="Honda law over P(n), k(n) or K(n) (e.g. K2)")
    s.set_defaults(func=cmd_pseries)

    s = sub.add_parser("ring", parents=[common], help="h*[y]/([p](y)) for h = BP, P(n), K(n)")
    s.add_argument("--theory", required=True)
    s.set_defaults(func=cmd_ring)

    s = sub.add_parser("ahss", parents=[common], help="run the AHSS on a presented algebra")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--theory", default="P1")
    s.add_argument("--rules", help="comma-separated differential indices (default: the height)")
    s.add_argument("--force", action="store_true", help="accept collapse without a certificate")
    s.add_argument("--pages", action="store_true", help="print the final page table")
    s.add_argument("--chow", action="store_true", help="keep weight-zero summands only")
    s.set_defaults(func=cmd_ahss)

    s = sub.add_parser("quotient", parents=[common], help="Omega / ideal on a BP presentation")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--ideal", required=True)
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("tensor", parents=[common], help="base change of a presentation")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--theory", required=True)
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("tower", parents=[common], help="iterate the tower from P(s) to P(t)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--from", dest="start", type=int, required=True)
    s.add_argument("--to", type=int, required=True)
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("adjoint", parents=[common], help="ad(y)-power table (p defaults to 3 here)")
    s.add_argument("--iterations", type=int, default=8)
    s.set_defaults(func=cmd_adjoint)

    s = sub.add_parser("check", parents=[common], help="recompute curated examples and diff")
    s.add_argument("--example")
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("examples", parents=[common], help="list curated examples")
    s.set_defaults(func=cmd_examples)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.p is None and args.verb != "adjoint":
        args.p = DEFAULT_P
    try:
        return args.func(args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ExampleError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError, PresentationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COMPUTE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
