"""
The tower P(1) -> P(2) -> ... -> P(n)
=====================================

A cohomology module free over Q(n-1) gives P(1)* that is P(n)*-free.
Climbing the tower doubles the basis at each step.
"""
from morava import ahss, palg, theories
from morava.cli import pretty
from morava.coeff import TheoryTag

p, n = 3, 3
mod = palg.free_qmodule(p, n, [("b", (0, 0)), ("c", (4, 2))])
start = ahss.run_to_collapse(mod, TheoryTag.P(1, p), [1, 2], window=60)
print("P(1):", pretty(start))

pairings = theories.free_pairings(p, n, ["b", "c"], mod)
level = start
for s in range(1, n):
    level = theories.tower_step(level, s, pairings[s], n)
    print(f"P({s + 1}):", pretty(level))

for s in range(1, n + 2):
    print(f"K({s}):", pretty(theories.collapse_k(start, s, pairings)))
