"""
Rost motives over the reals
===========================

Motivic cohomology of M_2, its Chow part and the cycle map.
"""
from morava import ahss, build_rost_motive, realmot, theories
from morava.cli import pretty
from morava.examples import q3_module

M = build_rost_motive(2)
for m in M.basis():
    print(f"{M.label(m):>6} = {realmot.mono_str(m)}   weight {M.weight(m)}")

# Q0(t^-1) follows from Q0(t * t^-1) = 0
print({realmot.mono_str(k): v for k, v in realmot.derive_q0_tau_inverse().items()})

for s in (1, 2):
    res = ahss.run_to_collapse(M, f"P({s})@p=2", [s], window=20)
    print(f"AP({s}) chow:", pretty(res.filter(lambda x: x.weight == 0)))

q3 = ahss.run_to_collapse(q3_module(), "P(1)@p=2", [1], window=20).filter(lambda x: x.weight == 0)
print("Q3:", pretty(q3))
print("AK(1)(Q3):", pretty(theories.morava_k(q3, 1)))

for n in (1, 2, 3):
    print(n, [realmot.mono_str(realmot.cycle_map(n, i)) for i in range(n)])
