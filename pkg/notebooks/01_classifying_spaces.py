"""
BZ/p and SO(7)
==============

p-series, quotient rings and the spectral sequence at P(1).
"""
from morava import ahss, fgl, palg, theories
from morava.cli import pretty
from morava.coeff import IdealSpec, TheoryTag

# The p-series over BP at p = 3, truncated at y^27
print(fgl.p_series(fgl.FGLSpec.bp(3), 27))

# Omega(BZ/3) = BP*[y]/([3](y)); reduce mod I(1) and tensor with K(1)
R = fgl.bzp_ring(TheoryTag.BP(3), 27)
print(theories.omega_quotient(R, IdealSpec.I(1)).relation)
print("K(1) rank:", theories.morava_k(R, 1).free_rank())

# E_infinity of the AHSS at P(1) for BZ/2, up to degree 12
res = ahss.run(palg.bzp_algebra(2), "P(1)@p=2", window=12)
print(pretty(res.presentation), "|", res.certificate)

# SO(7) at p = 2: d_3(x3) = v1*y6
res = ahss.run(palg.so7_algebra(), "P(1)@p=2", window=20)
# surviving classes in coefficient degree 0
for key in res.page.keys():
    if key[2] == 0 and res.page.dim(key):
        print(key, res.page.representatives(key))
print(pretty(res.presentation))
