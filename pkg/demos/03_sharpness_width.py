"""
A transitive set with small width
=================================

The monomial orbit of (1, 1/sqrt 2, ..., 1/sqrt d)/sqrt(H_d) has width exactly
1/sqrt(H_d), about 1/sqrt(log d). The solver's upper bound meets the
prefix-flat certificate, and both stay below sqrt(psi(d)) from the dyadic
witness.
"""

import math

import transwidth as tw
from transwidth.groups import harmonic

print(f"{'d':>6s} {'upper':>10s} {'lower':>10s} {'1/sqrt(H_d)':>12s} {'sqrt(psi)':>10s}")
for d in (2, 16, 128, 1024):
    rep = tw.width_report(tw.sharpness_set(d))
    print(f"{d:6d} {rep.upper:10.6f} {rep.lower:10.6f} {1 / math.sqrt(harmonic(d)):12.6f} "
          f"{math.sqrt(tw.psi(d)):10.6f}")

# compare with the hypercube, whose width is 1/sqrt(d)
rep = tw.width_report(tw.hypercube_set(64))
print("hypercube d=64:", rep.upper, rep.lower_certificate)
