"""
The dyadic witness measure
==========================

The vectors e_0..e_m with 2^i leading entries equal to 2^{-i/2} are nearly
orthogonal. Their Gram matrix decays geometrically off the diagonal, which
bounds how much any unit vector can correlate with all of them at once.
"""

import numpy as np

import transwidth as tw
from transwidth.measures import dyadic_gram_exact, psi_tail_bound

d = 256
fam = tw.dyadic_family(d)
print(f"d={d}, m={fam.m}")
print("Gram matrix:\n", np.round(fam.gram(), 4))
print("max deviation from 2^(-|i-j|/2):", np.max(np.abs(fam.gram() - dyadic_gram_exact(fam.m))))

# Selberg: sum_i |<v, e_i>|^2 never exceeds the largest absolute row sum
S = tw.selberg_bound(fam.vectors)
V = tw.haar_sample(d, "complex", seed=0, n=5000)
sums = np.sum(np.abs(V @ fam.vectors.T) ** 2, axis=1)
print(f"Selberg bound {S:.6f}, largest observed sum {sums.max():.6f}")

# the uniform measure on +-e_i has risk at most psi(d) against every monomial orbit
mu = tw.dyadic_measure(d)
risks = tw.measure_risk_many(mu, tw.monomial_group(d), V[:200])
print(f"psi({d}) = {tw.psi(d):.6f}, worst risk over 200 random orbits = {risks.max():.6f}")

# psi decays like 1/log d
for dd in (4, 64, 4096, 2 ** 20):
    print(f"  d={dd:>8d}  psi={tw.psi(dd):.4f}  envelope={psi_tail_bound(dd):.4f}")
