"""
Random witnesses
================

A uniformly random unit vector in high dimension is nearly orthogonal to any
fixed vector: P(|<v, w>| > t) <= 2 exp(-t^2 d / 2).
"""

import math

import numpy as np

import transwidth as tw
from transwidth import measures as ms

for d, t in ((50, 0.3), (100, 0.3), (200, 0.25)):
    rep = ms.cap_tail(d, t, 100_000, seed=0)
    print(f"d={d:3d} t={t}: empirical {rep.p_hat:.5f} <= bound {rep.bound:.5f}")

# the best of many random witnesses against a small orbit
X = tw.orbit_enumerate(tw.signed_permutation_group(4), np.array([0.7, 0.5, 0.5, 0.1]))
w, val = tw.haar_witness(X, 20_000, seed=1)
print("best random witness value:", round(val, 4), " solver:", round(tw.width_report(X).upper, 4))

# complex witnesses for real sets can be made real with a loss of at most sqrt 2
w_real = tw.real_witness_from_complex(tw.haar_sample(4, "complex", seed=2)[0], X)
print("real witness:", np.round(w_real, 4))
