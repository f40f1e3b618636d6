"""
Orbits and sup-correlation
==========================

A transitive set is the orbit of one unit vector under a group of isometries.
Small groups are enumerated point by point; the monomial group (permutations
with unit-modulus phases) is kept virtual and evaluated in closed form.
"""

import numpy as np

import transwidth as tw
from transwidth.groups import rotation_group

# the square: quarter turns of the plane acting on e1
square = tw.orbit_enumerate(rotation_group(4), [1.0, 0.0])
print("square orbit:\n", np.round(square.points, 12))

# signed permutations of (1, 1)/sqrt 2 give the four diagonal points
diag = tw.orbit_enumerate(tw.signed_permutation_group(2), np.ones(2) / np.sqrt(2))
print("diagonal orbit size:", len(diag))

# sup-correlation: how well the best orbit point lines up with w
w = np.array([0.6, 0.8])
print("square vs w:", tw.sup_correlation(square, w))

# for monomial orbits the answer is sorted|v| . sorted|w|, no enumeration needed
X = tw.virtual_set(tw.monomial_group(3), [1.0, 0.0, 0.0])
print("monomial e1 vs (0.6, 0.8, 0):", tw.sup_correlation(X, np.array([0.6, 0.8, 0.0])))

# the same number by brute force over the 48 signed permutations
E = tw.orbit_enumerate(tw.signed_permutation_group(3), [1.0, 0.0, 0.0])
print("enumerated:", tw.sup_correlation(E, np.array([0.6, 0.8, 0.0])))
