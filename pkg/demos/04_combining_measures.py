"""
Combining witness measures
==========================

Measures on orthogonal pieces combine into a measure on the whole space.
For a split into two subspaces the pieces are mixed with weights l1, l2. For
a system of blocks permuted by the group, a measure on one block is spread
over all blocks.
"""

import math

import numpy as np

import transwidth as tw
from transwidth import measures as ms
from transwidth.decompose import coordinate_line_system

half = ms.atom_measure([[1.0], [-1.0]], [0.5, 0.5])
mu = tw.combine_reducible(half, half, 1.0, 1.0, [1.0, 0.0], [0.0, 1.0])
print("combined atoms:\n", mu.atoms)

v = np.array([1.0, 1.0]) / math.sqrt(2)
print("second moment for a fixed vector:", ms.fixed_element_second_moment(mu, v))

# when the group flips the two lines independently the sup moves inside the integral
flips = tw.explicit_group([np.diag([-1.0, 1.0]), np.diag([1.0, -1.0])])
print("risk against the sign-flip orbit:", tw.measure_risk(mu, tw.orbit_enumerate(flips, v)).value)
print("risk against {v, -v}:", tw.measure_risk(mu, tw.orbit_enumerate(tw.explicit_group([-np.eye(2)]), v)).value)

# coordinate lines: the dyadic measure reappears from +-e1 spread by transpositions
d = 16
e1 = np.eye(d)[0]
spread = tw.combine_imprimitive(ms.atom_measure([e1, -e1], [0.5, 0.5]), tw.dyadic_measure(d),
                                coordinate_line_system(d).coset_maps)
print(f"imprimitive combination: {spread.size} atoms, all unit:",
      np.allclose(np.linalg.norm(spread.atoms, axis=1), 1.0))
