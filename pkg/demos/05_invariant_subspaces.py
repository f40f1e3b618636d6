"""
Invariant subspaces by averaging
================================

Averaging a random Hermitian matrix over a finite group gives a matrix that
commutes with the group. Its eigenspaces are invariant subspaces.
"""

import numpy as np

import transwidth as tw
from transwidth.decompose import coordinate_line_system, system_from_bases
from transwidth.errors import NotASystem

g = tw.permutation_group(5)
dec = tw.reynolds_invariant_subspaces(g, seed=0)
print("S_5 on R^5 splits into dims", dec.dims)
for P in dec.projectors():
    comm = max(np.max(np.abs(m @ P - P @ m)) for m in g.generator_matrices())
    print(f"  rank {round(np.trace(P).real)} projector, commutator {comm:.1e}")

# coordinate lines form a system of blocks permuted by signed permutations
rep = tw.validate_imprimitivity(coordinate_line_system(4), tw.signed_permutation_group(4))
print("block permutations per generator:", rep.sigma)

try:
    tw.validate_imprimitivity(system_from_bases([[1.0, 0.0], [1.0, 1.0]]), tw.permutation_group(2))
except NotASystem as exc:
    print("rejected:", exc)
