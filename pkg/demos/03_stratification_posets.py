"""Stratification posets of compactified configuration spaces and the
boundary/coboundary index shapes.

    python demos/03_stratification_posets.py
"""

import numpy as np

from dendrokit.strata import (
    Configuration,
    LabelledTree,
    boundary_index,
    cobound_index,
    composition_image,
    enumerate_psi,
    fm_dimension,
    fm_embed,
    stratum_dim,
)

# -- the posets -------------------------------------------------------------------

print("== stratification posets ==")
for k in range(2, 7):
    print(f"level {k}: {len(enumerate_psi(k))} strata")
print("(1, 4, 26, 236, 2752: labelled trees without unary or nullary vertices)")

poset = enumerate_psi(3)
print("\nlevel 3 in ambient dimension n=2:")
for t in poset.elements:
    dim = stratum_dim(t, 2)
    role = "interior" if t.is_corolla() else "boundary"
    print(f"  {t.term:<16} dim {dim}  codim {t.n_inner_edges}  ({role})")
print(f"whole level dimension: {fm_dimension(2, 3)}")

# closures are down-sets in the contraction order
p4 = enumerate_psi(4)
pattern = LabelledTree.parse("((*@1*@2)(*@3*@4))")
image = composition_image(p4, pattern)
print(f"\nclosed image of the composition landing on {pattern.term}: "
      f"{len(image)} stratum (a corner: fully refined)")
print(f"closure of the corolla stratum: {len(composition_image(p4, p4.corolla))} strata "
      "(everything)")

# -- index shapes -------------------------------------------------------------------

print("\n== boundary and coboundary index shapes ==")
for n in (2, 3, 4):
    print(f"boundary index at level {n}: {len(boundary_index(n))} elements")
for n in (1, 2, 3, 4, 5):
    ci = cobound_index(n)
    print(f"coboundary index at level {n}: {len(ci)} = 2^{n}-1 elements, "
          f"punctured-cube order isomorphism: {ci.is_order_isomorphism()}")

# -- embedding coordinates -----------------------------------------------------------

print("\n== configuration-space coordinates ==")
config = Configuration(np.array([[0.0], [1.0], [2.0]]))
coords = fm_embed(config)
print(f"three points on a line: b(1,2,3) = {coords.b[(1, 2, 3)]}")
print(f"direction a(1,2) = {coords.a[(1, 2)]}")

rng = np.random.default_rng(0)
pts = rng.uniform(-1, 1, size=(4, 3))
base = fm_embed(Configuration(pts))
moved = fm_embed(Configuration(pts * 2.5 + 7.0))
drift = max(abs(base.b[key] - moved.b[key]) for key in base.b)
print(f"translation/scaling invariance of the ratios: max drift {drift:.2e}")

for t in (1e-3, 1e-6):
    collide = pts.copy()
    collide[1] = collide[0] + t * np.array([1.0, 0.0, 0.0])
    print(f"collision parameter {t:g}: b(1,2,3) = {fm_embed(Configuration(collide)).b[(1, 2, 3)]:.3e}")
