"""Rooted trees and their category: a guided tour.

Trees are written in a tiny term language: `*` is a leaf edge, `( ... )` is
an edge capped by a vertex whose inputs are the listed subtrees, so `()` is
an edge capped by a nullary vertex (a stump).  Run this file top to bottom:

    python demos/01_trees_and_tree_maps.py
"""

from dendrokit.morphisms import (
    degeneracies,
    elementary_faces,
    factorize,
    hom_set,
    operation_exists,
    subtrees,
)
from dendrokit.trees import (
    aut_order,
    corolla,
    enumerate_trees,
    graft,
    parse_tree,
    reduced_corolla,
    tree_stats,
)

# -- canonical forms ----------------------------------------------------------

print("== canonical trees ==")
left = parse_tree("((**)*)")
right = parse_tree("(*(**))")
print(f"((**)*) and (*(**)) share the key {left.key!r}: {left.key == right.key}")

t3bar = reduced_corolla(3)
print(f"the stump-capped 3-corolla is {t3bar.key}, stats: {tree_stats(t3bar)}")

double = parse_tree("((**)(**))")
print(f"automorphisms of ((**)(**)): {aut_order(double)} (two swaps and a flip)")

# grafting plugs one tree's root into another tree's leaf
grafted = graft(corolla(2), (0,), corolla(2))
print(f"grafting a binary corolla onto a binary leaf: {grafted.key}")

count = len(enumerate_trees(5, 3))
print(f"isomorphism classes with at most 5 edges and 3 inputs per vertex: {count}")

# -- the operad generated by a tree ------------------------------------------

print("\n== operations inside a tree ==")
example = parse_tree("(*@e((*@a*@c)@b)@d)@f")
at = {label: addr for addr, label in example.labels.items()}
witness = operation_exists(example, at["d"], (at["a"], at["c"]))
print(
    "the composite (a,c;d) exists and composes the vertices",
    sorted(example.label(v) for v in witness.vertices),
)
print("there is no operation (e;d):", operation_exists(example, at["d"], (at["e"],)))

# -- tree maps ----------------------------------------------------------------

print("\n== tree maps ==")
print(f"maps from the single edge into the example tree: {len(hom_set(parse_tree('*'), example))}")
t1bar = parse_tree("(())")
endos = hom_set(t1bar, t1bar)
print(f"endomorphisms of the closed 1-corolla: {len(endos)}")

print("faces of ((**)*):")
for face in elementary_faces(parse_tree("((**)*)")):
    print(f"  {face.kind:<5}  {face.morphism.source.key} -> ((**)*)")

chain = parse_tree("((*))")
print(f"((*)) has {len(degeneracies(chain))} degeneracies (one per unary vertex)")

# every map factors as degeneracies, an isomorphism, then faces
collapse = endos[0]
fact = factorize(collapse)
print(
    f"factorizing a collapsing endomorphism: {len(fact.degeneracies)} degeneracy, "
    f"{len(fact.faces)} face, composite equals the map: {fact.composite() == collapse}"
)

# -- subtrees -----------------------------------------------------------------

print("\n== subtrees ==")
for s in subtrees(reduced_corolla(2)):
    print(f"  edges {sorted(s.edge_subset)!r:<24} induced {s.induced.key}")
print("(six subtrees: the closure of each edge choice that omits only closed branches)")
