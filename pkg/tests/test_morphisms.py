import itertools

import pytest

import oracles
from dendrokit.errors import BudgetExceeded, DomainError
from dendrokit.morphisms import (
    OmegaMorphism,
    classify,
    contract_inner_edge,
    degeneracies,
    elementary_faces,
    factorize,
    hom_set,
    in_omega_level,
    is_extended_corolla,
    is_reduced,
    is_reduced_corolla,
    operation_exists,
    shorten,
    subtrees,
    validate_morphism,
)
from dendrokit.trees import (
    corolla,
    enumerate_trees,
    enumerate_trees_by_vertices,
    leaf_tree,
    linear_tree,
    parse_tree,
    reduced_corolla,
)

SIX_EDGE_EXAMPLE = "(*@e((*@a*@c)@b)@d)@f"


def example_tree():
    t = parse_tree(SIX_EDGE_EXAMPLE)
    return t, {label: addr for addr, label in t.labels.items()}


class TestOperationExists:
    def test_composite_through_unary(self):
        t, at = example_tree()
        w = operation_exists(t, at["d"], (at["a"], at["c"]))
        assert w is not None
        assert {t.label(v) for v in w.vertices} == {"b", "d"}

    def test_full_composite(self):
        t, at = example_tree()
        w = operation_exists(t, at["f"], (at["a"], at["c"], at["e"]))
        assert w is not None
        assert {t.label(v) for v in w.vertices} == {"b", "d", "f"}

    def test_identity(self):
        t, at = example_tree()
        w = operation_exists(t, at["b"], (at["b"],))
        assert w.is_identity

    def test_absent(self):
        t, at = example_tree()
        assert operation_exists(t, at["d"], (at["e"],)) is None
        assert operation_exists(t, at["a"], (at["c"],)) is None

    def test_repeated_inputs_absent(self):
        t, at = example_tree()
        assert operation_exists(t, at["f"], (at["a"], at["a"])) is None

    def test_nullary_on_closed_tree(self):
        t = reduced_corolla(2)
        w = operation_exists(t, (), ())
        assert w is not None
        assert len(w.vertices) == 3  # the root vertex and both stumps

    def test_nullary_absent_with_leaf(self):
        t = corolla(2)
        assert operation_exists(t, (), ()) is None

    def test_unknown_edge(self):
        with pytest.raises(DomainError):
            operation_exists(corolla(2), (5, 5), ())

    def test_closure_oracle_agreement(self):
        # the recursive search agrees with substitution closure on all
        # operations of every small tree
        for t in enumerate_trees(5, 3):
            ops = oracles.tree_operation_closure(t)
            for output in t.edges:
                for r in range(0, 4):
                    for inputs in itertools.permutations(t.edges, r):
                        expected = (inputs, output) in ops
                        assert (
                            operation_exists(t, output, inputs) is not None
                        ) == expected


class TestValidateAndHom:
    def test_identity_map_valid(self):
        for term in ["*", "(**)", "(*(**))", "(()())"]:
            t = parse_tree(term)
            assert validate_morphism(t, t, {e: e for e in t.edges})

    def test_degeneracy_picture(self):
        # collapsing the unary vertex of the three-vertex example shape
        t = parse_tree("(((**))*)")
        sigma = degeneracies(t)
        assert len(sigma) == 1
        assert validate_morphism(t, sigma[0].target, sigma[0].map)

    def test_corolla_to_single_edge_invalid(self):
        t2, eta = corolla(2), leaf_tree()
        m = {e: () for e in t2.edges}
        assert not validate_morphism(t2, eta, m)

    def test_hom_from_single_edge_counts_edges(self):
        for term in ["*", "(**)", "(*(**))", "(()()())"]:
            t = parse_tree(term)
            assert len(hom_set(leaf_tree(), t)) == len(t.edges)

    def test_hom_t2_t2(self):
        assert len(hom_set(corolla(2), corolla(2))) == 2

    def test_hom_reduced_one_corolla(self):
        t = linear_tree(1, closed=True)
        assert len(hom_set(t, t)) == 3

    def test_brute_force_agreement(self):
        trees = enumerate_trees(4, 2)
        for s in trees:
            for t in trees:
                fast = hom_set(s, t)
                slow = oracles.brute_force_morphisms(s, t)
                assert len(fast) == len(slow)
                assert {tuple(sorted(m.map.items())) for m in fast} == {
                    tuple(sorted(m.items())) for m in slow
                }

    def test_budget(self):
        big = reduced_corolla(4)
        with pytest.raises(BudgetExceeded):
            hom_set(big, big, budget=10)

    def test_composition_closure(self):
        trees = enumerate_trees_by_vertices(2, 2)
        for a, b in itertools.product(trees, repeat=2):
            for f in hom_set(a, b):
                for g in hom_set(b, b):
                    composite = f.then(g)
                    assert validate_morphism(a, b, composite.map)

    def test_deterministic_order(self):
        t = parse_tree("(*(**))")
        once = [m.map for m in hom_set(corolla(2), t)]
        twice = [m.map for m in hom_set(corolla(2), t)]
        assert once == twice


class TestFacesAndDegeneracies:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_corolla_faces_are_edge_inclusions(self, n):
        fs = elementary_faces(corolla(n))
        assert len(fs) == n + 1
        assert all(f.morphism.source == leaf_tree() for f in fs)
        assert all(f.kind == "outer" for f in fs)

    def test_six_edge_example_two_inner_faces(self):
        t, at = example_tree()
        inner = [f for f in elementary_faces(t) if f.kind == "inner"]
        assert {t.label(f.contracted) for f in inner} == {"b", "d"}

    def test_grafted_tree_face_count(self):
        # frozen from the extensional enumeration over injective maps
        fs = elementary_faces(parse_tree("((**)*)"))
        assert len(fs) == 3
        assert sum(f.kind == "inner" for f in fs) == 1

    def test_double_binary_faces(self):
        fs = elementary_faces(parse_tree("((**)(**))"))
        assert len(fs) == 4
        assert sum(f.kind == "inner" for f in fs) == 2

    def test_no_unary_no_degeneracies(self):
        assert degeneracies(parse_tree("((**)*)")) == []

    def test_one_corolla_degeneracy(self):
        sigma = degeneracies(corolla(1))
        assert len(sigma) == 1
        assert sigma[0].target == leaf_tree()

    def test_double_unary_two_degeneracies(self):
        assert len(degeneracies(parse_tree("((*))"))) == 2

    def test_degeneracies_have_face_sections(self):
        for term in ["(*)", "((*))", "((()))", "(*(*)*)"]:
            t = parse_tree(term)
            for sigma in degeneracies(t):
                sections = [
                    f.morphism
                    for f in elementary_faces(t)
                    if f.morphism.source == sigma.target
                    and f.morphism.then(sigma) == OmegaMorphism.identity(sigma.target)
                ]
                assert len(sections) == 2

    def test_inner_faces_match_contractions(self):
        for term in ["(*(**))", "((()))", "(()(()))"]:
            t = parse_tree(term)
            by_contraction = {e: contract_inner_edge(t, e) for e in t.inner_edges}
            inner = [f for f in elementary_faces(t) if f.kind == "inner"]
            assert len(inner) == len(by_contraction)
            for f in inner:
                assert f.contracted in by_contraction


class TestFactorize:
    def test_identity(self):
        t = parse_tree("(*(**))")
        fact = factorize(OmegaMorphism.identity(t))
        assert fact.degeneracies == [] and fact.faces == []
        assert fact.isomorphism.is_isomorphism()

    def test_single_face(self):
        t = parse_tree("(*(**))")
        for face in elementary_faces(t):
            fact = factorize(face.morphism)
            assert fact.degeneracies == []
            assert fact.composite() == face.morphism

    def test_degeneracy_then_face(self):
        t = linear_tree(1, closed=True)
        for m in hom_set(t, t):
            fact = factorize(m)
            assert fact.composite() == m

    def test_small_grid(self):
        trees = enumerate_trees_by_vertices(2, 3)
        for s, t in itertools.product(trees, repeat=2):
            for m in hom_set(s, t):
                fact = factorize(m)
                assert fact.composite() == m


class TestSubtrees:
    def test_single_edge(self):
        subs = subtrees(leaf_tree())
        assert len(subs) == 1
        assert subs[0].induced == leaf_tree()

    def test_reduced_two_corolla(self):
        assert len(subtrees(reduced_corolla(2))) == 6

    def test_plain_corolla(self):
        # the bare root is not a subtree of a leafy corolla: both omitted
        # branches are open
        subs = subtrees(corolla(2))
        assert len(subs) == 3
        assert sorted(len(s.edge_subset) for s in subs) == [1, 1, 3]

    def test_corolla_subtree_binomials(self):
        import math

        for n in range(1, 6):
            t = reduced_corolla(n)
            subs = subtrees(t)
            for k in range(1, n + 1):
                count = sum(
                    1
                    for s in subs
                    if s.contains_root
                    and s.induced == reduced_corolla(k)
                )
                assert count == math.comb(n, k)

    def test_validity_oracle_both_directions(self):
        for t in enumerate_trees(6, 3):
            valid_subsets = {s.edge_subset for s in subtrees(t)}
            for subset in oracles.connected_edge_subsets(t):
                assert (subset in valid_subsets) == oracles.subtree_subset_is_valid(
                    t, subset
                )

    def test_reduced_trees_every_connected_subset_valid(self):
        for t in enumerate_trees(6, 3, reduced_only=True):
            assert len(subtrees(t)) == len(oracles.connected_edge_subsets(t))

    def test_inclusions_validate(self):
        for t in enumerate_trees(5, 3):
            for s in subtrees(t):
                assert validate_morphism(s.induced, t, s.inclusion.map)


class TestClassify:
    def test_level_membership(self):
        t3 = reduced_corolla(3)
        assert in_omega_level(t3, 3)
        assert not in_omega_level(t3, 2)
        assert is_reduced(t3)

    def test_single_edge_not_reduced(self):
        assert not is_reduced(leaf_tree())
        assert is_reduced(parse_tree("()"))

    def test_reduced_corolla_predicate(self):
        assert is_reduced_corolla(parse_tree("(()())"), 2)
        assert not is_reduced_corolla(parse_tree("(()())"), 3)

    def test_extended_corolla_with_one_unary(self):
        t = parse_tree("(()()(()))")  # one unary vertex over a branch
        flag, chain = is_extended_corolla(t, 3)
        assert flag and len(chain) == 1
        assert chain[0].target == reduced_corolla(3)

    def test_extended_corolla_itself(self):
        flag, chain = is_extended_corolla(reduced_corolla(4), 4)
        assert flag and chain == []

    def test_extended_one_corollas_are_linear(self):
        assert is_extended_corolla(linear_tree(1, closed=True), 1)[0]
        assert is_extended_corolla(linear_tree(3, closed=True), 1)[0]
        assert not is_extended_corolla(parse_tree("()"), 1)[0]
        assert not is_extended_corolla(reduced_corolla(2), 1)[0]

    def test_not_extended_when_not_reduced(self):
        assert not is_extended_corolla(corolla(3), 3)[0]

    def test_shorten(self):
        t = parse_tree("(((())))")
        short, chain = shorten(t)
        assert short == parse_tree("()")
        assert len(chain) == 3
        again, chain2 = shorten(short)
        assert again == short and chain2 == []

    def test_shorten_extended_corolla(self):
        t = parse_tree("(()()((())))")
        short, chain = shorten(t)
        assert short == reduced_corolla(3)
        assert len(chain) == 2

    def test_classify_report(self):
        report = classify(reduced_corolla(3))
        assert report["is_reduced"] is True
        assert report["reduced_corolla"] == 3
        assert report["min_omega_level"] == 3
