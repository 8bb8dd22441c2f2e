import itertools

import pytest

import oracles
from dendrokit.errors import BudgetExceeded, DomainError
from dendrokit.morphisms import hom_set, operation_exists
from dendrokit.operads import (
    Collection,
    Signature,
    TableOperad,
    ass_operad,
    block_permutation,
    check_operad_axioms,
    com_operad,
    end_operad,
    eval_witness,
    free_operad,
    omega_operad,
    one_binary_generator,
    perm_compose,
    perm_inverse,
)
from dendrokit.trees import enumerate_trees_by_vertices, leaf_tree, parse_tree

SIX_EDGE_EXAMPLE = "(*@e((*@a*@c)@b)@d)@f"


class TestCom:
    def test_every_hom_is_a_point(self):
        P = com_operad()
        for n in range(6):
            assert len(P.hom(("x",) * n, "x")) == 1

    def test_axioms(self):
        assert check_operad_axioms(com_operad(), 3).passed

    def test_single_point_set_is_an_algebra(self):
        # a one-element set receives a unique operad map from anything
        E = end_operad((0,), arity_bound=3)
        P = com_operad()
        for n in range(4):
            assert len(E.hom(("x",) * n, "x")) == 1
            assert len(P.hom(("x",) * n, "x")) == 1


class TestAss:
    def test_sizes(self):
        A = ass_operad(4)
        assert len(A.hom(("x",) * 3, "x")) == 6
        assert len(A.hom(("x",) * 4, "x")) == 24

    def test_axioms_full_bound_four(self):
        report = check_operad_axioms(ass_operad(4), 4)
        assert report.passed, report.violations[:3]

    def test_free_symmetric_action(self):
        A = ass_operad(4)
        for n in (2, 3):
            sig = Signature(("x",) * n, "x")
            for el in A.hom(sig.inputs, sig.output):
                images = {A.sigma(el, sig, p) for p in itertools.permutations(range(n))}
                assert len(images) == len(list(itertools.permutations(range(n))))

    def test_order_substitution(self):
        A = ass_operad(4)
        f = (1, 0)  # multiply second input then first
        sig = Signature(("x", "x"), "x")
        gsig = Signature(("x", "x"), "x")
        idsig = Signature(("x",), "x")
        out = A.compose(f, sig, [(0, 1), (0,)], [gsig, idsig])
        assert out == (2, 0, 1)


class TestEnd:
    def test_sizes(self):
        E = end_operad((0, 1), 2)
        assert len(E.hom((), "x")) == 2
        assert len(E.hom(("x",), "x")) == 4
        assert len(E.hom(("x", "x"), "x")) == 16

    def test_axioms(self):
        assert check_operad_axioms(end_operad((0, 1), 2), 2).passed

    def test_composition_is_substitution(self):
        E = end_operad((0, 1), 2)
        first = (0, 0, 1, 1)  # projection onto the first argument
        neg = (1, 0)
        sig2 = Signature(("x", "x"), "x")
        sig1 = Signature(("x",), "x")
        out = E.compose(first, sig2, [neg, neg], [sig1, sig1])
        # f(g(a), g(b)) = g(a) = not a
        assert out == tuple(E.evaluate(neg, (a,)) for a, b in E._args(2))

    def test_swapping_changes_nonsymmetric_function(self):
        E = end_operad((0, 1), 2)
        first = (0, 0, 1, 1)
        sig = Signature(("x", "x"), "x")
        swapped = E.sigma(first, sig, (1, 0))
        assert swapped == (0, 1, 0, 1)  # the projection onto the other argument
        assert swapped != first

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            end_operad((0, 1), 6, budget=10**6)


class TestTreeOperad:
    def test_six_colors(self):
        W = omega_operad(parse_tree(SIX_EDGE_EXAMPLE))
        assert len(W.colors) == 6

    def test_six_nonidentity_signatures(self):
        W = omega_operad(parse_tree(SIX_EDGE_EXAMPLE))
        assert len(W.non_identity_input_sets()) == 6

    def test_single_edge_only_identity(self):
        W = omega_operad(leaf_tree())
        assert len(W.colors) == 1
        sigs = W.nonempty_signatures(3)
        assert [s.arity for s in sigs] == [1]

    def test_hom_at_most_one(self):
        for term in ["(*(**))", "(()())", SIX_EDGE_EXAMPLE]:
            t = parse_tree(term)
            W = omega_operad(t)
            for out in t.edges:
                for r in range(3):
                    for ins in itertools.permutations(t.edges, r):
                        assert len(W.hom(ins, out)) <= 1

    def test_arity_one_endo_is_identity_only(self):
        t = parse_tree("(*(**))")
        W = omega_operad(t)
        for e in t.edges:
            assert W.hom((e,), e) == ((((e,), e)),)

    def test_axioms(self):
        W = omega_operad(parse_tree("(*(**))"))
        assert check_operad_axioms(W, 3).passed

    def test_hom_set_matches_operad_map_count(self):
        # morphism counts from the tree category equal independent counts of
        # operad maps between the generated operads (colors + generators)
        trees = enumerate_trees_by_vertices(2, 2)
        for s, t in itertools.product(trees, repeat=2):
            expected = len(oracles.brute_force_morphisms(s, t))
            assert len(hom_set(s, t)) == expected


class TestEvalWitness:
    def test_matches_direct_composition(self):
        t = parse_tree(SIX_EDGE_EXAMPLE)
        at = {label: addr for addr, label in t.labels.items()}
        w = operation_exists(t, at["f"], (at["a"], at["c"], at["e"]))
        A = ass_operad(4)
        colors = {e: "x" for e in t.edges}
        decs = {}
        for v in t.vertices:
            k = len(t.children(v))
            decs[v] = tuple(range(k))  # the order-preserving element
        el, sig = eval_witness(w, t, colors, decs, A)
        assert sig.arity == 3
        assert el in A.hom(("x",) * 3, "x")


class TestFreeOperad:
    def test_binary_counts(self):
        F = free_operad(one_binary_generator(), 5)
        got = {n: len(F.level(n)) for n in (2, 3, 4, 5)}
        expected = {
            n: oracles.leaf_labelled_tree_count(n, {2}) for n in (2, 3, 4, 5)
        }
        assert got == expected == {2: 1, 3: 3, 4: 15, 5: 105}

    def test_ternary_level_five(self):
        F = free_operad(Collection(levels={3: ("w",)}), 5)
        assert len(F.level(5)) == oracles.leaf_labelled_tree_count(5, {3}) == 10

    def test_empty_collection_only_identities(self):
        F = free_operad(Collection(levels={}), 4)
        assert {n: len(F.level(n)) for n in F._levels} == {1: 1}
        assert F.level(1) == (("leaf", 0),)

    def test_forbidden_low_arities(self):
        with pytest.raises(DomainError):
            free_operad(Collection(levels={1: ("u",)}), 3)

    def test_axioms(self):
        assert check_operad_axioms(free_operad(one_binary_generator(), 4), 4).passed

    def test_mixed_generators(self):
        F = free_operad(Collection(levels={2: ("m",), 3: ("w",)}), 4)
        # arity 4: binary trees (15), one w over m in two level-orders with
        # labellings, counted by the independent oracle
        assert len(F.level(4)) == oracles.leaf_labelled_tree_count(4, {2, 3})

    def test_unit_injection_is_injective_and_equivariant(self):
        def swap_action(n, perm, el):
            if n == 2 and perm == (1, 0):
                return {"a": "b", "b": "a"}[el]
            return el

        C = Collection(levels={2: ("a", "b")}, action=swap_action)
        assert C.check_action() == []
        F = free_operad(C, 3)
        sig = Signature(("x", "x"), "x")
        images = {}
        for gen in C.level(2):
            images[gen] = F.generator_element(2, gen)
        assert len(set(images.values())) == 2
        for gen in C.level(2):
            for perm in itertools.permutations(range(2)):
                left = F.sigma(images[gen], sig, perm)
                right = F.generator_element(2, C.action(2, perm, gen))
                assert left == right

    def test_size_budget(self):
        with pytest.raises(BudgetExceeded):
            free_operad(one_binary_generator(), 8, size_bound=100)


class TestTableOperad:
    def test_round_trip_through_json(self):
        A = ass_operad(3)
        table = TableOperad.from_operad(A, 3)
        payload = table.to_json(element_str=A.element_str)
        back = TableOperad.from_json(payload)
        assert check_operad_axioms(back, 3).passed

    def test_corrupted_composite_reported(self):
        A = ass_operad(3)
        table = TableOperad.from_operad(A, 3)
        key = next(
            k
            for k in table.composition_keys()
            if len(k[3]) == 2 and all(len(s[0]) == 1 for s in k[3])
        )
        wrong = next(e for e in table.hom(*key[1]) if e != table._comp[key])
        broken = table.corrupt(key, wrong)
        report = check_operad_axioms(broken, 3)
        assert not report.passed
        # every reported violation involves the corrupted entry's signature
        assert all(
            v["law"] in {"associativity", "right-unit", "left-unit",
                         "parent-equivariance", "child-equivariance"}
            for v in report.violations
        )

    def test_missing_entry_raises(self):
        A = ass_operad(2)
        table = TableOperad.from_operad(A, 2)
        sig = Signature(("x",) * 3, "x")
        with pytest.raises(DomainError):
            table.hom(("x",) * 3, "x")


class TestPermutationHelpers:
    def test_compose_and_inverse(self):
        for n in (2, 3, 4):
            perms = list(itertools.permutations(range(n)))
            for p in perms:
                assert perm_compose(p, perm_inverse(p)) == tuple(range(n))
                assert perm_compose(perm_inverse(p), p) == tuple(range(n))
            for p, q in itertools.product(perms, repeat=2):
                comp = perm_compose(p, q)
                assert all(comp[i] == p[q[i]] for i in range(n))

    def test_block_permutation(self):
        assert block_permutation((1, 0), (2, 1)) == (2, 0, 1)
        assert block_permutation((0, 1), (2, 2)) == (0, 1, 2, 3)
