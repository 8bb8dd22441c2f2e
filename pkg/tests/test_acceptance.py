"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line.  Run as ``pytest tests/test_acceptance.py -v -s``.

Tolerances are pinned here: stratum counts, dimension laws, Segal
bijections, round-trip isomorphisms, factorizations and poset structures are
exact; embedding coordinates use 1e-12 for the algebraic identities, 1e-9
for gauge invariance, and monotone decay along collision families.
"""

import functools
import itertools
import json
import math
import os
import subprocess
import sys
import time

import oracles
from dendrokit import connectivity as conn
from dendrokit import dendroidal as dnd
from dendrokit import morphisms as mor
from dendrokit import strata
from dendrokit import trees as tr
from dendrokit.fixtures import load_dendroidal
from dendrokit.operads import (
    ass_operad,
    com_operad,
    end_operad,
    free_operad,
    one_binary_generator,
)

CLI = [sys.executable, "-m", "dendrokit.cli"]


def run_cli(*args, hashseed="0"):
    env = dict(os.environ)
    env["PYTHONHASHSEED"] = hashseed
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env, timeout=600
    )


def criterion(number, name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {number:>2} {name}: FAIL")
                raise
            print(f"\nACCEPTANCE {number:>2} {name}: PASS")

        return wrapper

    return decorate


@criterion(1, "stratum counts via CLI under one second")
def test_criterion_01_stratum_counts():
    start = time.perf_counter()
    three = run_cli("psi", "3", "--count")
    four = run_cli("psi", "4", "--count")
    elapsed = time.perf_counter() - start
    assert three.returncode == 0 and three.stdout.strip() == "4"
    assert four.returncode == 0 and four.stdout.strip() == "26"
    assert elapsed < 1.0, f"took {elapsed:.2f}s"


@criterion(2, "dimension law on all strata k<=6, n in 1..3")
def test_criterion_02_dimension_law():
    start = time.perf_counter()
    violations = 0
    for k in range(2, 7):
        poset = strata.enumerate_psi(k)
        for n in (1, 2, 3):
            level = strata.fm_dimension(n, k)
            for t in poset.elements:
                if level - strata.stratum_dim(t, n) != t.n_inner_edges:
                    violations += 1
    elapsed = time.perf_counter() - start
    assert violations == 0
    assert elapsed < 30.0, f"took {elapsed:.2f}s"


@criterion(3, "three boundary strata at level three, each of dimension 2(n-1)")
def test_criterion_03_psi3_layers():
    poset = strata.enumerate_psi(3)
    others = [t for t in poset.elements if t != poset.corolla]
    assert len(others) == 3
    for n in (1, 2, 3, 4):
        assert all(strata.stratum_dim(t, n) == 2 * (n - 1) for t in others)


@criterion(4, "strict Segal bijections for the nerve battery, corrupted input fails")
def test_criterion_04_segal():
    start = time.perf_counter()
    carrier44 = tr.enumerate_trees_by_vertices(4, 4)
    carrier42 = tr.enumerate_trees_by_vertices(4, 2)
    battery = [
        (com_operad(), carrier44),
        (ass_operad(4), carrier44),
        # the function operad is checked at its stored arity bound; exact
        # set-level checks above that bound are astronomically large
        (end_operad((0, 1), 2), carrier42),
        (free_operad(one_binary_generator(), 4), carrier44),
    ]
    for P, carrier in battery:
        report = dnd.is_strict_segal(dnd.nerve(P), carrier)
        assert report.passed, (P.name, report.failures[:2])
        assert len(report.checked) == len(carrier)
    corrupted = load_dendroidal("corrupted.dendroidal.json")
    report = dnd.is_strict_segal(corrupted)
    assert not report.passed
    assert report.failures[0]["tree"] == "(*(**))"
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"


@criterion(5, "operads reconstruct from their nerves with emitted isomorphisms")
def test_criterion_05_round_trip():
    battery = [
        (com_operad(), 3),
        (ass_operad(4), 3),
        (end_operad((0, 1), 3), 3),
        (free_operad(one_binary_generator(), 4), 3),
    ]
    for P, bound in battery:
        witness = dnd.nerve_round_trip(P, bound)
        assert witness.ok, (P.name, witness.failures[:2])
        assert witness.color_map and witness.element_maps
        payload = witness.to_json()
        assert payload["ok"] is True and payload["instances_checked"] > 0


@criterion(6, "free operad on one binary generator counts 1, 3, 15, 105")
def test_criterion_06_free_counts():
    F = free_operad(one_binary_generator(), 5)
    got = [len(F.level(n)) for n in (2, 3, 4, 5)]
    independent = [oracles.leaf_labelled_tree_count(n, {2}) for n in (2, 3, 4, 5)]
    assert got == independent == [1, 3, 15, 105]


@criterion(7, "every tree map factors as degeneracies then faces, bit-exactly")
def test_criterion_07_factorization():
    trees = tr.enumerate_trees_by_vertices(3, 3)
    failures = 0
    total = 0
    for s, t in itertools.product(trees, repeat=2):
        for m in mor.hom_set(s, t):
            total += 1
            fact = mor.factorize(m)
            if fact.composite() != m:
                failures += 1
    assert failures == 0
    assert total > 10000


@criterion(8, "root-containing corolla subtrees count binomially")
def test_criterion_08_subtree_corollas():
    for n in range(1, 6):
        subs = mor.subtrees(tr.reduced_corolla(n))
        for k in range(1, n + 1):
            count = sum(
                1
                for s in subs
                if s.contains_root and s.induced == tr.reduced_corolla(k)
            )
            assert count == math.comb(n, k), (n, k, count)


@criterion(9, "coboundary index is a punctured cube with an order isomorphism")
def test_criterion_09_punctured_cube():
    for n in range(1, 6):
        ci = strata.cobound_index(n)
        assert len(ci) == 2**n - 1
        assert ci.is_order_isomorphism()


@criterion(10, "connectivity formulas agree on the full grid")
def test_criterion_10_connectivity():
    for n in range(1, 7):
        for d in range(0, 7):
            for k in range(2, 9):
                q = conn.TowerQuery(n, d, k)
                audit = conn.layer_from_parts(q)
                assert audit.layer == (k - 1) * (d - 2) + 1
                assert audit.layer == conn.layer_connectivity(q)
    for d in range(2, 7):
        lowest = min(
            conn.layer_connectivity(conn.TowerQuery(1, d, k)) for k in range(2, 9)
        )
        assert lowest == d - 1 == conn.global_connectivity(d)


@criterion(11, "embedding coordinate identities on a thousand random configurations")
def test_criterion_11_fm_coordinates():
    result = strata.fm_selftest(seed=2026, trials=1000, k=4, ambient=3)
    assert result["worst_antisymmetry"] <= 1e-12
    assert result["worst_reciprocal"] <= 1e-12
    assert result["worst_gauge_invariance"] <= 1e-9
    ratios = result["collision_ratios"]
    assert ratios[1] < ratios[0]
    assert result["collision_monotone"]
    assert result["passed"]


COMMANDS = [
    ("enum-trees", "--max-edges", "5", "--max-inputs", "3", "--json"),
    ("hom", "(**)", "(*(**))", "--json"),
    ("faces", "((**)*)", "--json"),
    ("subtrees", "(()())", "--json"),
    ("classify", "(()()(()))", "--json"),
    ("operad", "check", "ass", "--arity-bound", "3"),
    ("operad", "show", "com", "--arity-bound", "2"),
    ("operad", "build-free", "--level", "2=1", "--arity-bound", "5", "--json"),
    ("nerve", "ass", "--max-vertices", "2", "--max-inputs", "3"),
    ("segal-check", "--operad", "ass", "--max-vertices", "2", "--max-inputs", "3"),
    ("reconstruct", "--operad", "ass", "--arity-bound", "2", "--round-trip"),
    ("psi", "4", "--json", "--ambient", "2"),
    ("psi", "3", "--dot"),
    ("boundary-index", "3", "--json"),
    ("cobound-index", "4"),
    ("fm-embed", "--selftest", "--trials", "40", "--seed", "11"),
    ("connectivity", "--n", "2", "--d", "4", "--table", "8", "--json"),
]


@criterion(12, "byte-identical CLI output across runs and worker counts")
def test_criterion_12_determinism():
    factorize_input = json.dumps(
        {
            "source_key": "*",
            "target_key": "(**)",
            "edge_map": {"": "0"},
        }
    )
    commands = list(COMMANDS) + [("factorize", factorize_input)]
    for args in commands:
        first = run_cli(*args, hashseed="101")
        second = run_cli(*args, hashseed="424242")
        threaded = run_cli("--workers", "4", *args, hashseed="7")
        assert first.returncode == 0, (args, first.stderr[:300])
        assert first.stdout == second.stdout == threaded.stdout, args
        assert first.stdout != ""
