"""Stratification posets of compactified configuration spaces.

The compactified space of k points in R^n modulo translation and scaling is
a manifold with corners; its strata are indexed by rooted trees with k
labelled leaves and no vertices of valence one or two, ordered by
contraction of inner edges (the corolla is the open interior).  A stratum
whose tree has vertex valences k_1..k_l has dimension sum_i (n(k_i-2)-1);
the whole level has dimension n(k-1)-1 for k >= 2 and levels 0 and 1 are
single points.

This module enumerates those posets, computes stratum dimensions, closure
relations and composition images, derives the boundary index poset (drop the
corolla) and the coboundary index poset (root-containing proper subtrees of
the stump-capped corolla, a punctured cube), and evaluates the direction and
ratio coordinates of the configuration-space embedding numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, charge
from .morphisms import shorten, subtrees
from .trees import LEAF, Tree, parse_tree, reduced_corolla

__all__ = [
    "LabelledTree",
    "StratPoset",
    "enumerate_psi",
    "stratum_dim",
    "fm_dimension",
    "composition_image",
    "boundary_index",
    "cobound_index",
    "CoboundIndex",
    "shorten",
    "Configuration",
    "FMCoordinates",
    "fm_embed",
    "fm_selftest",
]


# -- leaf-labelled trees -------------------------------------------------------


class LabelledTree:
    """A rooted tree whose maximal edges are all leaves, labelled bijectively
    by 1..k, with every vertex of at least two inputs.

    Stored as a canonical nested structure: a leaf is an int label, a vertex
    is a tuple of children sorted by serialized sub-term.  Isomorphisms must
    respect the labelling, so distinct labellings are distinct elements.
    """

    __slots__ = ("_node", "_hash")

    def __init__(self, node):
        self._node = _canon_labelled(node)
        self._hash = hash(self._node)

    @property
    def node(self):
        return self._node

    @property
    def n_leaves(self):
        return len(self.labels())

    def labels(self):
        out = []

        def rec(node):
            if isinstance(node, int):
                out.append(node)
            else:
                for c in node:
                    rec(c)

        rec(self._node)
        return sorted(out)

    @property
    def term(self):
        return _labelled_term(self._node)

    def valences(self):
        """Multiset (sorted tuple) of vertex valences, inputs plus one."""
        out = []

        def rec(node):
            if isinstance(node, int):
                return
            out.append(len(node) + 1)
            for c in node:
                rec(c)

        rec(self._node)
        return tuple(sorted(out))

    @property
    def n_vertices(self):
        return len(self.valences())

    @property
    def n_inner_edges(self):
        # every non-root vertex sits on top of one inner edge
        return self.n_vertices - 1

    def is_corolla(self):
        return all(isinstance(c, int) for c in self._node)

    def contractions(self):
        """All single inner-edge contractions (one step up the poset)."""
        results = []

        def rec(node, rebuild):
            if isinstance(node, int):
                return
            for i, child in enumerate(node):
                if isinstance(child, int):
                    continue
                # contract the edge below `child`: splice its children up
                spliced = node[:i] + child + node[i + 1 :]
                results.append(rebuild(spliced))
                rec(child, lambda new, i=i, node=node, rebuild=rebuild:
                    rebuild(node[:i] + (new,) + node[i + 1 :]))

        rec(self._node, lambda n: n)
        return [LabelledTree(n) for n in results]

    def to_tree(self) -> Tree:
        """The underlying Tree with leaf labels attached."""

        def rec(node):
            if isinstance(node, int):
                return (LEAF, str(node))
            return (tuple(rec(c) for c in node), None)

        return Tree(rec(self._node))

    @classmethod
    def from_tree(cls, t: Tree) -> "LabelledTree":
        def rec(addr):
            if t.is_leaf(addr):
                label = t.label(addr)
                if label is None:
                    raise DomainError("unlabelled leaf", {"address": str(addr)})
                return int(label)
            return tuple(rec(c) for c in t.children(addr))

        return cls(rec(()))

    @classmethod
    def parse(cls, text) -> "LabelledTree":
        return cls.from_tree(parse_tree(text))

    def validate(self):
        labels = self.labels()
        if labels != list(range(1, len(labels) + 1)):
            raise DomainError("leaf labels must be exactly 1..k", {"labels": labels})

        def rec(node):
            if isinstance(node, int):
                return
            if len(node) < 2:
                raise DomainError(
                    "vertex of valence one or two", {"tree": self.term}
                )
            for c in node:
                rec(c)

        rec(self._node)

    def __eq__(self, other):
        return isinstance(other, LabelledTree) and self._node == other._node

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LabelledTree({self.term!r})"


def _canon_labelled(node):
    if isinstance(node, int):
        return node
    kids = tuple(_canon_labelled(c) for c in node)
    return tuple(sorted(kids, key=_labelled_sort_key))


def _labelled_sort_key(node):
    return _labelled_term(node)


def _labelled_term(node):
    if isinstance(node, int):
        return f"*@{node}"
    return "(" + "".join(_labelled_term(c) for c in node) + ")"


# -- the stratification poset ---------------------------------------------------


@dataclass(frozen=True)
class StratPoset:
    """Leaf-labelled trees with the contraction order.

    ``leq(s, t)`` holds when t is obtained from s by contracting inner edges,
    so the corolla is the unique maximal element and the closure of a stratum
    is its down-set.
    """

    k: int
    elements: tuple
    _index: dict
    _leq: tuple  # bitmask per element: up-set including itself

    @classmethod
    def build(cls, k, trees):
        elements = tuple(sorted(trees, key=lambda t: (-t.n_vertices, t.term)))
        index = {t: i for i, t in enumerate(elements)}
        n = len(elements)
        up = [1 << i for i in range(n)]
        # transitive closure over single contractions, from coarse to fine;
        # elements are sorted with more vertices first, so contraction
        # targets appear later and are already complete when visited
        for i in range(n - 1, -1, -1):
            for target in elements[i].contractions():
                if target in index:
                    up[i] |= up[index[target]]
        return cls(k, elements, index, tuple(up))

    def __len__(self):
        return len(self.elements)

    def index(self, t: LabelledTree):
        try:
            return self._index[t]
        except KeyError:
            raise DomainError("tree not in poset", {"tree": t.term, "k": self.k})

    def leq(self, s: LabelledTree, t: LabelledTree) -> bool:
        """s <= t: t is reachable from s by contracting inner edges."""
        return bool(self._leq[self.index(s)] & (1 << self.index(t)))

    def down_set(self, t: LabelledTree):
        """All s <= t: the strata in the closure of t's stratum."""
        j = self.index(t)
        return [s for i, s in enumerate(self.elements) if self._leq[i] & (1 << j)]

    def covers(self):
        """Pairs (s, t) with t one single contraction above s."""
        out = []
        for s in self.elements:
            for t in sorted(set(s.contractions()), key=lambda x: x.term):
                if t in self._index:
                    out.append((s, t))
        return out

    @property
    def corolla(self):
        tops = [t for t in self.elements if t.is_corolla()]
        if len(tops) != 1:
            raise DomainError("poset does not have a unique corolla")
        return tops[0]

    def to_json(self, ambient=None):
        elements = []
        for t in self.elements:
            entry = {
                "term": t.term,
                "valences": list(t.valences()),
                "inner_edges": t.n_inner_edges,
            }
            if ambient is not None:
                entry["dim"] = stratum_dim(t, ambient)
                entry["codim"] = fm_dimension(ambient, self.k) - entry["dim"]
            elements.append(entry)
        return {
            "k": self.k,
            "count": len(self.elements),
            "elements": elements,
            "covers": [[s.term, t.term] for s, t in self.covers()],
        }

    def to_dot(self, ambient=2):
        lines = ["digraph strata {", "  rankdir=BT;"]
        for i, t in enumerate(self.elements):
            dim = stratum_dim(t, ambient)
            label = f"{t.term}\\ndim {dim} (n={ambient})"
            lines.append(f'  s{i} [label="{label}"];')
        for s, t in self.covers():
            lines.append(f"  s{self.index(s)} -> s{self.index(t)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _labelled_trees_over(labels):
    """All labelled trees (vertices of >= 2 inputs) on a sorted label tuple."""
    if len(labels) == 1:
        return [labels[0]]
    out = []
    for blocks in _set_partitions(labels):
        if len(blocks) < 2:
            continue
        pools = [_labelled_trees_over(tuple(b)) for b in blocks]
        for combo in itertools.product(*pools):
            out.append(tuple(combo))
    return out


def _set_partitions(items):
    """All partitions of a tuple into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in _set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [[first] + partial[i]] + partial[i + 1 :]
        yield [[first]] + partial


def enumerate_psi(k, budget=None) -> StratPoset:
    """The stratification poset at level k: all iso classes of rooted trees
    with leaves labelled 1..k and no vertices of valence one or two."""
    if k < 2:
        raise DomainError("stratification poset needs k >= 2", {"k": k})
    charge("psi enumeration", _psi_count_estimate(k), budget)
    trees = [LabelledTree(node) for node in _labelled_trees_over(tuple(range(1, k + 1)))]
    for t in trees:
        t.validate()
    return StratPoset.build(k, trees)


def _psi_count_estimate(k):
    # series-reduced labelled hierarchies grow super-exponentially; the
    # recurrence below over-counts mildly which is fine for budgeting
    counts = {1: 1}
    for n in range(2, k + 1):
        total = 0
        for parts in range(2, n + 1):
            total += math.comb(n, parts) * (counts.get(n - parts + 1, 1) ** parts)
        counts[n] = max(total, 1)
    return counts.get(k, 1)


def stratum_dim(t: LabelledTree, ambient: int) -> int:
    """Dimension of the stratum indexed by `t` in ambient dimension n:
    the sum over vertices of n*(valence-2) - 1."""
    return sum(ambient * (val - 2) - 1 for val in t.valences())


def fm_dimension(ambient: int, k: int) -> int:
    """Dimension of compactified configuration level k: n(k-1)-1 for k >= 2;
    levels 0 and 1 are one-point spaces."""
    if ambient < 1:
        raise DomainError("ambient dimension must be >= 1", {"n": ambient})
    if k < 0:
        raise DomainError("level must be >= 0", {"k": k})
    if k in (0, 1):
        return 0
    return ambient * (k - 1) - 1


def composition_image(poset: StratPoset, pattern: LabelledTree):
    """Strata in the closed image of the operadic composition landing on
    `pattern`: the down-set of `pattern` in the contraction order."""
    return poset.down_set(pattern)


def boundary_index(n, budget=None) -> StratPoset:
    """The stratification poset at level n without its corolla: the index
    shape of the operadic boundary."""
    if n < 2:
        raise DomainError("boundary index needs n >= 2", {"n": n})
    full = enumerate_psi(n, budget=budget)
    corolla = full.corolla
    rest = [t for t in full.elements if t != corolla]
    return StratPoset.build(n, rest)


# -- coboundary index: a punctured cube ------------------------------------------


@dataclass(frozen=True)
class CoboundIndex:
    """Root-containing proper subtrees of the stump-capped n-corolla, ordered
    by inclusion; order-isomorphic to the proper subsets of {1..n}."""

    n: int
    elements: tuple  # SubtreeInclusion values
    subset_map: dict  # SubtreeInclusion -> frozenset of branch indices (1-based)

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b):
        return a.edge_subset <= b.edge_subset

    def witness_subsets(self):
        return [sorted(self.subset_map[s]) for s in self.elements]

    def is_order_isomorphism(self):
        """Check the subset witness both ways on all pairs."""
        for a, b in itertools.product(self.elements, repeat=2):
            if (a.edge_subset <= b.edge_subset) != (
                self.subset_map[a] <= self.subset_map[b]
            ):
                return False
        subsets = {frozenset(s) for s in map(frozenset, self.subset_map.values())}
        expected = {
            frozenset(c)
            for r in range(self.n)
            for c in itertools.combinations(range(1, self.n + 1), r)
        }
        return subsets == expected

    def to_json(self):
        return {
            "n": self.n,
            "count": len(self.elements),
            "elements": [
                {
                    "induced": s.induced.term,
                    "edges": sorted(".".join(map(str, e)) for e in s.edge_subset),
                    "subset": sorted(self.subset_map[s]),
                }
                for s in self.elements
            ],
        }


def cobound_index(n, budget=None) -> CoboundIndex:
    """The coboundary index poset at level n >= 1."""
    if n < 1:
        raise DomainError("coboundary index needs n >= 1", {"n": n})
    t = reduced_corolla(n)
    full = frozenset(t.edges)
    elements = []
    subset_map = {}
    for s in subtrees(t, budget=budget):
        if not s.contains_root or s.edge_subset == full:
            continue
        elements.append(s)
        subset_map[s] = frozenset(
            addr[0] + 1 for addr in s.edge_subset if addr != ()
        )
    elements.sort(key=lambda s: (len(s.edge_subset), sorted(s.edge_subset)))
    return CoboundIndex(n, tuple(elements), subset_map)


# -- configuration-space coordinates ----------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """k ordered points in R^n; rejects coincident points on construction."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise DomainError("points must be a k x n array")
        object.__setattr__(self, "points", pts)
        k = pts.shape[0]
        for i in range(k):
            for j in range(i + 1, k):
                if np.linalg.norm(pts[i] - pts[j]) == 0.0:
                    raise DomainError(
                        "coincident points", {"i": i + 1, "j": j + 1}
                    )

    @property
    def k(self):
        return self.points.shape[0]

    @property
    def ambient(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class FMCoordinates:
    """Direction vectors a[(i,j)] = (x_i - x_j)/|x_i - x_j| for ordered pairs
    and ratios b[(i,j,k)] = |x_i - x_j|/|x_i - x_k| for ordered triples,
    with the translation/scaling-normalized representative."""

    a: dict
    b: dict
    normalized: Configuration

    def to_json(self):
        def num(x):
            if math.isinf(x):
                return "inf"
            return x

        return {
            "a": {f"{i},{j}": [num(v) for v in vec] for (i, j), vec in sorted(self.a.items())},
            "b": {f"{i},{j},{k}": num(v) for (i, j, k), v in sorted(self.b.items())},
            "normalized": [[num(v) for v in row] for row in self.normalized.points],
        }


def fm_embed(config: Configuration) -> FMCoordinates:
    """Exact embedding coordinates of a configuration, IEEE doubles.

    Also returns the gauge-normalized representative: centroid at the origin
    and maximal pairwise distance one.  Any two configurations differing by a
    translation and a positive scaling share (a, b) coordinates exactly up to
    floating-point rounding.
    """
    pts = config.points
    k = config.k
    a = {}
    b = {}
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            diff = pts[i] - pts[j]
            a[(i + 1, j + 1)] = diff / np.linalg.norm(diff)
    for i, j, l in itertools.permutations(range(k), 3):
        num = np.linalg.norm(pts[i] - pts[j])
        den = np.linalg.norm(pts[i] - pts[l])
        b[(i + 1, j + 1, l + 1)] = math.inf if den == 0.0 else num / den
    centered = pts - pts.mean(axis=0)
    scale = max(
        np.linalg.norm(centered[i] - centered[j])
        for i in range(k)
        for j in range(i + 1, k)
    ) if k >= 2 else 1.0
    normalized = Configuration(centered / scale if scale > 0 else centered)
    return FMCoordinates(a, b, normalized)


def fm_selftest(seed=0, trials=1000, k=4, ambient=3, tol_exact=1e-12, tol_gauge=1e-9):
    """Randomized numeric checks of the embedding coordinates.

    Verifies on random nondegenerate configurations that a[(i,j)] equals
    -a[(j,i)] and b[(i,j,k)] * b[(i,k,j)] equals 1 within `tol_exact`, that
    the coordinates are invariant under random translations and positive
    scalings within `tol_gauge`, and that collision families along a line
    drive the relevant ratio monotonically to zero.
    """
    rng = np.random.default_rng(seed)
    worst_antisym = 0.0
    worst_recip = 0.0
    worst_gauge = 0.0
    for _ in range(trials):
        pts = rng.uniform(-1.0, 1.0, size=(k, ambient))
        config = Configuration(pts)
        coords = fm_embed(config)
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if i == j:
                    continue
                dev = np.max(np.abs(coords.a[(i, j)] + coords.a[(j, i)]))
                worst_antisym = max(worst_antisym, float(dev))
        for (i, j, l), val in coords.b.items():
            worst_recip = max(worst_recip, abs(val * coords.b[(i, l, j)] - 1.0))
        shift = rng.uniform(-10.0, 10.0, size=ambient)
        scale = float(rng.uniform(0.1, 10.0))
        moved = fm_embed(Configuration(pts * scale + shift))
        for key, vec in coords.a.items():
            worst_gauge = max(worst_gauge, float(np.max(np.abs(vec - moved.a[key]))))
        for key, val in coords.b.items():
            worst_gauge = max(worst_gauge, abs(val - moved.b[key]))
    # collision family: second point approaches the first along direction u
    u = np.zeros(ambient)
    u[0] = 1.0
    base = rng.uniform(-1.0, 1.0, size=(k, ambient))
    ratios = []
    directions = []
    for t in (1e-3, 1e-6):
        pts = base.copy()
        pts[1] = pts[0] + t * u
        coords = fm_embed(Configuration(pts))
        ratios.append(coords.b[(1, 2, 3)])
        directions.append(coords.a[(1, 2)])
    collision_ok = (
        ratios[1] < ratios[0]
        and np.allclose(directions[0], -u, atol=tol_exact)
        and np.allclose(directions[1], -u, atol=tol_exact)
    )
    return {
        "trials": trials,
        "worst_antisymmetry": worst_antisym,
        "worst_reciprocal": worst_recip,
        "worst_gauge_invariance": worst_gauge,
        "collision_ratios": ratios,
        "collision_monotone": collision_ok,
        "passed": bool(
            worst_antisym <= tol_exact
            and worst_recip <= tol_exact
            and worst_gauge <= tol_gauge
            and collision_ok
        ),
    }
