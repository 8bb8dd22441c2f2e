"""The category of rooted trees at finite scale.

Every tree ``T`` generates a colored operad whose colors are the edges of
``T`` and whose operations are generated by the vertices.  A morphism of
trees ``S -> T`` is a map of these operads; since the generated operads have
at most one operation per ordered signature, a morphism is determined by a
total edge map, and validity means that every source vertex lands on an
existing operation of the target.  Morphisms need not preserve the root.

This module implements: operation existence with explicit composite
witnesses, morphism validation and composition, brute-force hom-set
enumeration with per-vertex pruning, elementary faces (codimension one in
vertices, classified inner/outer), degeneracies (unary vertex collapses),
the degeneracies-then-faces factorization, subtree inclusions, and the
predicates cutting out the standard subfamilies of trees (bounded valence,
reduced trees, reduced and extended corollas).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, charge
from .trees import (
    LEAF,
    Tree,
    automorphisms,
    canonicalize_node,
    enumerate_trees_by_vertices,
    format_address,
    parse_address,
    parse_tree,
    reduced_corolla,
)

# -- operations of the operad generated by a tree -------------------------


@dataclass(frozen=True)
class OpWitness:
    """A composite operation of the operad generated by a tree.

    ``children`` is None for the identity operation on ``output``.  Otherwise
    there is one child witness per input of the vertex at ``output`` and
    ``perm`` reorders the concatenation of the children's inputs into the
    requested ``inputs`` tuple: ``inputs[i] == concat[perm[i]]``.
    """

    output: tuple
    inputs: tuple
    children: tuple | None = None
    perm: tuple | None = None

    @property
    def is_identity(self):
        return self.children is None

    @property
    def vertices(self):
        """Output edges of all vertices composed into this operation."""
        if self.children is None:
            return frozenset()
        out = {self.output}
        for c in self.children:
            out |= c.vertices
        return frozenset(out)


def operation_exists(t: Tree, output, inputs):
    """Witness for the operation (inputs; output) in the operad of `t`, or
    None when there is no such operation.

    The identity is the single case ``inputs == (output,)``.  Any other
    operation requires a vertex at `output`; the inputs must split into the
    branches above that vertex, each branch must recursively carry an
    operation, and a branch receiving no inputs must be closed (no leaf
    above it).  Repeated input edges never carry an operation.
    """
    inputs = tuple(inputs)
    t.node_at(output)
    for e in inputs:
        t.node_at(e)
    return _op_exists(t, output, inputs)


def _op_exists(t, output, inputs):
    if inputs == (output,):
        return OpWitness(output, inputs)
    if t.is_leaf(output):
        return None
    if len(set(inputs)) != len(inputs):
        return None
    kids = t.children(output)
    buckets = {k: [] for k in kids}
    for e in inputs:
        for k in kids:
            if t.below(k, e):
                buckets[k].append(e)
                break
        else:
            return None
    children = []
    for k in kids:
        w = _op_exists(t, k, tuple(buckets[k]))
        if w is None:
            return None
        children.append(w)
    concat = [e for k in kids for e in buckets[k]]
    perm = tuple(concat.index(e) for e in inputs)
    return OpWitness(output, inputs, tuple(children), perm)


@lru_cache(maxsize=None)
def _input_sets(t: Tree):
    """For every edge `e`: the frozensets I carrying an operation (I; e).

    The identity set {e} is always present.  The empty set is present
    exactly when the branch above `e` is closed: stumps contribute it as the
    empty union over their zero inputs and it propagates downward.
    """
    table = {}

    def rec(e):
        if e in table:
            return table[e]
        sets = {frozenset({e})}
        if not t.is_leaf(e):
            options = [rec(c) for c in t.children(e)]
            for combo in itertools.product(*options):
                sets.add(frozenset().union(*combo))
        result = tuple(sorted(sets, key=lambda s: tuple(sorted(s))))
        table[e] = result
        return result

    for e in t.edges:
        rec(e)
    return table


def max_operation_arity(t: Tree) -> int:
    """Largest arity of any operation in the operad generated by `t`."""
    return max(len(i) for sets in _input_sets(t).values() for i in sets)


# -- morphisms -------------------------------------------------------------


class OmegaMorphism:
    """A validated map of trees, stored as a total edge map.

    Construction raises DomainError when some source vertex does not land on
    an operation of the target; use :func:`validate_morphism` to test first.
    """

    __slots__ = ("source", "target", "_map", "_items")

    def __init__(self, source: Tree, target: Tree, edge_map, _checked=False):
        self.source = source
        self.target = target
        self._map = dict(edge_map)
        if set(self._map) != set(source.edges):
            raise DomainError("edge map is not total on the source tree")
        if not _checked and not validate_morphism(source, target, self._map):
            raise DomainError(
                "edge map is not a morphism of trees",
                {"source": source.term, "target": target.term},
            )
        self._items = tuple(self._map[e] for e in source.edges)

    @property
    def map(self):
        return dict(self._map)

    def __call__(self, addr):
        return self._map[addr]

    def witnesses(self):
        """Operation witness in the target per source vertex."""
        return {
            v: operation_exists(
                self.target,
                self._map[v],
                tuple(self._map[c] for c in self.source.children(v)),
            )
            for v in self.source.vertices
        }

    def is_injective(self):
        return len(set(self._items)) == len(self._items)

    def image(self):
        return frozenset(self._items)

    def is_isomorphism(self):
        """Bijective and child-relation preserving (hence invertible)."""
        if self.source.key != self.target.key:
            return False
        if len(set(self._items)) != len(self.target.edges):
            return False
        for e in self.source.edges:
            if self.source.is_leaf(e):
                if not self.target.is_leaf(self._map[e]):
                    return False
            else:
                img = {self._map[c] for c in self.source.children(e)}
                if img != set(self.target.children(self._map[e])):
                    return False
        return True

    def inverse(self):
        if not self.is_isomorphism():
            raise DomainError("morphism is not an isomorphism")
        inv = {t: s for s, t in self._map.items()}
        return OmegaMorphism(self.target, self.source, inv, _checked=True)

    def then(self, other: "OmegaMorphism") -> "OmegaMorphism":
        """Composite: self followed by `other`."""
        if self.target != other.source:
            raise DomainError("morphisms are not composable")
        composite = {e: other._map[t] for e, t in self._map.items()}
        return OmegaMorphism(self.source, other.target, composite, _checked=True)

    @classmethod
    def identity(cls, t: Tree):
        return cls(t, t, {e: e for e in t.edges}, _checked=True)

    def to_json(self):
        return {
            "source_key": self.source.term,
            "target_key": self.target.term,
            "edge_map": {
                format_address(s): format_address(t) for s, t in sorted(self._map.items())
            },
        }

    @classmethod
    def from_json(cls, payload):
        source = parse_tree(payload["source_key"])
        target = parse_tree(payload["target_key"])
        edge_map = {
            parse_address(k): parse_address(v) for k, v in payload["edge_map"].items()
        }
        return cls(source, target, edge_map)

    def __eq__(self, other):
        return (
            isinstance(other, OmegaMorphism)
            and self.source == other.source
            and self.target == other.target
            and self._items == other._items
        )

    def __hash__(self):
        return hash((self.source, self.target, self._items))

    def __repr__(self):
        pairs = ", ".join(
            f"{format_address(s) or 'r'}>{format_address(t) or 'r'}"
            for s, t in sorted(self._map.items())
        )
        return f"OmegaMorphism({self.source.term} -> {self.target.term}; {pairs})"


def validate_morphism(source: Tree, target: Tree, edge_map) -> bool:
    """True iff every source vertex lands on an operation of the target."""
    if set(edge_map) != set(source.edges):
        return False
    target_edges = set(target.edges)
    if any(v not in target_edges for v in edge_map.values()):
        return False
    sets = _input_sets(target)
    for v in source.vertices:
        sig = [edge_map[c] for c in source.children(v)]
        if len(set(sig)) != len(sig):
            # repeated colors occur only in the identity operation
            return False
        if sig == [edge_map[v]]:
            continue
        if frozenset(sig) not in set(sets[edge_map[v]]):
            return False
    return True


# -- hom sets ---------------------------------------------------------------


def hom_set(source: Tree, target: Tree, budget=None):
    """All morphisms source -> target in a deterministic order.

    The enumeration recurses over the source tree, choosing for every vertex
    an operation of the target with matching arity, so the naive
    ``|edges(target)| ** |edges(source)|`` space is never materialized; that
    proxy is still what the budget bounds and reports.
    """
    charge("hom_set", len(target.edges) ** len(source.edges), budget)
    sets = _input_sets(target)
    by_arity = {}
    for e, ss in sets.items():
        for iset in ss:
            by_arity.setdefault((e, len(iset)), []).append(tuple(sorted(iset)))

    def branch(s_addr, t_addr):
        base = {s_addr: t_addr}
        if source.is_leaf(s_addr):
            return [base]
        kids = source.children(s_addr)
        out = []
        for iset in by_arity.get((t_addr, len(kids)), []):
            for assignment in itertools.permutations(iset):
                subs = []
                for kid, tgt in zip(kids, assignment):
                    sub = branch(kid, tgt)
                    if not sub:
                        break
                    subs.append(sub)
                else:
                    for combo in itertools.product(*subs):
                        m = dict(base)
                        for d in combo:
                            m.update(d)
                        out.append(m)
        return out

    results = []
    for t_addr in target.edges:
        results.extend(branch((), t_addr))
    results.sort(key=lambda m: tuple(m[e] for e in source.edges))
    return [OmegaMorphism(source, target, m, _checked=True) for m in results]


# -- faces and degeneracies --------------------------------------------------


def _finish(raw_node, raw_map):
    """Canonicalize a raw node; returns (tree, {canonical addr: payload})."""
    canon, cmap = canonicalize_node(raw_node)
    tree = Tree(canon, _canonical=True)
    return tree, {cmap[raw]: payload for raw, payload in raw_map.items()}


def contract_inner_edge(t: Tree, edge) -> OmegaMorphism:
    """Contract the inner edge `edge`; returns the face (t/edge) -> t."""
    if edge not in t.inner_edges:
        raise DomainError("not an inner edge", {"address": format_address(edge)})
    parent, j = edge[:-1], edge[-1]

    def rec(addr):
        children, label = t.node_at(addr)
        if children is LEAF:
            return (LEAF, label), {(): addr}
        raw_children = []
        out_map = {(): addr}
        pos = 0
        for i, kid in enumerate(t.children(addr)):
            spliced = t.children(kid) if (addr == parent and i == j) else (kid,)
            for part in spliced:
                node, m = rec(part)
                raw_children.append(node)
                for sub, orig in m.items():
                    out_map[(pos,) + sub] = orig
                pos += 1
        return (tuple(raw_children), label), out_map

    raw, raw_map = rec(())
    tree, addr_map = _finish(raw, raw_map)
    return OmegaMorphism(tree, t, addr_map, _checked=True)


def degeneracy_at(t: Tree, unary) -> OmegaMorphism:
    """Collapse the unary vertex at `unary`, identifying its input and output
    edges; returns the degeneracy t -> (collapsed tree)."""
    if t.is_leaf(unary) or len(t.children(unary)) != 1:
        raise DomainError("not a unary vertex", {"address": format_address(unary)})
    child = unary + (0,)

    def rec(addr):
        children, label = t.node_at(addr)
        if addr == unary:
            (kids, sub_label), m = rec(child)
            merged = dict(m)
            merged[()] = unary
            return (kids, label if label is not None else sub_label), merged
        if children is LEAF:
            return (LEAF, label), {(): addr}
        raw_children = []
        out_map = {(): addr}
        for i, kid in enumerate(t.children(addr)):
            node, m = rec(kid)
            raw_children.append(node)
            for sub, orig in m.items():
                out_map[(i,) + sub] = orig
        return (tuple(raw_children), label), out_map

    raw, raw_map = rec(())
    tree, addr_map = _finish(raw, raw_map)
    inverse = {orig: new for new, orig in addr_map.items()}
    sigma = {e: inverse[unary if e == child else e] for e in t.edges}
    return OmegaMorphism(t, tree, sigma, _checked=True)


def degeneracies(t: Tree):
    """One degeneracy per unary vertex, in address order."""
    return [
        degeneracy_at(t, v)
        for v in t.vertices
        if len(t.children(v)) == 1
    ]


@dataclass(frozen=True)
class Face:
    """An elementary face of a tree: a valid edge-injective morphism into it
    whose source has exactly one vertex less.  Inner faces are the inner-edge
    contractions; everything else is outer."""

    morphism: OmegaMorphism
    kind: str
    contracted: tuple | None = None

    def to_json(self):
        data = self.morphism.to_json()
        data["kind"] = self.kind
        if self.contracted is not None:
            data["contracted"] = format_address(self.contracted)
        return data


def _orbit_key(m: OmegaMorphism):
    """Canonical representative of m under precomposition with Aut(source)."""
    edges = m.source.edges
    return min(tuple(m(alpha[e]) for e in edges) for alpha in automorphisms(m.source))


_FACES_CACHE = {}


def elementary_faces(t: Tree, budget=None):
    """All elementary faces of `t`, one per (source iso-class, image), sorted
    deterministically and classified inner or outer."""
    if t in _FACES_CACHE:
        return _FACES_CACHE[t]
    n_v = len(t.vertices)
    if n_v == 0:
        _FACES_CACHE[t] = []
        return []
    arity = max_operation_arity(t)
    found = {}
    for s in enumerate_trees_by_vertices(n_v - 1, arity, budget=budget):
        if len(s.vertices) != n_v - 1 or len(s.edges) > len(t.edges):
            continue
        for m in hom_set(s, t, budget=budget):
            if m.is_injective():
                found.setdefault((s.key, _orbit_key(m)), m)
    contractions = {}
    for e in t.inner_edges:
        c = contract_inner_edge(t, e)
        contractions[(c.source.key, _orbit_key(c))] = e
    faces = []
    for okey in sorted(found):
        m = found[okey]
        e = contractions.get(okey)
        faces.append(Face(m, "inner" if e is not None else "outer", e))
    _FACES_CACHE[t] = faces
    return faces


# -- factorization -----------------------------------------------------------


@dataclass
class Factorization:
    """m = faces[-1] o ... o faces[0] o isomorphism o degeneracies[-1] o ...
    o degeneracies[0]; all lists in order of application."""

    degeneracies: list
    isomorphism: OmegaMorphism
    faces: list

    def composite(self) -> OmegaMorphism:
        chain = self.degeneracies + [self.isomorphism] + [f.morphism for f in self.faces]
        out = chain[0]
        for step in chain[1:]:
            out = out.then(step)
        return out

    def to_json(self):
        return {
            "degeneracies": [d.to_json() for d in self.degeneracies],
            "isomorphism": self.isomorphism.to_json(),
            "faces": [f.to_json() for f in self.faces],
        }


def factorize(m: OmegaMorphism, budget=None) -> Factorization:
    """Factor `m` as degeneracies, then an isomorphism, then elementary
    faces; the composite of the returned witnesses equals `m` exactly."""
    degs = []
    current = m
    while True:
        collapsible = None
        for v in current.source.vertices:
            kids = current.source.children(v)
            if len(kids) == 1 and current(kids[0]) == current(v):
                collapsible = v
                break
        if collapsible is None:
            break
        sigma = degeneracy_at(current.source, collapsible)
        fibers = {}
        for e in current.source.edges:
            fibers.setdefault(sigma(e), set()).add(current(e))
        new_map = {}
        for e2, values in fibers.items():
            if len(values) != 1:
                raise DomainError("inconsistent collapse in factorization")
            new_map[e2] = values.pop()
        degs.append(sigma)
        current = OmegaMorphism(sigma.target, m.target, new_map, _checked=True)
    if not current.is_injective():
        raise DomainError(
            "valid morphism failed to become injective after degeneracies",
            {"map": current.to_json()},
        )
    peeled = _peel(current, budget)
    if peeled is None:
        raise DomainError("face factorization search failed", {"map": current.to_json()})
    chain, iso = peeled
    fact = Factorization(degs, iso, chain)
    if fact.composite() != m:
        raise DomainError("factorization composite mismatch")
    return fact


def _peel(g: OmegaMorphism, budget):
    if g.is_isomorphism():
        return [], g
    g_image = g.image()
    for face in elementary_faces(g.target, budget=budget):
        delta = face.morphism
        if not g_image <= delta.image():
            continue
        inv = {t_addr: s_addr for s_addr, t_addr in delta.map.items()}
        lift_map = {e: inv[g(e)] for e in g.source.edges}
        if not validate_morphism(g.source, delta.source, lift_map):
            continue
        lift = OmegaMorphism(g.source, delta.source, lift_map, _checked=True)
        sub = _peel(lift, budget)
        if sub is not None:
            chain, iso = sub
            return chain + [face], iso
    return None


# -- subtrees ----------------------------------------------------------------


@dataclass(frozen=True)
class SubtreeInclusion:
    """A connected edge subset whose induced tree includes validly.

    Every included edge that carries a vertex in the ambient tree keeps that
    vertex, restricted to the included inputs; validity of the inclusion says
    exactly that every omitted branch at such a vertex is closed.
    """

    ambient: Tree
    edge_subset: frozenset
    induced: Tree
    inclusion: OmegaMorphism

    @property
    def contains_root(self):
        return () in self.edge_subset

    def to_json(self):
        return {
            "edges": sorted(format_address(e) for e in self.edge_subset),
            "induced": self.induced.term,
            "inclusion": self.inclusion.to_json(),
        }


def _induced_inclusion(t: Tree, subset):
    """Inclusion morphism of the induced tree, or None when it is invalid."""
    base = min(subset, key=len)

    def build(e):
        children, label = t.node_at(e)
        if children is LEAF:
            return (LEAF, label), {(): e}
        raw_children = []
        out_map = {(): e}
        pos = 0
        for c in t.children(e):
            if c not in subset:
                continue
            node, m = build(c)
            raw_children.append(node)
            for sub, orig in m.items():
                out_map[(pos,) + sub] = orig
            pos += 1
        return (tuple(raw_children), label), out_map

    raw, raw_map = build(base)
    tree, addr_map = _finish(raw, raw_map)
    if not validate_morphism(tree, t, addr_map):
        return None
    return OmegaMorphism(tree, t, addr_map, _checked=True)


def subtrees(t: Tree, budget=None):
    """All subtree inclusions of `t`, sorted by size then edge set."""
    charge("subtrees", 2 ** len(t.edges), budget)

    def rooted(e):
        if t.is_leaf(e):
            return [frozenset({e})]
        options = [[None] + rooted(c) for c in t.children(e)]
        out = []
        for combo in itertools.product(*options):
            chosen = [x for x in combo if x is not None]
            out.append(frozenset({e}).union(*chosen) if chosen else frozenset({e}))
        return out

    results = []
    for e in t.edges:
        for subset in rooted(e):
            incl = _induced_inclusion(t, subset)
            if incl is not None:
                results.append(SubtreeInclusion(t, subset, incl.source, incl))
    results.sort(key=lambda s: (len(s.edge_subset), tuple(sorted(s.edge_subset))))
    return results


# -- classification ----------------------------------------------------------


def in_omega_level(t: Tree, n: int) -> bool:
    """No vertex has more than n inputs (valence at most n+1)."""
    return all(len(t.children(v)) <= n for v in t.vertices)


def is_reduced(t: Tree) -> bool:
    """No leaves; every maximal edge ends in a stump."""
    return len(t.leaves) == 0


def is_reduced_corolla(t: Tree, n: int) -> bool:
    return t.key == reduced_corolla(n).key


def shorten(t: Tree):
    """Collapse every unary vertex; returns (tree, degeneracy chain applied
    in order).  Idempotent on trees without unary vertices."""
    chain = []
    current = t
    while True:
        unary = [v for v in current.vertices if len(current.children(v)) == 1]
        if not unary:
            return current, chain
        sigma = degeneracy_at(current, unary[0])
        chain.append(sigma)
        current = sigma.target


def is_extended_corolla(t: Tree, n: int):
    """(flag, degeneracy chain to the reduced n-corolla when flag is True).

    Extended n-corollas are the reduced trees connected to the reduced
    n-corolla by a chain of degeneracies, i.e. obtained from it by inserting
    unary vertices; the reduced n-corolla itself counts with an empty chain.
    """
    if not is_reduced(t):
        return False, None
    target_key = reduced_corolla(n).key
    chain = []
    current = t
    while True:
        if current.key == target_key:
            return True, chain
        unary = [v for v in current.vertices if len(current.children(v)) == 1]
        if n == 1 and len(unary) <= 1:
            return False, None
        if not unary:
            return False, None
        sigma = degeneracy_at(current, unary[0])
        chain.append(sigma)
        current = sigma.target


def classify(t: Tree):
    """Summary report of the subfamily predicates for one tree."""
    from .trees import tree_stats

    stats = tree_stats(t)
    reduced_corolla_n = None
    for k in range(0, stats.max_inputs + 1):
        if is_reduced_corolla(t, k):
            reduced_corolla_n = k
            break
    extended = []
    for k in range(0, stats.max_inputs + 1):
        flag, chain = is_extended_corolla(t, k)
        if flag:
            extended.append({"n": k, "chain_length": len(chain)})
    return {
        "term": t.term,
        "key": t.key,
        "n_edges": stats.n_edges,
        "n_vertices": stats.n_vertices,
        "n_inner_edges": stats.n_inner_edges,
        "valences": list(stats.valences),
        "aut_order": stats.aut_order,
        "is_reduced": stats.is_reduced,
        "min_omega_level": stats.max_inputs,
        "reduced_corolla": reduced_corolla_n,
        "extended_corolla": extended,
    }
