"""Canonical rooted trees.

A tree is a finite edge poset with one minimal edge (the root) and a linear
order below every edge.  Maximal edges are either *leaves* or carry a nullary
vertex (a *stump*); the two are distinct pieces of data.  Every non-leaf edge
``x`` carries a vertex whose inputs are the edges directly above ``x``.

Trees are written in a small term language::

    tree := "*" | "(" tree* ")"

``*`` is a leaf edge, ``( ... )`` is an edge capped by a vertex whose inputs
are the listed subtrees, so ``()`` is a stump.  Any edge may carry an optional
``@name`` suffix.  The outermost term is the root edge.

Trees are stored canonically: the children of every vertex are sorted by the
recursive lexicographic order of their unlabelled sub-terms, with ``*``
ordered before ``(``.  Two trees are isomorphic iff their ``key`` strings are
equal.  Edges are addressed by their path of child indices in canonical
order; the root is the empty path ``()``.

All values are immutable after construction and all operations are pure
functions.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, ParseError, charge

# Nodes are pairs (children, label): children is None for a leaf edge,
# otherwise a tuple of child nodes (empty tuple = stump).
LEAF = None

# ")" < "*" < "(" so that sorting serialized sub-terms puts leaves first.
_SORT_TRANS = str.maketrans("*()", "120")

_NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+")


def _node_term(node, with_labels=True):
    children, label = node
    suffix = f"@{label}" if (with_labels and label is not None) else ""
    if children is LEAF:
        return "*" + suffix
    return "(" + "".join(_node_term(c, with_labels) for c in children) + ")" + suffix


def _node_key(node):
    return _node_term(node, with_labels=False)


def _sort_key(node):
    # Unlabelled key decides the canonical order; the labelled term only
    # breaks ties between isomorphic siblings so addressing is deterministic.
    return (_node_key(node).translate(_SORT_TRANS), _node_term(node))


def canonicalize_node(node):
    """Return (canonical node, map old address -> new address)."""
    children, label = node
    if children is LEAF:
        return node, {(): ()}
    canon = []
    for i, child in enumerate(children):
        cnode, cmap = canonicalize_node(child)
        canon.append((i, cnode, cmap))
    canon.sort(key=lambda item: _sort_key(item[1]))
    mapping = {(): ()}
    new_children = []
    for new_i, (old_i, cnode, cmap) in enumerate(canon):
        new_children.append(cnode)
        for old_sub, new_sub in cmap.items():
            mapping[(old_i,) + old_sub] = (new_i,) + new_sub
    return (tuple(new_children), label), mapping


class Tree:
    """A canonical rooted tree.  Hashable; equality includes edge labels."""

    __slots__ = ("_node", "_nodes", "_edges", "_key", "_hash", "_leaves", "_vertices")

    def __init__(self, node, _canonical=False):
        if not _canonical:
            node, _ = canonicalize_node(node)
        self._node = node
        nodes = {}
        _collect(node, (), nodes)
        self._nodes = nodes
        self._edges = tuple(sorted(nodes))
        self._key = _node_key(node)
        self._hash = hash(node)
        self._leaves = tuple(a for a in self._edges if nodes[a][0] is LEAF)
        self._vertices = tuple(a for a in self._edges if nodes[a][0] is not LEAF)

    # -- basic structure -------------------------------------------------

    @property
    def key(self):
        """Canonical unlabelled term; equal keys == isomorphic trees."""
        return self._key

    @property
    def term(self):
        """Canonical term including any ``@name`` labels."""
        return _node_term(self._node)

    @property
    def edges(self):
        """All edge addresses in lexicographic (DFS preorder) order."""
        return self._edges

    @property
    def root(self):
        return ()

    def node_at(self, addr):
        try:
            return self._nodes[addr]
        except KeyError:
            raise DomainError("unknown edge", {"address": format_address(addr)})

    def is_leaf(self, addr):
        return self.node_at(addr)[0] is LEAF

    def has_vertex(self, addr):
        return self.node_at(addr)[0] is not LEAF

    def children(self, addr):
        """Input edges of the vertex carried by `addr` (empty for stumps)."""
        children, _ = self.node_at(addr)
        if children is LEAF:
            raise DomainError("leaf edge has no vertex", {"address": format_address(addr)})
        return tuple(addr + (i,) for i in range(len(children)))

    def parent(self, addr):
        return addr[:-1] if addr else None

    def label(self, addr):
        return self.node_at(addr)[1]

    @property
    def labels(self):
        return {a: n[1] for a, n in self._nodes.items() if n[1] is not None}

    @property
    def leaves(self):
        return self._leaves

    @property
    def vertices(self):
        """Addresses of edges carrying a vertex (one vertex per such edge)."""
        return self._vertices

    @property
    def inner_edges(self):
        """Edges that are neither a leaf nor the root."""
        return tuple(a for a in self._edges if a != () and not self.is_leaf(a))

    # -- order structure -------------------------------------------------

    def below(self, a, b):
        """True when edge `a` lies on the path from the root to `b` (a <= b)."""
        return b[: len(a)] == a

    def edges_above(self, addr):
        return tuple(e for e in self._edges if self.below(addr, e))

    def branch_is_closed(self, addr):
        """No leaf above `addr` (the branch ends entirely in stumps)."""
        return not any(self.is_leaf(e) for e in self.edges_above(addr))

    def subtree_at(self, addr):
        """The full branch hanging at `addr` as a Tree of its own."""
        return Tree(self.node_at(addr), _canonical=True)

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Tree) and self._node == other._node

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tree({self.term!r})"


def _collect(node, addr, out):
    out[addr] = node
    children, _ = node
    if children is not LEAF:
        for i, child in enumerate(children):
            _collect(child, addr + (i,), out)


# -- construction helpers -----------------------------------------------


@lru_cache(maxsize=None)
def leaf_tree():
    """The one-edge tree whose edge is a leaf (no vertices)."""
    return Tree((LEAF, None), _canonical=True)


@lru_cache(maxsize=None)
def stump_tree():
    """The one-edge tree capped by a nullary vertex."""
    return Tree(((), None), _canonical=True)


@lru_cache(maxsize=None)
def corolla(n):
    """One vertex, n leaf inputs and a root edge."""
    return Tree((tuple((LEAF, None) for _ in range(n)), None), _canonical=True)


@lru_cache(maxsize=None)
def reduced_corolla(n):
    """One vertex of n inputs, each input capped by a stump; no leaves."""
    return Tree((tuple(((), None) for _ in range(n)), None), _canonical=True)


def linear_tree(n_unary, closed=False):
    """A chain of `n_unary` unary vertices; `closed` caps the top edge with a
    stump instead of leaving it a leaf."""
    node = ((), None) if closed else (LEAF, None)
    for _ in range(n_unary):
        node = ((node,), None)
    return Tree(node, _canonical=True)


# -- parsing -------------------------------------------------------------


def parse_tree(text: str) -> Tree:
    """Parse a tree term; whitespace between tokens is ignored.

    Raises ParseError with a character position on malformed input and on
    duplicate ``@name`` labels.
    """
    pos = 0
    n = len(text)
    seen_names = set()

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_label():
        nonlocal pos
        if pos < n and text[pos] == "@":
            start = pos
            pos += 1
            m = _NAME_RE.match(text, pos)
            if not m:
                raise ParseError("expected name after '@'", start)
            name = m.group(0)
            pos = m.end()
            if name in seen_names:
                raise ParseError(f"duplicate edge name '@{name}'", start)
            seen_names.add(name)
            return name
        return None

    def parse_edge():
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise ParseError("unexpected end of input", pos)
        ch = text[pos]
        if ch == "*":
            pos += 1
            return (LEAF, parse_label())
        if ch == "(":
            pos += 1
            children = []
            while True:
                skip_ws()
                if pos >= n:
                    raise ParseError("unclosed '('", pos)
                if text[pos] == ")":
                    pos += 1
                    break
                children.append(parse_edge())
            return (tuple(children), parse_label())
        raise ParseError(f"unexpected character {ch!r}", pos)

    node = parse_edge()
    skip_ws()
    if pos != n:
        raise ParseError("trailing input after tree term", pos)
    return Tree(node)


def canonical_form(t: Tree) -> Tree:
    """Idempotent; Tree values are canonical on construction already."""
    return Tree(t._node)


def format_address(addr):
    return ".".join(str(i) for i in addr)


def parse_address(text):
    if text == "":
        return ()
    try:
        return tuple(int(p) for p in text.split("."))
    except ValueError:
        raise DomainError("malformed edge address", {"address": text})


# -- statistics and automorphisms ----------------------------------------


@dataclass(frozen=True)
class TreeStats:
    n_edges: int
    n_vertices: int
    n_inner_edges: int
    valences: tuple
    max_inputs: int
    is_reduced: bool
    aut_order: int


def tree_stats(t: Tree) -> TreeStats:
    valences = tuple(sorted(len(t.children(v)) + 1 for v in t.vertices))
    return TreeStats(
        n_edges=len(t.edges),
        n_vertices=len(t.vertices),
        n_inner_edges=len(t.inner_edges),
        valences=valences,
        max_inputs=max((len(t.children(v)) for v in t.vertices), default=0),
        is_reduced=len(t.leaves) == 0,
        aut_order=aut_order(t),
    )


def aut_order(t: Tree) -> int:
    """Order of the automorphism group of the unlabelled tree.

    Every automorphism independently permutes identical child branches at
    each vertex, so the order is the product over vertices of factorials of
    the multiplicities of equal child sub-keys.
    """
    total = 1
    for v in t.vertices:
        keys = [_node_key(t.node_at(c)) for c in t.children(v)]
        for key in set(keys):
            total *= math.factorial(keys.count(key))
    return total


def automorphisms(t: Tree):
    """All automorphisms of `t` as address maps (old -> new); ignores labels."""

    def node_maps(node, addr):
        children, _ = node
        if children is LEAF:
            return [{addr: addr}]
        groups = {}
        for i, child in enumerate(children):
            groups.setdefault(_node_key(child), []).append(i)
        child_maps = [node_maps(child, addr + (i,)) for i, child in enumerate(children)]
        group_perms = [
            [dict(zip(idxs, perm)) for perm in itertools.permutations(idxs)]
            for idxs in groups.values()
        ]
        results = []
        for combo in itertools.product(*group_perms):
            slot = {}
            for part in combo:
                slot.update(part)
            # slot[i] = j: child i moves to position j (legal because equal
            # keys mean identical unlabelled branches).
            for sub_combo in itertools.product(*child_maps):
                mapping = {addr: addr}
                for i, submap in enumerate(sub_combo):
                    j = slot[i]
                    for old, new in submap.items():
                        mapping[old] = addr + (j,) + new[len(addr) + 1 :]
                results.append(mapping)
        return results

    return node_maps(t._node, ())


# -- grafting ------------------------------------------------------------


def graft(base: Tree, leaf_addr, scion: Tree) -> Tree:
    """Replace the leaf edge at `leaf_addr` of `base` by `scion`'s root edge.

    The scion's root edge is identified with the named leaf; a label on the
    scion root wins over a label on the replaced leaf.  Grafting the one-edge
    leaf tree is the identity.
    """
    children, base_label = base.node_at(leaf_addr)
    if children is not LEAF:
        raise DomainError("graft target is not a leaf", {"address": format_address(leaf_addr)})
    s_children, s_label = scion._node
    replacement = (s_children, s_label if s_label is not None else base_label)

    def rebuild(node, addr):
        if addr == leaf_addr:
            return replacement
        kids, label = node
        if kids is LEAF:
            return node
        return (tuple(rebuild(c, addr + (i,)) for i, c in enumerate(kids)), label)

    node = rebuild(base._node, ())
    names = list(_all_labels(node))
    dupes = {x for x in names if names.count(x) > 1}
    if dupes:
        raise DomainError("duplicate edge name after graft", {"names": sorted(dupes)})
    return Tree(node)


def _all_labels(node):
    children, label = node
    if label is not None:
        yield label
    if children is not LEAF:
        for c in children:
            yield from _all_labels(c)


# -- enumeration ---------------------------------------------------------


def _size_multisets(total, parts, min_size):
    """Multisets of `parts` sizes >= min_size summing to `total`, yielded as
    ((size, multiplicity), ...) with sizes strictly decreasing."""

    def rec(remaining, parts_left, max_size, acc):
        if parts_left == 0:
            if remaining == 0:
                yield tuple(acc)
            return
        for size in range(max_size, min_size - 1, -1):
            for mult in range(1, parts_left + 1):
                if size * mult > remaining:
                    break
                yield from rec(remaining - size * mult, parts_left - mult, size - 1, acc + [(size, mult)])

    upper = total if min_size > 0 else max(total, 0)
    yield from rec(total, parts, upper, [])


@lru_cache(maxsize=None)
def _shapes_by_edges(n_edges, max_inputs, reduced_only):
    """Canonical unlabelled shapes with exactly `n_edges` edges."""
    if n_edges < 1:
        return ()
    if n_edges == 1:
        base = [((), None)]
        if not reduced_only:
            base.insert(0, (LEAF, None))
        return tuple(base)
    shapes = {}
    for k in range(1, max_inputs + 1):
        for sizes in _size_multisets(n_edges - 1, k, 1):
            pools = [
                list(
                    itertools.combinations_with_replacement(
                        _shapes_by_edges(size, max_inputs, reduced_only), mult
                    )
                )
                for size, mult in sizes
            ]
            for combo in itertools.product(*pools):
                children = tuple(c for group in combo for c in group)
                node, _ = canonicalize_node((children, None))
                shapes.setdefault(_node_key(node), node)
    return tuple(shapes[key] for key in sorted(shapes))


@lru_cache(maxsize=None)
def _shapes_by_vertices(n_vertices, max_inputs, reduced_only):
    """Canonical unlabelled shapes with exactly `n_vertices` vertices."""
    if n_vertices == 0:
        return () if reduced_only else ((LEAF, None),)
    shapes = {}
    for k in range(0, max_inputs + 1):
        if k == 0:
            if n_vertices == 1:
                node = ((), None)
                shapes.setdefault(_node_key(node), node)
            continue
        for sizes in _size_multisets(n_vertices - 1, k, 0):
            pools = [
                list(
                    itertools.combinations_with_replacement(
                        _shapes_by_vertices(size, max_inputs, reduced_only), mult
                    )
                )
                for size, mult in sizes
            ]
            for combo in itertools.product(*pools):
                children = tuple(c for group in combo for c in group)
                node, _ = canonicalize_node((children, None))
                shapes.setdefault(_node_key(node), node)
    return tuple(shapes[key] for key in sorted(shapes))


def enumerate_trees(max_edges, max_inputs, reduced_only=False, budget=None):
    """One canonical representative per isomorphism class of trees with at
    most `max_edges` edges and every vertex having at most `max_inputs`
    inputs.  With `reduced_only`, only trees without any leaves."""
    if max_edges < 1:
        raise DomainError("max_edges must be >= 1", {"max_edges": max_edges})
    charge("enumerate_trees", 2 ** min(max_edges * 2, 64), budget)
    out = []
    for e in range(1, max_edges + 1):
        for node in _shapes_by_edges(e, max_inputs, bool(reduced_only)):
            out.append(Tree(node, _canonical=True))
    return out


def enumerate_trees_by_vertices(max_vertices, max_inputs, reduced_only=False, budget=None):
    """Like enumerate_trees but bounded by vertex count instead of edges."""
    if max_vertices < 0:
        raise DomainError("max_vertices must be >= 0", {"max_vertices": max_vertices})
    charge("enumerate_trees_by_vertices", (max_inputs + 2) ** min(2 * max_vertices + 1, 24), budget)
    out = []
    for v in range(0, max_vertices + 1):
        for node in _shapes_by_vertices(v, max_inputs, bool(reduced_only)):
            out.append(Tree(node, _canonical=True))
    return out
