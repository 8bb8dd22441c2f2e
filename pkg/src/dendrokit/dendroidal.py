"""Truncated dendroidal sets: presheaves on a finite batch of trees.

A dendroidal set assigns a finite value set to every tree in its carrier and
a restriction function to every tree map, contravariantly.  Two storage
strategies are provided:

- :class:`NerveDendroidalSet` is the nerve of a finite operad: the value at a
  tree is the set of operad maps out of the tree's operad (a color per edge
  plus an operation per vertex), and restrictions are computed structurally
  by evaluating operation witnesses.  Values exist lazily for every tree
  within the operad's arity bound.
- :class:`TableDendroidalSet` stores explicit value sets and generator
  actions (elementary faces, degeneracies, automorphisms); restrictions along
  arbitrary maps are derived by factorization.

On top of these sit the Segal-core machinery (families of corolla values
agreeing on shared edges), the exact strict-Segal bijection check, and the
reconstruction of an operad from any strict-Segal dendroidal set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DomainError, charge, resolve_budget
from .morphisms import (
    OmegaMorphism,
    degeneracies,
    degeneracy_at,
    elementary_faces,
    factorize,
    operation_exists,
)
from .operads import FiniteOperad, Signature, eval_witness
from .trees import (
    Tree,
    automorphisms,
    canonicalize_node,
    corolla,
    leaf_tree,
    parse_tree,
)

ETA = leaf_tree()


# -- standard small morphisms -------------------------------------------------


def edge_inclusion(t: Tree, edge) -> OmegaMorphism:
    """The map from the one-edge tree picking out `edge` of `t`."""
    return OmegaMorphism(ETA, t, {(): edge}, _checked=True)


def subcorolla_inclusion(t: Tree, vertex) -> OmegaMorphism:
    """The corolla around `vertex` included into `t`: root to the vertex's
    output edge, leaf i to its i-th input edge."""
    kids = t.children(vertex)
    source = corolla(len(kids))
    edge_map = {(): vertex}
    for i, c in enumerate(kids):
        edge_map[(i,)] = c
    return OmegaMorphism(source, t, edge_map, _checked=True)


def automorphism_of(t: Tree, addr_map) -> OmegaMorphism:
    return OmegaMorphism(t, t, addr_map, _checked=True)


def leaf_relabel_automorphism(n, perm) -> OmegaMorphism:
    """The corolla automorphism sending leaf i to leaf perm[i]."""
    t = corolla(n)
    edge_map = {(): ()}
    for i in range(n):
        edge_map[(i,)] = (perm[i],)
    return OmegaMorphism(t, t, edge_map, _checked=True)


def grafted_two_level_tree(n, child_arities):
    """The tree with an n-input root vertex whose i-th input carries a vertex
    with child_arities[i] leaf inputs.  Returns (tree, slot address map)
    where slots are addressed ('root',), ('slot', j), ('leaf', j, i)."""
    raw_children = []
    for k in child_arities:
        raw_children.append((tuple((None, None) for _ in range(k)), None))
    raw = (tuple(raw_children), None)
    canon, cmap = canonicalize_node(raw)
    tree = Tree(canon, _canonical=True)
    slots = {("root",): ()}
    for j in range(n):
        slots[("slot", j)] = cmap[(j,)]
        for i in range(child_arities[j]):
            slots[("leaf", j, i)] = cmap[(j, i)]
    return tree, slots


# -- nerve ---------------------------------------------------------------------


class NerveDendroidalSet:
    """The dendroidal nerve of a finite operad.

    Elements at a tree T are pairs (edge colors, vertex operations) indexed
    by T's canonical edge and vertex orders.  The value at any tree within
    the operad's arity bound is available; `trees` only fixes the default
    carrier used by checks.
    """

    def __init__(self, operad: FiniteOperad, trees=None, budget=None):
        self.operad = operad
        self.trees = tuple(trees) if trees is not None else None
        self.budget = budget
        self._cache = {}

    @property
    def name(self):
        return f"nerve({self.operad.name})"

    def contains(self, t: Tree):
        if self.operad.arity_bound is not None:
            max_in = max((len(t.children(v)) for v in t.vertices), default=0)
            if max_in > self.operad.arity_bound:
                return False
        return self.trees is None or t in self.trees

    def values(self, t: Tree):
        if t in self._cache:
            return self._cache[t]
        P = self.operad
        if P.arity_bound is not None:
            max_in = max((len(t.children(v)) for v in t.vertices), default=0)
            if max_in > P.arity_bound:
                raise DomainError(
                    "tree exceeds operad arity bound",
                    {"tree": t.term, "bound": P.arity_bound},
                )
        colorings = self._colorings(t)
        out = []
        total = 0
        for coloring in colorings:
            pools = []
            for v in t.vertices:
                sig_inputs = tuple(coloring[c] for c in t.children(v))
                pools.append(P.hom(sig_inputs, coloring[v]))
            size = 1
            for p in pools:
                size *= len(p)
            total += size
            charge("nerve values", total, self.budget)
            colors = tuple(coloring[e] for e in t.edges)
            for decs in itertools.product(*pools):
                out.append((colors, decs))
        result = tuple(out)
        self._cache[t] = result
        return result

    def _colorings(self, t: Tree):
        P = self.operad
        if len(P.colors) == 1:
            return [{e: P.colors[0] for e in t.edges}]
        # assign colors edge by edge, pruning on fully colored vertices
        colorings = [{}]
        for e in t.edges:
            new = []
            for partial in colorings:
                for c in P.colors:
                    cand = dict(partial)
                    cand[e] = c
                    ok = True
                    nearby = [] if t.is_leaf(e) else [e]
                    if e:
                        nearby.append(e[:-1])
                    for v in nearby:
                        kids = t.children(v)
                        if all(k in cand for k in kids) and v in cand:
                            if not P.hom(tuple(cand[k] for k in kids), cand[v]):
                                ok = False
                                break
                    if ok:
                        new.append(cand)
            colorings = new
            charge("nerve colorings", len(colorings), self.budget)
        return colorings

    def restrict(self, m: OmegaMorphism):
        """The contravariant action: a function values(target) -> values(source)."""
        source, target = m.source, m.target
        edge_pos = {e: i for i, e in enumerate(target.edges)}
        vertex_pos = {v: i for i, v in enumerate(target.vertices)}
        color_plan = tuple(edge_pos[m(e)] for e in source.edges)
        # per source vertex: either a direct pick of one target decoration
        # (witness is a single vertex with identity inputs in order) or a
        # full witness evaluation
        plans = []
        for v in source.vertices:
            w = operation_exists(target, m(v), tuple(m(c) for c in source.children(v)))
            if (
                not w.is_identity
                and all(c.is_identity for c in w.children)
                and w.perm == tuple(range(len(w.perm)))
            ):
                plans.append(vertex_pos[w.output])
            else:
                plans.append(w)
        P = self.operad
        target_edges = target.edges
        target_vertices = target.vertices

        def act(element):
            colors, decs = element
            new_colors = tuple(colors[i] for i in color_plan)
            new_decs = []
            color_of = None
            for plan in plans:
                if type(plan) is int:
                    new_decs.append(decs[plan])
                    continue
                if color_of is None:
                    color_of = dict(zip(target_edges, colors))
                    dec_of = dict(zip(target_vertices, decs))
                if plan.is_identity:
                    new_decs.append(P.identity(color_of[plan.output]))
                else:
                    el, _sig = eval_witness(plan, target, color_of, dec_of, P)
                    new_decs.append(el)
            return (new_colors, tuple(new_decs))

        return act

    def element_str(self, t: Tree, element):
        colors, decs = element
        parts = []
        if len(self.operad.colors) > 1:
            parts.append("|".join(str(c) for c in colors))
        parts.extend(self.operad.element_str(d) for d in decs)
        return ";".join(parts) if parts else "*"


def nerve(operad: FiniteOperad, trees=None, budget=None) -> NerveDendroidalSet:
    """The dendroidal nerve of `operad`, optionally pinned to a carrier."""
    return NerveDendroidalSet(operad, trees=trees, budget=budget)


# -- explicit tables -------------------------------------------------------------


def morphism_key(m: OmegaMorphism):
    return (
        m.source.key,
        m.target.key,
        tuple(sorted((s, t) for s, t in m.map.items())),
    )


class TableDendroidalSet:
    """A dendroidal set with explicit finite value sets and generator actions.

    Actions must be stored for the elementary faces, degeneracies and
    automorphisms among carrier trees that the presheaf intends to support;
    restriction along any other map is derived by factorization.  Missing
    actions raise DomainError, which the Segal checker reports as failures.
    """

    def __init__(self, trees, values, actions, name="table"):
        self.trees = tuple(trees)
        self._values = {t: tuple(v) for t, v in values.items()}
        self._actions = dict(actions)
        self.name = name

    def contains(self, t: Tree):
        return t in self.trees

    def values(self, t: Tree):
        try:
            return self._values[t]
        except KeyError:
            raise DomainError("tree not in carrier", {"tree": t.term})

    def restrict(self, m: OmegaMorphism):
        key = morphism_key(m)
        if key in self._actions:
            table = self._actions[key]
            return lambda el: table[el]
        if m.source == m.target and m.is_isomorphism() and all(
            m(e) == e for e in m.source.edges
        ):
            return lambda el: el
        # derive from generators
        fact = factorize(m)
        steps = []
        for sigma in fact.degeneracies:
            steps.append(sigma)
        steps.append(fact.isomorphism)
        steps.extend(f.morphism for f in fact.faces)
        actions = []
        for step in steps:
            skey = morphism_key(step)
            if all(step(e) == e for e in step.source.edges) and step.source == step.target:
                actions.append(lambda el: el)
            elif skey in self._actions:
                table = self._actions[skey]
                actions.append(lambda el, table=table: table[el])
            else:
                raise DomainError(
                    "missing generator action",
                    {"morphism": step.to_json()},
                )

        def act(element):
            # contravariant: the last applied map acts first
            for fn in reversed(actions):
                element = fn(element)
            return element

        return act

    def element_str(self, t: Tree, element):
        return str(element)

    def to_json(self):
        trees = [t.term for t in self.trees]
        values = {t.term: [str(e) for e in self._values[t]] for t in self.trees}
        actions = []
        by_key = {}
        for t in self.trees:
            by_key[t.key] = t
        for (skey, tkey, pairs), table in sorted(self._actions.items(), key=str):
            source, target = by_key[skey], by_key[tkey]
            m = OmegaMorphism(source, target, dict(pairs), _checked=True)
            actions.append(
                {
                    "morphism": m.to_json(),
                    "map": {str(k): str(v) for k, v in sorted(table.items(), key=str)},
                }
            )
        return {"trees": trees, "values": values, "actions": actions}

    @classmethod
    def from_json(cls, payload, name="table"):
        trees = [parse_tree(term) for term in payload["trees"]]
        values = {}
        by_key = {}
        for t, term in zip(trees, payload["trees"]):
            values[t] = tuple(payload["values"][term])
            by_key[t.key] = t
        actions = {}
        for entry in payload["actions"]:
            m = OmegaMorphism.from_json(entry["morphism"])
            actions[morphism_key(m)] = dict(entry["map"])
        return cls(trees, values, actions, name=name)


def carrier_closure(seeds, budget=None):
    """Close a batch of trees under elementary-face sources and degeneracy
    targets; returns a deterministic list."""
    seen = {}
    stack = list(seeds)
    while stack:
        t = stack.pop()
        if t.key in seen:
            continue
        seen[t.key] = t
        charge("carrier closure", len(seen) * 4, budget)
        for face in elementary_faces(t, budget=budget):
            if face.morphism.source.key not in seen:
                stack.append(face.morphism.source)
        for sigma in degeneracies(t):
            if sigma.target.key not in seen:
                stack.append(sigma.target)
    return sorted(seen.values(), key=lambda t: (len(t.edges), t.key))


def materialize(X: NerveDendroidalSet, trees, budget=None, name=None):
    """Snapshot a nerve into an explicit TableDendroidalSet on `trees`,
    storing actions for all faces, degeneracies and automorphisms."""
    trees = sorted(trees, key=lambda t: (len(t.edges), t.key))
    values = {t: X.values(t) for t in trees}
    keys = {t.key for t in trees}
    actions = {}

    def store(m):
        fn = X.restrict(m)
        actions[morphism_key(m)] = {el: fn(el) for el in values[m.target]}

    for t in trees:
        for face in elementary_faces(t, budget=budget):
            if face.morphism.source.key in keys:
                store(face.morphism)
        for sigma in degeneracies(t):
            if sigma.target.key in keys:
                store(sigma)
        for alpha in automorphisms(t):
            if any(alpha[e] != e for e in t.edges):
                store(automorphism_of(t, alpha))
    return TableDendroidalSet(trees, values, actions, name=name or X.name)


# -- Segal cores ------------------------------------------------------------------


def segal_core_hom(X, t: Tree, budget=None):
    """Families of corolla values, one per vertex of `t`, agreeing on shared
    edges under the one-edge-tree restrictions.  For the one-edge tree the
    core is the value set itself."""
    verts = t.vertices
    if not verts:
        return tuple((v,) for v in X.values(t))
    # per arity: boundary restriction maps of the corolla
    restrictions = {}

    def corolla_boundary(k):
        if k in restrictions:
            return restrictions[k]
        tk = corolla(k)
        root_r = X.restrict(edge_inclusion(tk, ()))
        leaf_r = [X.restrict(edge_inclusion(tk, (i,))) for i in range(k)]
        table = {}
        for el in X.values(tk):
            table[el] = (root_r(el), tuple(r(el) for r in leaf_r))
        restrictions[k] = table
        return table

    families = [({}, ())]
    total = 1
    for v in verts:
        k = len(t.children(v))
        table = corolla_boundary(k)
        candidates = X.values(corolla(k))
        new = []
        for edge_vals, chosen in families:
            for el in candidates:
                root_val, leaf_vals = table[el]
                assignment = dict(edge_vals)
                ok = True
                for edge, val in [(v, root_val)] + list(zip(t.children(v), leaf_vals)):
                    if edge in assignment and assignment[edge] != val:
                        ok = False
                        break
                    assignment[edge] = val
                if ok:
                    new.append((assignment, chosen + (el,)))
        families = new
        total = max(total, len(families))
        charge("segal core families", total, budget)
    return tuple(chosen for _assignment, chosen in families)


@dataclass
class SegalReport:
    name: str
    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {
            "dendroidal_set": self.name,
            "trees_checked": len(self.checked),
            "passed": self.passed,
            "failures": self.failures,
        }


def _corolla_boundary_tables(X, arities):
    """Per arity: element -> (root value, leaf values) at the one-edge tree."""
    tables = {}
    for k in arities:
        if k in tables:
            continue
        tk = corolla(k)
        root_r = X.restrict(edge_inclusion(tk, ()))
        leaf_r = [X.restrict(edge_inclusion(tk, (i,))) for i in range(k)]
        tables[k] = {
            el: (root_r(el), tuple(r(el) for r in leaf_r)) for el in X.values(tk)
        }
    return tables


def _core_count(t: Tree, tables):
    """Number of core families by dynamic programming over the vertex tree,
    grouping corolla values by their boundary restrictions."""
    verts = t.vertices
    vert_pos = {v: i for i, v in enumerate(verts)}
    counts = [None] * len(verts)
    for vi in range(len(verts) - 1, -1, -1):
        v = verts[vi]
        kids = t.children(v)
        links = [
            (slot, vert_pos[c]) for slot, c in enumerate(kids) if not t.is_leaf(c)
        ]
        acc = {}
        for el, (root_val, leaf_vals) in tables[len(kids)].items():
            ways = 1
            for slot, ci in links:
                ways *= counts[ci].get(leaf_vals[slot], 0)
                if ways == 0:
                    break
            if ways:
                acc[root_val] = acc.get(root_val, 0) + ways
        counts[vi] = acc
    return sum(counts[0].values())


def is_strict_segal(X, trees=None, budget=None) -> SegalReport:
    """Exact bijectivity of the value-to-core map at every carrier tree.

    The core is counted by dynamic programming and the map is checked to be
    injective with image inside the core (membership is the local
    shared-edge condition); equal counts then force bijectivity.
    """
    if trees is None:
        trees = X.trees
    if trees is None:
        raise DomainError("no carrier given for the Segal check")
    report = SegalReport(getattr(X, "name", "dendroidal set"))
    for t in trees:
        try:
            report.checked.append(t.term)
            if not t.vertices:
                # the core is the value set itself and the map is the identity
                X.values(t)
                continue
            verts = t.vertices
            arities = [len(t.children(v)) for v in verts]
            tables = _corolla_boundary_tables(X, set(arities))
            values = X.values(t)
            charge("segal check values", len(values), budget)
            core_count = _core_count(t, tables)
            vert_pos = {v: i for i, v in enumerate(verts)}
            links = [
                (vi, slot, vert_pos[c])
                for vi, v in enumerate(verts)
                for slot, c in enumerate(t.children(v))
                if not t.is_leaf(c)
            ]
            restrictors = [X.restrict(subcorolla_inclusion(t, v)) for v in verts]
            failure = None
            seen = set()
            for x in values:
                family = tuple(r(x) for r in restrictors)
                if family in seen:
                    failure = {
                        "tree": t.term,
                        "reason": "not injective",
                        "family": str(family),
                    }
                    break
                seen.add(family)
                for vi, slot, ci in links:
                    if (
                        tables[arities[vi]][family[vi]][1][slot]
                        != tables[arities[ci]][family[ci]][0]
                    ):
                        failure = {
                            "tree": t.term,
                            "reason": "image outside core",
                            "family": str(family),
                        }
                        break
                if failure:
                    break
            if failure is None and len(seen) != core_count:
                failure = {
                    "tree": t.term,
                    "reason": "not surjective",
                    "value_count": len(values),
                    "core_count": core_count,
                }
            if failure is not None:
                report.failures.append(failure)
        except DomainError as err:
            report.failures.append(
                {"tree": t.term, "reason": "restriction unavailable", "detail": err.payload()}
            )
    return report


# -- operad reconstruction ----------------------------------------------------------


class ReconstructedOperad(FiniteOperad):
    """The operad carried by a strict-Segal dendroidal set.

    Colors are the values at the one-edge tree; arity-n operations are the
    values at the n-corolla sorted by their edge restrictions; composition
    inverts the Segal bijection on a two-level grafted tree and restricts
    along the full-corolla map; identities are degeneracy images.
    """

    name = "reconstructed"

    def __init__(self, X, arity_bound, budget=None):
        self.X = X
        self.arity_bound = arity_bound
        self.budget = budget
        self.colors = tuple(X.values(ETA))
        self._hom_index = {}
        self._graft_index = {}
        self._identities = None

    def _corolla_index(self, n):
        if n in self._hom_index:
            return self._hom_index[n]
        tn = corolla(n)
        root_r = self.X.restrict(edge_inclusion(tn, ()))
        leaf_r = [self.X.restrict(edge_inclusion(tn, (i,))) for i in range(n)]
        index = {}
        for el in self.X.values(tn):
            sig = (tuple(r(el) for r in leaf_r), root_r(el))
            index.setdefault(sig, []).append(el)
        self._hom_index[n] = index
        return index

    def hom(self, inputs, output):
        self.check_arity(len(inputs))
        return tuple(self._corolla_index(len(inputs)).get((tuple(inputs), output), ()))

    def identity(self, color):
        if self._identities is None:
            sigma = degeneracy_at(corolla(1), ())
            # degeneracy: 1-corolla -> one-edge tree; its action makes identities
            act = self.X.restrict(sigma)
            self._identities = {c: act(c) for c in self.colors}
        return self._identities[color]

    def compose(self, parent, parent_sig, children, child_sigs):
        n = parent_sig.arity
        arities = tuple(s.arity for s in child_sigs)
        tree, slots, index, total_r, sub_r = self._graft_data(n, arities)
        family = (parent,) + tuple(children)
        try:
            z = index[family]
        except KeyError:
            raise DomainError(
                "no grafted element restricting to the given family; "
                "the dendroidal set is not strict Segal on the grafted tree"
            )
        return total_r(z)

    def _graft_data(self, n, arities):
        key = (n, arities)
        if key in self._graft_index:
            return self._graft_index[key]
        tree, slots = grafted_two_level_tree(n, arities)
        root_sub = OmegaMorphism(
            corolla(n),
            tree,
            {(): ()} | {(j,): slots[("slot", j)] for j in range(n)},
            _checked=True,
        )
        slot_subs = []
        for j, k in enumerate(arities):
            emap = {(): slots[("slot", j)]}
            for i in range(k):
                emap[(i,)] = slots[("leaf", j, i)]
            slot_subs.append(OmegaMorphism(corolla(k), tree, emap, _checked=True))
        m_total = sum(arities)
        emap = {(): ()}
        pos = 0
        for j, k in enumerate(arities):
            for i in range(k):
                emap[(pos,)] = slots[("leaf", j, i)]
                pos += 1
        total = OmegaMorphism(corolla(m_total), tree, emap, _checked=True)

        root_act = self.X.restrict(root_sub)
        slot_acts = [self.X.restrict(s) for s in slot_subs]
        index = {}
        values = self.X.values(tree)
        charge("reconstruction graft values", len(values), self.budget)
        for z in values:
            family = (root_act(z),) + tuple(act(z) for act in slot_acts)
            if family in index:
                raise DomainError(
                    "grafted tree value restricts non-uniquely; "
                    "the dendroidal set is not strict Segal"
                )
            index[family] = z
        data = (tree, slots, index, self.X.restrict(total), (root_sub, slot_subs))
        self._graft_index[key] = data
        return data

    def sigma(self, element, sig, perm):
        n = len(perm)
        act = self.X.restrict(leaf_relabel_automorphism(n, perm))
        return act(element)

    def element_str(self, element):
        return str(element)


def reconstruct_operad(X, arity_bound, budget=None) -> ReconstructedOperad:
    return ReconstructedOperad(X, arity_bound, budget=budget)


# -- isomorphism witnesses ------------------------------------------------------


@dataclass
class IsomorphismWitness:
    color_map: dict
    element_maps: dict  # signature -> {P element: Q element}
    checks: int
    failures: list

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {
            "ok": self.ok,
            "colors": {str(k): str(v) for k, v in self.color_map.items()},
            "signatures": {
                str(sig): {str(a): str(b) for a, b in table.items()}
                for sig, table in sorted(self.element_maps.items(), key=str)
            },
            "instances_checked": self.checks,
            "failures": self.failures,
        }


def verify_operad_isomorphism(P, Q, color_map, element_map, arity_bound, budget=None):
    """Check that (color_map, element_map) is an operad isomorphism P -> Q on
    all signatures and composition/symmetry instances within the bound.

    `element_map(sig, element)` translates a P element at a P signature.
    """
    from .operads import composition_instances

    failures = []
    checks = 0
    comp_limit = resolve_budget(budget)
    sigs = P.nonempty_signatures(arity_bound, budget=budget)

    def translate_sig(sig):
        return Signature(tuple(color_map[c] for c in sig.inputs), color_map[sig.output])

    # bijectivity per signature and a well-defined inverse on colors
    if sorted(map(str, color_map.values())) != sorted(map(str, Q.colors)):
        failures.append({"law": "color-bijection", "detail": "color map is not onto"})
    element_tables = {}
    for sig in sigs:
        table = {el: element_map(sig, el) for el in P.hom(sig.inputs, sig.output)}
        q_sig = translate_sig(sig)
        q_hom = Q.hom(q_sig.inputs, q_sig.output)
        checks += 1
        if sorted(map(str, table.values())) != sorted(map(str, q_hom)):
            failures.append(
                {
                    "law": "hom-bijection",
                    "signature": str(sig),
                    "p_count": len(table),
                    "q_count": len(q_hom),
                }
            )
        element_tables[(sig.inputs, sig.output)] = table

    # identities
    for c in P.colors:
        sig = Signature((c,), c)
        checks += 1
        if element_map(sig, P.identity(c)) != Q.identity(color_map[c]):
            failures.append({"law": "identity", "color": str(c)})

    # composition
    for parent_sig, child_sigs in composition_instances(P, arity_bound, sigs):
        q_parent_sig = translate_sig(parent_sig)
        q_child_sigs = [translate_sig(s) for s in child_sigs]
        result_sig = Signature(
            tuple(c for s in child_sigs for c in s.inputs), parent_sig.output
        )
        parent_table = element_tables[(parent_sig.inputs, parent_sig.output)]
        child_tables = [element_tables[(s.inputs, s.output)] for s in child_sigs]
        result_table = element_tables.setdefault(
            (result_sig.inputs, result_sig.output),
            {
                el: element_map(result_sig, el)
                for el in P.hom(result_sig.inputs, result_sig.output)
            },
        )
        for f in P.hom(parent_sig.inputs, parent_sig.output):
            q_f = parent_table[f]
            pools = [P.hom(s.inputs, s.output) for s in child_sigs]
            for gs in itertools.product(*pools):
                checks += 1
                if checks > comp_limit:
                    raise BudgetExceeded("isomorphism composition checks", checks, comp_limit)
                p_result = P.compose(f, parent_sig, list(gs), list(child_sigs))
                lhs = result_table[p_result]
                rhs = Q.compose(
                    q_f,
                    q_parent_sig,
                    [table[g] for table, g in zip(child_tables, gs)],
                    q_child_sigs,
                )
                if lhs != rhs:
                    failures.append(
                        {
                            "law": "composition",
                            "parent": str(parent_sig),
                            "f": str(f),
                            "gs": [str(g) for g in gs],
                        }
                    )

    # symmetry
    for sig in sigs:
        n = sig.arity
        if n < 2:
            continue
        q_sig = translate_sig(sig)
        for el in P.hom(sig.inputs, sig.output):
            for perm in itertools.permutations(range(n)):
                checks += 1
                p_out = P.sigma(el, sig, perm)
                out_sig = Signature(tuple(sig.inputs[i] for i in perm), sig.output)
                lhs = element_map(out_sig, p_out)
                rhs = Q.sigma(element_map(sig, el), q_sig, perm)
                if lhs != rhs:
                    failures.append(
                        {"law": "symmetry", "signature": str(sig), "perm": perm}
                    )
    return IsomorphismWitness(
        dict(color_map),
        {k: v for k, v in element_tables.items()},
        checks,
        failures,
    )


def nerve_round_trip(P: FiniteOperad, arity_bound, budget=None) -> IsomorphismWitness:
    """Reconstruct the operad from its nerve and verify the canonical
    comparison map is an isomorphism; the returned witness carries the color
    and per-signature element bijections."""
    X = nerve(P, budget=budget)
    Q = reconstruct_operad(X, arity_bound, budget=budget)

    def color_of(c):
        # nerve element at the one-edge tree: one color, no vertices
        return ((c,), ())

    def element_of(sig, el):
        tn = corolla(sig.arity)
        coloring = {(): sig.output}
        for i, c in enumerate(sig.inputs):
            coloring[(i,)] = c
        return (tuple(coloring[e] for e in tn.edges), (el,))

    color_map = {c: color_of(c) for c in P.colors}
    return verify_operad_isomorphism(
        P, Q, color_map, element_of, arity_bound, budget=budget
    )
