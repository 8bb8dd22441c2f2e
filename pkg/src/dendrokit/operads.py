"""Finite colored set-valued operads.

An operad here is a set of colors, a finite hom-set per ordered signature
``(inputs; output)``, identities, a simultaneous multicomposition, and
symmetric-group actions.  Conventions used throughout:

- ``compose(f, fsig, children, child_sigs)`` plugs one child into every input
  slot of ``f`` (identities fill untouched slots); the result has the
  concatenation of the child inputs as its inputs.
- ``sigma(f, fsig, perm)`` returns the element whose i-th input is
  ``fsig.inputs[perm[i]]``; permutations are 0-indexed tuples and compose via
  ``perm_compose(p, q)[i] = p[q[i]]`` so that acting by ``p`` then ``q``
  equals acting by ``perm_compose(p, q)`` once.

Built-in examples: the terminal operad (one color, every hom-set a point),
the associative operad (linear orders, a free symmetric action), endomorphism
operads of a finite set, the operad generated by a tree, and free operads on
a symmetric collection with the tree-shaped element calculus.

Axioms (unit, associativity, equivariance) are checked by enumeration, never
assumed; ``check_operad_axioms`` reports every violated instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DomainError, charge
from .morphisms import OpWitness, _input_sets
from .trees import Tree


def perm_compose(p, q):
    """Acting by p then by q; identity is tuple(range(n))."""
    return tuple(p[q[i]] for i in range(len(q)))


def perm_inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def block_permutation(perm, arities):
    """The permutation moving whole blocks: block i of the result is block
    perm[i] of the input, where block j has length arities[j]."""
    offsets = [0]
    for a in arities:
        offsets.append(offsets[-1] + a)
    out = []
    for i in perm:
        out.extend(range(offsets[i], offsets[i] + arities[i]))
    return tuple(out)


def direct_sum_permutation(perms):
    """Blockwise direct sum of permutations."""
    out = []
    offset = 0
    for p in perms:
        out.extend(offset + j for j in p)
        offset += len(p)
    return tuple(out)


@dataclass(frozen=True)
class Signature:
    inputs: tuple
    output: object

    @property
    def arity(self):
        return len(self.inputs)


class FiniteOperad:
    """Interface shared by all operad implementations."""

    name = "operad"
    colors: tuple = ()
    arity_bound = None

    def hom(self, inputs, output):
        raise NotImplementedError

    def identity(self, color):
        raise NotImplementedError

    def compose(self, parent, parent_sig, children, child_sigs):
        raise NotImplementedError

    def sigma(self, element, sig, perm):
        raise NotImplementedError

    def element_str(self, element):
        return str(element)

    def check_arity(self, n):
        if self.arity_bound is not None and n > self.arity_bound:
            raise DomainError(
                "arity above operad bound",
                {"operad": self.name, "arity": n, "bound": self.arity_bound},
            )

    def nonempty_signatures(self, max_arity, budget=None):
        """All signatures with nonempty hom up to `max_arity`."""
        sigs = []
        charge(
            "operad signatures",
            sum(len(self.colors) ** (n + 1) for n in range(max_arity + 1)),
            budget,
        )
        for n in range(max_arity + 1):
            for combo in itertools.product(self.colors, repeat=n + 1):
                inputs, output = combo[:n], combo[n]
                if self.hom(inputs, output):
                    sigs.append(Signature(inputs, output))
        return sigs


# -- the terminal operad -----------------------------------------------------


class ComOperad(FiniteOperad):
    """One color and a single operation in every arity."""

    name = "com"
    colors = ("x",)
    POINT = "u"

    def hom(self, inputs, output):
        return (self.POINT,)

    def identity(self, color):
        return self.POINT

    def compose(self, parent, parent_sig, children, child_sigs):
        return self.POINT

    def sigma(self, element, sig, perm):
        return self.POINT


def com_operad():
    return ComOperad()


# -- the associative operad --------------------------------------------------


class AssOperad(FiniteOperad):
    """Elements of arity n are the n! linear orders of the input slots,
    stored as tuples listing slot indices in multiplication order."""

    name = "ass"
    colors = ("x",)

    def __init__(self, arity_bound=4):
        self.arity_bound = arity_bound

    def hom(self, inputs, output):
        self.check_arity(len(inputs))
        return tuple(itertools.permutations(range(len(inputs))))

    def identity(self, color):
        return (0,)

    def compose(self, parent, parent_sig, children, child_sigs):
        arities = [len(s.inputs) for s in child_sigs]
        offsets = [0]
        for a in arities:
            offsets.append(offsets[-1] + a)
        out = []
        for slot in parent:
            out.extend(offsets[slot] + pos for pos in children[slot])
        return tuple(out)

    def sigma(self, element, sig, perm):
        inv = perm_inverse(perm)
        return tuple(inv[slot] for slot in element)

    def element_str(self, element):
        return "".join(str(i) for i in element)


def ass_operad(arity_bound=4):
    return AssOperad(arity_bound)


# -- endomorphism operads ----------------------------------------------------


class EndOperad(FiniteOperad):
    """All functions X^n -> X on a finite set, composition by substitution.

    An arity-n element is the tuple of values over X^n in lexicographic
    argument order.
    """

    name = "end"
    colors = ("x",)

    def __init__(self, points, arity_bound=2, budget=None):
        self.points = tuple(sorted(set(points)))
        if not self.points:
            raise DomainError("endomorphism operad needs a nonempty set")
        self.arity_bound = arity_bound
        charge("end_operad tables", len(self.points) ** (len(self.points) ** arity_bound), budget)
        self._index = {p: i for i, p in enumerate(self.points)}
        self._args_cache = {}

    def _args(self, n):
        if n not in self._args_cache:
            self._args_cache[n] = tuple(itertools.product(self.points, repeat=n))
        return self._args_cache[n]

    def evaluate(self, element, args):
        idx = 0
        for a in args:
            idx = idx * len(self.points) + self._index[a]
        return element[idx]

    def hom(self, inputs, output):
        n = len(inputs)
        self.check_arity(n)
        size = len(self.points) ** n
        return tuple(itertools.product(self.points, repeat=size))

    def identity(self, color):
        return self.points

    def compose(self, parent, parent_sig, children, child_sigs):
        arities = [len(s.inputs) for s in child_sigs]
        total = sum(arities)
        out = []
        for args in self._args(total):
            mids = []
            pos = 0
            for child, k in zip(children, arities):
                mids.append(self.evaluate(child, args[pos : pos + k]) if k else child[0])
                pos += k
            out.append(self.evaluate(parent, tuple(mids)))
        return tuple(out)

    def sigma(self, element, sig, perm):
        n = len(perm)
        inv = perm_inverse(perm)
        out = []
        for args in self._args(n):
            out.append(self.evaluate(element, tuple(args[inv[j]] for j in range(n))))
        return tuple(out)

    def element_str(self, element):
        return "".join(str(v) for v in element)


def end_operad(points, arity_bound=2, budget=None):
    return EndOperad(points, arity_bound, budget)


# -- the operad generated by a tree ------------------------------------------


class TreeOperad(FiniteOperad):
    """Colors are the edges of a tree; operations are the vertex-generated
    composites.  Each nonempty hom-set is a single operation, represented by
    its own signature pair."""

    name = "tree-operad"

    def __init__(self, tree: Tree):
        self.tree = tree
        self.colors = tree.edges
        self._sets = {e: set(map(frozenset, s)) for e, s in _input_sets(tree).items()}

    def hom(self, inputs, output):
        inputs = tuple(inputs)
        if inputs == (output,):
            return ((inputs, output),)
        if len(set(inputs)) != len(inputs):
            return ()
        if frozenset(inputs) in self._sets.get(output, set()):
            return ((inputs, output),)
        return ()

    def identity(self, color):
        return ((color,), color)

    def compose(self, parent, parent_sig, children, child_sigs):
        inputs = tuple(c for s in child_sigs for c in s.inputs)
        result = self.hom(inputs, parent_sig.output)
        if not result:
            raise DomainError("composite operation does not exist in tree operad")
        return result[0]

    def sigma(self, element, sig, perm):
        inputs = tuple(sig.inputs[perm[i]] for i in range(len(perm)))
        result = self.hom(inputs, sig.output)
        if not result:
            raise DomainError("permuted operation does not exist in tree operad")
        return result[0]

    def nonempty_signatures(self, max_arity, budget=None):
        sigs = []
        for e, sets in self._sets.items():
            for iset in sets:
                if len(iset) <= max_arity:
                    for perm in itertools.permutations(sorted(iset)):
                        sigs.append(Signature(perm, e))
        sigs.sort(key=lambda s: (len(s.inputs), s.output, s.inputs))
        charge("tree operad signatures", len(sigs), budget)
        return sigs

    def non_identity_input_sets(self):
        """Unordered non-identity signatures with a nonempty hom-set."""
        out = []
        for e in self.tree.edges:
            for iset in sorted(self._sets[e], key=lambda s: tuple(sorted(s))):
                if iset != frozenset({e}):
                    out.append((iset, e))
        return out

    def element_str(self, element):
        from .trees import format_address

        inputs, output = element
        ins = ",".join(format_address(i) or "r" for i in inputs)
        return f"({ins};{format_address(output) or 'r'})"


def omega_operad(tree: Tree) -> TreeOperad:
    return TreeOperad(tree)


# -- witness evaluation -------------------------------------------------------


def eval_witness(witness: OpWitness, tree: Tree, edge_color, vertex_element, operad):
    """Evaluate a composite-operation witness of `tree` inside `operad`.

    `edge_color` maps tree edges to operad colors and `vertex_element` maps
    vertex addresses to operad elements whose signature matches the colored
    vertex.  Returns (element, Signature).
    """
    out_color = edge_color[witness.output]
    if witness.is_identity:
        sig = Signature((out_color,), out_color)
        return operad.identity(out_color), sig
    kids = tree.children(witness.output)
    parent_sig = Signature(tuple(edge_color[c] for c in kids), out_color)
    parent = vertex_element[witness.output]
    if all(w.is_identity for w in witness.children) and witness.perm == tuple(
        range(len(witness.perm))
    ):
        # unit law: composing with identities in every slot returns the parent
        return parent, parent_sig
    children = []
    child_sigs = []
    for w in witness.children:
        el, sig = eval_witness(w, tree, edge_color, vertex_element, operad)
        children.append(el)
        child_sigs.append(sig)
    element = operad.compose(parent, parent_sig, children, child_sigs)
    concat_inputs = tuple(c for s in child_sigs for c in s.inputs)
    sig = Signature(concat_inputs, out_color)
    if witness.perm and witness.perm != tuple(range(len(witness.perm))):
        element = operad.sigma(element, sig, witness.perm)
        sig = Signature(tuple(concat_inputs[i] for i in witness.perm), out_color)
    return element, sig


# -- collections and free operads ---------------------------------------------


@dataclass
class Collection:
    """A sequence of finite levels with symmetric-group actions.

    `action(n, perm, element)` uses the same permutation convention as
    operads; the default action is trivial.
    """

    levels: dict
    action: object = None

    def __post_init__(self):
        self.levels = {n: tuple(v) for n, v in self.levels.items() if len(v) > 0}
        if self.action is None:
            self.action = lambda n, perm, el: el

    def level(self, n):
        return self.levels.get(n, ())

    def check_action(self, max_arity=None):
        """Violations of the group-action laws on every stored level."""
        bad = []
        for n, elements in self.levels.items():
            if max_arity is not None and n > max_arity:
                continue
            ident = tuple(range(n))
            for el in elements:
                if self.action(n, ident, el) != el:
                    bad.append(("identity", n, el))
            for p, q in itertools.product(itertools.permutations(range(n)), repeat=2):
                for el in elements:
                    one = self.action(n, q, self.action(n, p, el))
                    two = self.action(n, perm_compose(p, q), el)
                    if one != two:
                        bad.append(("composition", n, (p, q, el)))
        return bad


# Free operad elements: ("leaf", i) for the i-th input, or
# ("node", generator, children) with one child per generator input, children
# kept in the generator's argument order.


def _term_leaves(term):
    if term[0] == "leaf":
        yield term[1]
    else:
        for c in term[2]:
            yield from _term_leaves(c)


def _term_serialize(term):
    if term[0] == "leaf":
        return f"L{term[1]}"
    gen, children = term[1], term[2]
    return "N[" + repr(gen) + ":" + ",".join(_term_serialize(c) for c in children) + "]"


class FreeOperad(FiniteOperad):
    """The free operad on a collection with X(0) = X(1) = empty.

    Arity-n elements are decorated trees with leaves labelled 0..n-1, one
    collection element of matching arity per vertex, taken modulo decorated
    isomorphism.  Ordering the children of every vertex by their serialized
    sub-terms fixes one representative per class; reordering children acts on
    the decoration through the collection's symmetric action.  Composition
    grafts trees and renormalizes to the representative; the symmetric action
    relabels leaves and renormalizes.
    """

    name = "free"
    colors = ("x",)

    def __init__(self, collection: Collection, arity_bound, size_bound=200000):
        if collection.level(0) or collection.level(1):
            raise DomainError(
                "free operad requires an empty collection in arities 0 and 1"
            )
        self.collection = collection
        self.arity_bound = arity_bound
        self.size_bound = size_bound
        self._levels = self._build()

    def canonical(self, term):
        if term[0] == "leaf":
            return term
        gen, children = term[1], term[2]
        kids = [self.canonical(c) for c in children]
        order = sorted(range(len(kids)), key=lambda i: _term_serialize(kids[i]))
        if order != list(range(len(kids))):
            gen = self.collection.action(len(kids), tuple(order), gen)
            kids = [kids[i] for i in order]
        return ("node", gen, tuple(kids))

    def generator_element(self, n, gen):
        """The corolla decorated by `gen` with identity leaf labelling."""
        if gen not in self.collection.level(n):
            raise DomainError("unknown generator", {"arity": n})
        return self.canonical(("node", gen, tuple(("leaf", i) for i in range(n))))

    def _build(self):
        levels = {1: {("leaf", 0)}}
        worklist = []

        def add(n, el):
            # every level is closed under relabelling, so adjoin the whole
            # symmetric orbit whenever a new element appears
            bucket = levels.setdefault(n, set())
            if el in bucket:
                return
            sig = Signature(self.colors * n, self.colors[0])
            for perm in itertools.permutations(range(n)):
                image = self.sigma(el, sig, perm)
                if image not in bucket:
                    bucket.add(image)
                    worklist.append((n, image))

        for n, elements in self.collection.levels.items():
            if n > self.arity_bound:
                continue
            for gen in elements:
                add(n, self.generator_element(n, gen))
        # close under grafting one generator corolla onto one leaf at a time
        while worklist:
            n, el = worklist.pop()
            for gen_arity, gens in self.collection.levels.items():
                new_arity = n + gen_arity - 1
                if new_arity > self.arity_bound:
                    continue
                for gen in gens:
                    corolla = self.generator_element(gen_arity, gen)
                    for leaf in range(n):
                        add(new_arity, self._graft(el, n, leaf, corolla, gen_arity))
            total = sum(len(v) for v in levels.values())
            if total > self.size_bound:
                raise BudgetExceeded("free operad elements", total, self.size_bound)
        return {n: tuple(sorted(v, key=_term_serialize)) for n, v in levels.items()}

    def _graft(self, f_term, n, leaf, g_term, k):
        """Substitute `g_term` (arity k) for leaf `leaf` of `f_term`."""

        def relabel(term, shift, skip):
            if term[0] == "leaf":
                i = term[1]
                return ("leaf", i + shift if i > skip else i)
            return ("node", term[1], tuple(relabel(c, shift, skip) for c in term[2]))

        def substitute(term):
            if term[0] == "leaf":
                if term[1] == leaf:
                    def shift_g(t):
                        if t[0] == "leaf":
                            return ("leaf", t[1] + leaf)
                        return ("node", t[1], tuple(shift_g(c) for c in t[2]))

                    return shift_g(g_term)
                return term
            return ("node", term[1], tuple(substitute(c) for c in term[2]))

        shifted = relabel(f_term, k - 1, leaf)
        return self.canonical(substitute(shifted))

    def level(self, n):
        return self._levels.get(n, ())

    def hom(self, inputs, output):
        self.check_arity(len(inputs))
        return self.level(len(inputs))

    def identity(self, color):
        return ("leaf", 0)

    def compose(self, parent, parent_sig, children, child_sigs):
        arities = [len(s.inputs) for s in child_sigs]

        def substitute(term):
            if term[0] == "leaf":
                slot = term[1]
                offset = sum(arities[:slot])

                def shift(t):
                    if t[0] == "leaf":
                        return ("leaf", t[1] + offset)
                    return ("node", t[1], tuple(shift(c) for c in t[2]))

                return shift(children[slot])
            return ("node", term[1], tuple(substitute(c) for c in term[2]))

        return self.canonical(substitute(parent))

    def sigma(self, element, sig, perm):
        inv = perm_inverse(perm)

        def relabel(term):
            if term[0] == "leaf":
                return ("leaf", inv[term[1]])
            return ("node", term[1], tuple(relabel(c) for c in term[2]))

        return self.canonical(relabel(element))

    def element_str(self, element):
        return _term_serialize(element)


def free_operad(collection: Collection, arity_bound, size_bound=200000) -> FreeOperad:
    return FreeOperad(collection, arity_bound, size_bound)


def one_binary_generator():
    """The collection with a single binary element and trivial action."""
    return Collection(levels={2: ("m",)})


# -- explicit tables -----------------------------------------------------------


class TableOperad(FiniteOperad):
    """An operad given by explicit hom/composition/symmetry tables."""

    name = "table"

    def __init__(self, colors, homs, identities, comp, sym, arity_bound=None, name=None):
        self.colors = tuple(colors)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._identities = dict(identities)
        self._comp = dict(comp)
        self._sym = dict(sym)
        self.arity_bound = arity_bound
        if name:
            self.name = name

    def hom(self, inputs, output):
        self.check_arity(len(inputs))
        return self._homs.get((tuple(inputs), output), ())

    def identity(self, color):
        try:
            return self._identities[color]
        except KeyError:
            raise DomainError("missing identity entry", {"color": color})

    def compose(self, parent, parent_sig, children, child_sigs):
        if not child_sigs:
            # the empty multicomposition of a nullary operation is itself
            return parent
        key = (
            parent,
            (parent_sig.inputs, parent_sig.output),
            tuple(children),
            tuple((s.inputs, s.output) for s in child_sigs),
        )
        try:
            return self._comp[key]
        except KeyError:
            raise DomainError(
                "missing composition table entry",
                {"parent": str(parent), "children": [str(c) for c in children]},
            )

    def sigma(self, element, sig, perm):
        key = (element, (sig.inputs, sig.output), tuple(perm))
        try:
            return self._sym[key]
        except KeyError:
            raise DomainError("missing symmetry table entry", {"element": str(element)})

    def nonempty_signatures(self, max_arity, budget=None):
        sigs = [
            Signature(inputs, output)
            for (inputs, output), v in self._homs.items()
            if v and len(inputs) <= max_arity
        ]
        sigs.sort(key=lambda s: (len(s.inputs), str(s.output), tuple(map(str, s.inputs))))
        return sigs

    # -- construction and serialization --

    @classmethod
    def from_operad(cls, P: FiniteOperad, arity_bound, budget=None):
        """Materialize every hom/composition/symmetry entry of `P` up to the
        arity bound."""
        sigs = P.nonempty_signatures(arity_bound, budget=budget)
        homs = {}
        for sig in sigs:
            homs[(sig.inputs, sig.output)] = tuple(P.hom(sig.inputs, sig.output))
        identities = {c: P.identity(c) for c in P.colors}
        comp = {}
        count = 0
        for parent_sig, child_sigs in composition_instances(P, arity_bound, sigs):
            for parent in P.hom(parent_sig.inputs, parent_sig.output):
                pools = [P.hom(s.inputs, s.output) for s in child_sigs]
                for children in itertools.product(*pools):
                    count += 1
                    charge("operad composition table", count, budget)
                    value = P.compose(parent, parent_sig, list(children), list(child_sigs))
                    key = (
                        parent,
                        (parent_sig.inputs, parent_sig.output),
                        children,
                        tuple((s.inputs, s.output) for s in child_sigs),
                    )
                    comp[key] = value
        sym = {}
        for sig in sigs:
            for perm in itertools.permutations(range(sig.arity)):
                for el in P.hom(sig.inputs, sig.output):
                    sym[(el, (sig.inputs, sig.output), perm)] = P.sigma(el, sig, perm)
        return cls(
            P.colors, homs, identities, comp, sym, arity_bound=arity_bound, name=P.name
        )

    def corrupt(self, key, value):
        """Copy of the table with one composition entry replaced."""
        comp = dict(self._comp)
        if key not in comp:
            raise DomainError("no such composition entry")
        comp[key] = value
        return TableOperad(
            self.colors,
            self._homs,
            self._identities,
            comp,
            self._sym,
            arity_bound=self.arity_bound,
            name=self.name + "-corrupted",
        )

    def composition_keys(self):
        return sorted(self._comp, key=str)

    def to_json(self, element_str=str):
        def color_str(c):
            return c if isinstance(c, str) else str(c)

        homs = [
            {
                "inputs": [color_str(c) for c in inputs],
                "output": color_str(output),
                "elements": [element_str(e) for e in elements],
            }
            for (inputs, output), elements in sorted(self._homs.items(), key=str)
        ]
        comp = [
            {
                "parent": {
                    "inputs": [color_str(c) for c in psig[0]],
                    "output": color_str(psig[1]),
                    "element": element_str(parent),
                },
                "children": [
                    {
                        "inputs": [color_str(c) for c in s[0]],
                        "output": color_str(s[1]),
                        "element": element_str(ch),
                    }
                    for ch, s in zip(children, child_sigs)
                ],
                "result": element_str(value),
            }
            for (parent, psig, children, child_sigs), value in sorted(
                self._comp.items(), key=str
            )
        ]
        sym = [
            {
                "inputs": [color_str(c) for c in sig[0]],
                "output": color_str(sig[1]),
                "element": element_str(el),
                "perm": list(perm),
                "result": element_str(value),
            }
            for (el, sig, perm), value in sorted(self._sym.items(), key=str)
        ]
        return {
            "name": self.name,
            "arity_bound": self.arity_bound,
            "colors": [color_str(c) for c in self.colors],
            "identities": {
                color_str(c): element_str(e) for c, e in sorted(self._identities.items(), key=str)
            },
            "homs": homs,
            "comp": comp,
            "sym": sym,
        }

    @classmethod
    def from_json(cls, payload):
        colors = tuple(payload["colors"])
        homs = {}
        for entry in payload["homs"]:
            homs[(tuple(entry["inputs"]), entry["output"])] = tuple(entry["elements"])
        identities = dict(payload["identities"])
        comp = {}
        for entry in payload["comp"]:
            p = entry["parent"]
            key = (
                p["element"],
                ((tuple(p["inputs"])), p["output"]),
                tuple(c["element"] for c in entry["children"]),
                tuple((tuple(c["inputs"]), c["output"]) for c in entry["children"]),
            )
            comp[key] = entry["result"]
        sym = {}
        for entry in payload["sym"]:
            key = (
                entry["element"],
                (tuple(entry["inputs"]), entry["output"]),
                tuple(entry["perm"]),
            )
            sym[key] = entry["result"]
        return cls(
            colors,
            homs,
            identities,
            comp,
            sym,
            arity_bound=payload.get("arity_bound"),
            name=payload.get("name", "table"),
        )


# -- axiom checking -------------------------------------------------------------


def composition_instances(P, arity_bound, sigs=None, budget=None):
    """All (parent_sig, child_sigs) pairs composable within the arity bound."""
    if sigs is None:
        sigs = P.nonempty_signatures(arity_bound, budget=budget)
    by_output = {}
    for s in sigs:
        by_output.setdefault(s.output, []).append(s)
    out = []
    for parent in sigs:
        n = parent.arity
        if n == 0:
            continue
        pools = [by_output.get(c, []) for c in parent.inputs]
        if any(not p for p in pools):
            continue
        for child_sigs in itertools.product(*pools):
            if sum(s.arity for s in child_sigs) <= arity_bound:
                out.append((parent, tuple(child_sigs)))
    return out


@dataclass
class AxiomReport:
    operad: str
    arity_bound: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def add(self, law, instance, lhs, rhs):
        self.violations.append(
            {"law": law, "instance": instance, "lhs": str(lhs), "rhs": str(rhs)}
        )

    def to_json(self):
        return {
            "operad": self.operad,
            "arity_bound": self.arity_bound,
            "instances_checked": self.checked,
            "passed": self.passed,
            "violations": self.violations,
        }


def check_operad_axioms(P: FiniteOperad, arity_bound, budget=None, max_perm_arity=4):
    """Enumerate unit, associativity and equivariance instances up to the
    arity bound and report every violation."""
    report = AxiomReport(P.name, arity_bound)
    sigs = P.nonempty_signatures(arity_bound, budget=budget)
    instances = composition_instances(P, arity_bound, sigs, budget=budget)

    def sig_str(s):
        return f"({','.join(map(str, s.inputs))};{s.output})"

    # identity elements exist
    for c in P.colors:
        ident = P.identity(c)
        if ident not in P.hom((c,), c):
            report.add("identity-exists", {"color": str(c)}, ident, P.hom((c,), c))
        report.checked += 1

    # unit laws
    for s in sigs:
        if s.arity == 0:
            continue
        for el in P.hom(s.inputs, s.output):
            ids = [P.identity(c) for c in s.inputs]
            id_sigs = [Signature((c,), c) for c in s.inputs]
            right = P.compose(el, s, ids, id_sigs)
            if right != el:
                report.add("right-unit", {"sig": sig_str(s), "element": str(el)}, right, el)
            out_id = P.identity(s.output)
            left = P.compose(out_id, Signature((s.output,), s.output), [el], [s])
            if left != el:
                report.add("left-unit", {"sig": sig_str(s), "element": str(el)}, left, el)
            report.checked += 2

    # associativity: compose twice in both orders
    count = 0
    for parent_sig, child_sigs in instances:
        mid_sig = Signature(
            tuple(c for s in child_sigs for c in s.inputs), parent_sig.output
        )
        if mid_sig.arity == 0:
            # composing the nullary composite with nothing is trivial
            continue
        for f in P.hom(parent_sig.inputs, parent_sig.output):
            pools = [P.hom(s.inputs, s.output) for s in child_sigs]
            for gs in itertools.product(*pools):
                # choose grandchildren for every input of the composite
                h_sigs = []
                feasible = True
                for color in mid_sig.inputs:
                    options = [s for s in sigs if s.output == color]
                    if not options:
                        feasible = False
                        break
                    h_sigs.append(options)
                if not feasible:
                    continue
                for h_combo in itertools.product(*h_sigs):
                    if sum(s.arity for s in h_combo) > arity_bound:
                        continue
                    h_elements_pools = [P.hom(s.inputs, s.output) for s in h_combo]
                    for hs in itertools.product(*h_elements_pools):
                        count += 1
                        charge("associativity instances", count, budget)
                        lhs_mid = P.compose(f, parent_sig, list(gs), list(child_sigs))
                        lhs = P.compose(lhs_mid, mid_sig, list(hs), list(h_combo))
                        rhs_children = []
                        rhs_child_sigs = []
                        pos = 0
                        for g, gsig in zip(gs, child_sigs):
                            block = list(h_combo[pos : pos + gsig.arity])
                            block_els = list(hs[pos : pos + gsig.arity])
                            pos += gsig.arity
                            rhs_children.append(P.compose(g, gsig, block_els, block))
                            rhs_child_sigs.append(
                                Signature(
                                    tuple(c for s in block for c in s.inputs), gsig.output
                                )
                            )
                        rhs = P.compose(f, parent_sig, rhs_children, rhs_child_sigs)
                        report.checked += 1
                        if lhs != rhs:
                            report.add(
                                "associativity",
                                {
                                    "parent": sig_str(parent_sig),
                                    "children": [sig_str(s) for s in child_sigs],
                                    "f": str(f),
                                    "gs": [str(g) for g in gs],
                                    "hs": [str(h) for h in hs],
                                },
                                lhs,
                                rhs,
                            )

    # symmetric action functoriality
    for s in sigs:
        n = s.arity
        if n < 2 or n > max_perm_arity:
            continue
        for el in P.hom(s.inputs, s.output):
            ident = tuple(range(n))
            if P.sigma(el, s, ident) != el:
                report.add("sigma-identity", {"sig": sig_str(s), "element": str(el)}, P.sigma(el, s, ident), el)
            report.checked += 1
            for p in itertools.permutations(range(n)):
                s_p = Signature(tuple(s.inputs[i] for i in p), s.output)
                for q in itertools.permutations(range(n)):
                    one = P.sigma(P.sigma(el, s, p), s_p, q)
                    two = P.sigma(el, s, perm_compose(p, q))
                    report.checked += 1
                    if one != two:
                        report.add(
                            "sigma-functoriality",
                            {"sig": sig_str(s), "element": str(el), "p": p, "q": q},
                            one,
                            two,
                        )

    # equivariance against composition
    for parent_sig, child_sigs in instances:
        n = parent_sig.arity
        if n > max_perm_arity:
            continue
        arities = [s.arity for s in child_sigs]
        for f in P.hom(parent_sig.inputs, parent_sig.output):
            pools = [P.hom(s.inputs, s.output) for s in child_sigs]
            for gs in itertools.product(*pools):
                base = P.compose(f, parent_sig, list(gs), list(child_sigs))
                base_sig = Signature(
                    tuple(c for s in child_sigs for c in s.inputs), parent_sig.output
                )
                for p in itertools.permutations(range(n)):
                    f_p = P.sigma(f, parent_sig, p)
                    sig_p = Signature(tuple(parent_sig.inputs[i] for i in p), parent_sig.output)
                    gs_p = [gs[p[i]] for i in range(n)]
                    sigs_p = [child_sigs[p[i]] for i in range(n)]
                    lhs = P.compose(f_p, sig_p, gs_p, sigs_p)
                    block = block_permutation(p, arities)
                    rhs = P.sigma(base, base_sig, block)
                    report.checked += 1
                    if lhs != rhs:
                        report.add(
                            "parent-equivariance",
                            {"parent": sig_str(parent_sig), "perm": p, "f": str(f)},
                            lhs,
                            rhs,
                        )
                # children permutations, one slot at a time
                for slot in range(n):
                    k = arities[slot]
                    if k < 2 or k > max_perm_arity:
                        continue
                    for tau in itertools.permutations(range(k)):
                        gs_t = list(gs)
                        gs_t[slot] = P.sigma(gs[slot], child_sigs[slot], tau)
                        sigs_t = list(child_sigs)
                        sigs_t[slot] = Signature(
                            tuple(child_sigs[slot].inputs[i] for i in tau),
                            child_sigs[slot].output,
                        )
                        lhs = P.compose(f, parent_sig, gs_t, sigs_t)
                        taus = [
                            tau if i == slot else tuple(range(arities[i]))
                            for i in range(n)
                        ]
                        rhs = P.sigma(base, base_sig, direct_sum_permutation(taus))
                        report.checked += 1
                        if lhs != rhs:
                            report.add(
                                "child-equivariance",
                                {
                                    "parent": sig_str(parent_sig),
                                    "slot": slot,
                                    "perm": tau,
                                },
                                lhs,
                                rhs,
                            )
    return report
