"""Regenerate the bundled fixture files.  Run as
``python -m dendrokit.fixtures.build`` from a source checkout."""

import json
from pathlib import Path

from ..dendroidal import TableDendroidalSet, carrier_closure, materialize, nerve
from ..operads import TableOperad, ass_operad, com_operad, end_operad
from ..trees import parse_tree, reduced_corolla

HERE = Path(__file__).parent

CHAPTER1_TREE = "(*@e((*@a*@c)@b)@d)@f"


def write(name, payload):
    path = HERE / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def build_trees():
    trees = {"chapter1_example": parse_tree(CHAPTER1_TREE).term}
    for n in range(6):
        trees[f"reduced_corolla_{n}"] = reduced_corolla(n).term
    write("trees.json", trees)


def build_operads():
    for name, P, bound in [
        ("com", com_operad(), 3),
        ("ass", ass_operad(3), 3),
        ("end01", end_operad((0, 1), 2), 2),
    ]:
        table = TableOperad.from_operad(P, bound)
        write(f"{name}.operad.json", table.to_json(element_str=P.element_str))


def build_corrupted():
    # the nerve of the associative operad on the face closure of ((**)*),
    # with one symmetric orbit removed at the top tree: the Segal map there
    # is no longer surjective, so the strict Segal check must fail
    top = parse_tree("((**)*)")
    carrier = carrier_closure([top])
    X = materialize(nerve(ass_operad(4)), carrier, name="corrupted")
    values = dict(X._values)
    top_elements = values[top]
    dropped = {top_elements[0]}
    for alpha_key, table in X._actions.items():
        if alpha_key[0] == top.key and alpha_key[1] == top.key:
            dropped |= {table[e] for e in list(dropped) if e in table}
    values[top] = tuple(e for e in top_elements if e not in dropped)
    actions = {}
    for key, table in X._actions.items():
        actions[key] = {
            k: v for k, v in table.items() if k not in dropped and v not in dropped
        }
    broken = TableDendroidalSet(X.trees, values, actions, name="corrupted")
    # serialize with stable element names
    names = {}
    for t in broken.trees:
        for i, el in enumerate(broken.values(t)):
            names[(t.key, el)] = f"{t.key}#{i}"
    payload = {
        "trees": [t.term for t in broken.trees],
        "values": {t.term: [names[(t.key, e)] for e in broken.values(t)] for t in broken.trees},
        "actions": [],
    }
    by_key = {t.key: t for t in broken.trees}
    for (skey, tkey, pairs), table in sorted(broken._actions.items(), key=str):
        payload["actions"].append(
            {
                "morphism": {
                    "source_key": by_key[skey].term,
                    "target_key": by_key[tkey].term,
                    "edge_map": {
                        ".".join(map(str, s)): ".".join(map(str, t)) for s, t in pairs
                    },
                },
                "map": {
                    names[(tkey, k)]: names[(skey, v)] for k, v in table.items()
                },
            }
        )
    write("corrupted.dendroidal.json", payload)


def main():
    build_trees()
    build_operads()
    build_corrupted()


if __name__ == "__main__":
    main()
