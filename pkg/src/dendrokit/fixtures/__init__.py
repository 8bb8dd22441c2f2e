"""Bundled data: example trees, operad tables, and a deliberately corrupted
dendroidal set for exercising the Segal checker's failure path."""

import json
from importlib import resources

from ..dendroidal import TableDendroidalSet
from ..errors import DomainError
from ..operads import (
    TableOperad,
    ass_operad,
    com_operad,
    end_operad,
    free_operad,
    one_binary_generator,
)

BUILTIN_OPERADS = ("com", "ass", "end01", "free-binary")
BUNDLED_FILES = (
    "trees.json",
    "com.operad.json",
    "ass.operad.json",
    "end01.operad.json",
    "corrupted.dendroidal.json",
)


def fixture_text(name):
    return resources.files("dendrokit.fixtures").joinpath(name).read_text()


def load_fixture_json(name):
    return json.loads(fixture_text(name))


def bundled_trees():
    """Named example tree terms (the six-edge running example and the
    stump-capped corollas)."""
    return load_fixture_json("trees.json")


def builtin_operad(name, arity_bound=None):
    if name == "com":
        return com_operad()
    if name == "ass":
        return ass_operad(arity_bound or 4)
    if name == "end01":
        return end_operad((0, 1), arity_bound or 2)
    if name == "free-binary":
        return free_operad(one_binary_generator(), arity_bound or 4)
    raise DomainError("unknown builtin operad", {"name": name, "known": BUILTIN_OPERADS})


def load_operad(spec, arity_bound=None):
    """An operad from a builtin name, a bundled ``*.operad.json`` fixture
    name, or a path to an operad JSON file."""
    if spec in BUILTIN_OPERADS:
        return builtin_operad(spec, arity_bound)
    if spec in BUNDLED_FILES:
        return TableOperad.from_json(load_fixture_json(spec))
    try:
        with open(spec) as fh:
            return TableOperad.from_json(json.load(fh))
    except FileNotFoundError:
        raise DomainError(
            "operad not found",
            {"spec": spec, "builtins": BUILTIN_OPERADS, "bundled": BUNDLED_FILES},
        )


def load_dendroidal(spec):
    """A TableDendroidalSet from a bundled fixture name or a file path."""
    if spec in BUNDLED_FILES:
        return TableDendroidalSet.from_json(load_fixture_json(spec), name=spec)
    try:
        with open(spec) as fh:
            return TableDendroidalSet.from_json(json.load(fh), name=spec)
    except FileNotFoundError:
        raise DomainError("dendroidal set not found", {"spec": spec})
