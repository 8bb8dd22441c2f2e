import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dendrokit.connectivity import (
    TowerQuery,
    cobound_connectivity,
    connectivity_table,
    global_connectivity,
    layer_connectivity,
    layer_from_parts,
    relative_cell_dim,
)
from dendrokit.errors import DomainError
from dendrokit.strata import fm_dimension


def test_layer_values():
    assert layer_connectivity(TowerQuery(1, 2, 2)) == 1
    assert layer_connectivity(TowerQuery(1, 4, 3)) == 5


def test_layer_minimum_over_levels():
    assert min(layer_connectivity(TowerQuery(1, 5, k)) for k in range(2, 51)) == 4


def test_global_values():
    assert global_connectivity(2) == 1
    assert global_connectivity(3) == 2


def test_global_needs_codimension_two():
    with pytest.raises(DomainError):
        global_connectivity(1)


def test_cobound_values():
    assert cobound_connectivity(2, 3) == 2
    assert cobound_connectivity(4, 2) == 1


def test_relative_cell_values():
    assert relative_cell_dim(3, 2) == 2
    assert relative_cell_dim(1, 3) == 1


def test_cell_dimension_matches_stratification_top_dimension():
    for n in range(1, 5):
        for k in range(2, 7):
            assert relative_cell_dim(n, k) == fm_dimension(n, k)


def test_audit_example():
    audit = layer_from_parts(TowerQuery(2, 3, 2))
    assert audit.cobound == 3 and audit.celldim == 1
    assert audit.layer == 2 == layer_connectivity(audit.query)


def test_audit_low_dimension():
    assert layer_from_parts(TowerQuery(1, 2, 5)).layer == 1


def test_grid_identity():
    for n in range(1, 7):
        for d in range(0, 7):
            for k in range(2, 9):
                q = TowerQuery(n, d, k)
                audit = layer_from_parts(q)
                assert audit.layer == layer_connectivity(q)
                assert audit.layer == audit.cobound - audit.celldim


def test_monotone_in_level_for_positive_codimension():
    for d in range(2, 7):
        values = [layer_connectivity(TowerQuery(1, d, k)) for k in range(2, 30)]
        assert values == sorted(values)
        assert min(values) == d - 1


def test_independent_of_source_dimension():
    for d in range(0, 6):
        for k in range(2, 9):
            vals = {layer_connectivity(TowerQuery(n, d, k)) for n in range(1, 7)}
            assert len(vals) == 1


def test_table():
    rows = connectivity_table(2, 3, 5)
    assert [a.query.k for a in rows] == [2, 3, 4, 5]
    assert [a.layer for a in rows] == [2, 3, 4, 5]


def test_query_validation():
    with pytest.raises(DomainError):
        TowerQuery(0, 2, 2)
    with pytest.raises(DomainError):
        TowerQuery(1, 2, 1)
    with pytest.raises(DomainError):
        TowerQuery(1, -1, 2)


@given(
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=0, max_value=40),
    st.integers(min_value=2, max_value=40),
)
@settings(max_examples=300, deadline=None)
def test_decomposition_identity_property(n, d, k):
    # (k-1)(n+d-2) - (n(k-1)-1) collapses to (k-1)(d-2)+1
    audit = layer_from_parts(TowerQuery(n, d, k))
    assert audit.layer == (k - 1) * (d - 2) + 1
