"""Connectivity bookkeeping for the truncation tower of mapping spaces
between little-disk operads.

    python demos/04_connectivity_tower.py
"""

from dendrokit.connectivity import (
    TowerQuery,
    connectivity_table,
    global_connectivity,
    layer_connectivity,
    layer_from_parts,
)
from dendrokit.strata import fm_dimension

print("== layer connectivity (k-1)(d-2)+1 ==")
print("codimension d across the columns, truncation level k down the rows\n")
header = "k\\d " + "".join(f"{d:>5}" for d in range(2, 8))
print(header)
for k in range(2, 9):
    row = f"{k:<4}" + "".join(
        f"{layer_connectivity(TowerQuery(1, d, k)):>5}" for d in range(2, 8)
    )
    print(row)

print("\nlowest layer sits at k=2, giving the global bound d-1:")
for d in range(2, 7):
    lowest = min(layer_connectivity(TowerQuery(1, d, k)) for k in range(2, 40))
    print(f"  d={d}: min layer {lowest}, whole mapping space {global_connectivity(d)}-connected")

print("\n== the two inputs behind each layer ==")
print("fiber connectivity into the coboundary object minus the top relative")
print("cell dimension of the boundary inclusion:\n")
for audit in connectivity_table(2, 3, 8):
    q = audit.query
    print(
        f"  n={q.n} d={q.d} k={q.k}: {audit.cobound} - {audit.celldim} = {audit.layer}"
    )

print("\nthe cell dimension is exactly the stratification top dimension:")
for k in range(2, 7):
    audit = layer_from_parts(TowerQuery(3, 2, k))
    assert audit.celldim == fm_dimension(3, k)
    print(f"  level {k}: relative cells up to dimension {audit.celldim} = n(k-1)-1")
