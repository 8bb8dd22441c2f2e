"""Connectivity and dimension bookkeeping for the truncation tower of
derived mapping spaces between little-disk operads.

For source dimension n, codimension d and truncation level k, the k-th layer
of the tower is ((k-1)(d-2)+1)-connected; the whole mapping space is (d-1)-
connected once d >= 2.  The layer number decomposes as the difference of two
inputs: the connectivity (k-1)(n+d-2) of the fiber of the map into the
coboundary object at level k for the target operad, minus the top relative
cell dimension n(k-1)-1 of the boundary inclusion for the source.

Connectivity is tracked as a plain integer with no floor: a value c means
homotopy groups vanish up to degree c, and c < 0 makes no claim.  Everything
here is exact integer arithmetic and fully reentrant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class TowerQuery:
    """A (source dimension, codimension, truncation level) triple."""

    n: int
    d: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("source dimension must be >= 1", {"n": self.n})
        if self.d < 0:
            raise DomainError("codimension must be >= 0", {"d": self.d})
        if self.k < 2:
            raise DomainError("truncation level must be >= 2", {"k": self.k})


def layer_connectivity(q: TowerQuery) -> int:
    """Connectivity of the k-th layer of the tower: (k-1)(d-2)+1."""
    return (q.k - 1) * (q.d - 2) + 1


def global_connectivity(d: int) -> int:
    """Connectivity d-1 of the whole mapping space; requires d >= 2."""
    if d < 2:
        raise DomainError(
            "global connectivity is only computed for codimension >= 2",
            {"d": d},
        )
    return d - 1


def cobound_connectivity(k: int, n: int) -> int:
    """Connectivity (k-1)(n-2)+1 of the map from level k into the coboundary
    object in ambient dimension n."""
    if k < 2:
        raise DomainError("level must be >= 2", {"k": k})
    if n < 1:
        raise DomainError("ambient dimension must be >= 1", {"n": n})
    return (k - 1) * (n - 2) + 1


def relative_cell_dim(n: int, k: int) -> int:
    """Largest dimension n(k-1)-1 of relative cells of the boundary
    inclusion at level k."""
    if n < 1:
        raise DomainError("ambient dimension must be >= 1", {"n": n})
    if k < 2:
        raise DomainError("level must be >= 2", {"k": k})
    return n * (k - 1) - 1


@dataclass(frozen=True)
class LayerAudit:
    query: TowerQuery
    cobound: int  # fiber connectivity of the coboundary comparison
    celldim: int  # top relative cell dimension of the boundary inclusion
    layer: int

    def to_json(self):
        return {
            "n": self.query.n,
            "d": self.query.d,
            "k": self.query.k,
            "layer": self.layer,
            "parts": {"cobound": self.cobound, "celldim": self.celldim},
            "note": "no claim below degree 0" if self.layer < 0 else "",
        }


def layer_from_parts(q: TowerQuery) -> LayerAudit:
    """The layer connectivity assembled from its two inputs.

    The fiber of level-k into the coboundary object for the target (ambient
    dimension n+d) is (k-1)(n+d-2)-connected, one less than the map itself;
    subtracting the relative cell dimension n(k-1)-1 of the source boundary
    inclusion gives the layer connectivity, and the difference collapses to
    (k-1)(d-2)+1 identically.
    """
    fiber = cobound_connectivity(q.k, q.n + q.d) - 1
    cells = relative_cell_dim(q.n, q.k)
    layer = fiber - cells
    audit = LayerAudit(q, fiber, cells, layer)
    if layer != layer_connectivity(q):
        raise DomainError(
            "layer decomposition mismatch",
            {"query": (q.n, q.d, q.k), "parts": (fiber, cells)},
        )
    return audit


def connectivity_table(n: int, d: int, k_max: int):
    """Layer audits for k = 2..k_max at fixed (n, d)."""
    return [layer_from_parts(TowerQuery(n, d, k)) for k in range(2, k_max + 1)]
