"""dendrokit: exact combinatorics of rooted trees, colored operads,
dendroidal sets, Fulton-MacPherson stratification posets, and the
connectivity bookkeeping of little-disk mapping-space towers."""

__version__ = "0.1.0"
