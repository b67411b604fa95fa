"""Exact tools for intersecting families of subspaces in PG(n, q) and AG(n, q)."""

__version__ = "0.1.0"
