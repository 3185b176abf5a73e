"""Exact construction and verification of permutation-twisted modules
for tensor powers of a vertex operator algebra, instantiated on the
rank-1 free boson."""

__version__ = "0.1.0"
