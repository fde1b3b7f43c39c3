"""Degree-wise invariant rings of linear algebraic groups over GF(p),
with a detector for invariant rings that are not Cohen-Macaulay."""

__version__ = "0.1.0"
