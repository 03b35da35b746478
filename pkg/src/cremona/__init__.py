"""Exact-arithmetic toolkit for Cremona transformations of projective space."""

__version__ = "0.1.0"
