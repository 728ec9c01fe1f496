"""Exact-arithmetic toolkit for cyclic and conditional non-commutative probability."""

__version__ = "0.1.0"
