"""Exact finite-group algebra for G-equivariant cohomological field theories at degree zero."""

__version__ = "0.1.0"
