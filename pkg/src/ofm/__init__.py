"""Finite-carrier laboratory for the open filter monad on T0 spaces and its
algebras, the continuous lattices."""

__version__ = "0.1.0"
