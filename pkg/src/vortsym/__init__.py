"""Exact Lie-algebra invariants and point-symmetry checks for the barotropic vorticity equation."""

__version__ = "0.1.0"
