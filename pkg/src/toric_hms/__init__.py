"""Computational check of mirror symmetry for toric del Pezzo surfaces."""

__version__ = "0.1.0"
