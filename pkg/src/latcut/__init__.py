"""Integral minimization of convex functions by lattice-aware cutting planes."""
__version__ = "0.1.0"
