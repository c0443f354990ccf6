"""Algebraic curvature models: Jacobi-Ricci commuting classification and the complexification construction."""
__version__ = "0.1.0"
