"""Numerical toolkit for sections of convex bodies."""
__version__ = "0.1.0"
