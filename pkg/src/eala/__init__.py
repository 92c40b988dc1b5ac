"""Toroidal extended affine Lie algebras of nullity two and their loop modules, in exact arithmetic."""

__version__ = "0.1.0"
