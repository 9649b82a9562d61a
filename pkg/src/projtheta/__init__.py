"""Projection theta numbers and related colouring bounds."""

__version__ = "0.1.0"
