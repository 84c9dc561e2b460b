"""Finite quandles, constant cocycle cohomology, and simple-connectedness."""

__version__ = "1.0.0"
