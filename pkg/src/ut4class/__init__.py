"""Exact classification toolkit for finite-weight induced representations
of the group of 4x4 upper unitriangular integer matrices."""

__version__ = "0.1.0"
