"""Exact combinatorics of Kac-Moody groups: Weyl groups, roots, twin buildings, descent and lattices."""

__version__ = "0.1.0"
