"""Rank-2 bundles from transition cocycles, double covers and the conic cover of the plane."""

__version__ = "0.1.0"
