"""Exact computations of twisted Real quasi-elliptic cohomology of finite graded groups."""

__version__ = "0.1.0"
