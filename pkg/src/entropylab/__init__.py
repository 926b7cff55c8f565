"""Verification laboratory for scalar conservation laws with convex flux."""

__version__ = "0.1.0"
