"""Exact-arithmetic workbench for 2-tilting bundles on Geigle-Lenzing
projective spaces of weight type (2,2,p,q)."""

__version__ = "0.1.0"

from .glgroup import GLContext, GLElement

__all__ = ["GLContext", "GLElement", "__version__"]
