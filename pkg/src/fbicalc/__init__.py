"""Numerical toolkit for metaplectic FBI transforms and analytic microlocal analysis."""

__version__ = "0.1.0"
