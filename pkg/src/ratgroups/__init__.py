"""Rational subsets of finitely generated groups, computed exactly."""

__version__ = "0.1.0"
