"""Exact tropical-algebra toolkit for translation-invariant Bell inequalities on rings."""

__version__ = "0.1.0"
