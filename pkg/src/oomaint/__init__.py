"""Maintainability models (MI, ARiSA, SQALE) for object-oriented source code."""

__version__ = "0.1.0"
