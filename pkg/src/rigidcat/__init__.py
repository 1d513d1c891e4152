"""Finite-category laboratory: composition tables, Karoubi envelopes,
Grothendieck topology censuses, and the split-epimorphism game."""

__version__ = "0.1.0"

from .fincat import FinCategory, validate_category

__all__ = ["FinCategory", "validate_category", "__version__"]
