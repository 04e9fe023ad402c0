"""Ordinal bounds for finite-image transfinite words over well partial orders."""

from finseq.ordinal import OMEGA, ONE, ZERO, Ordinal, as_ordinal

__version__ = "0.1.0"

__all__ = ["Ordinal", "ZERO", "ONE", "OMEGA", "as_ordinal", "__version__"]
