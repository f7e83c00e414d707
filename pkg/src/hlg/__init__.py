"""Proof search, sentence recognition and proof-net planarity for the Lambek-Grishin family."""

__version__ = "0.1.0"
