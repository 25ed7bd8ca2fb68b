"""Exact computation and certification of local nilpotence for derivations and operators."""

__version__ = "0.1.0"
