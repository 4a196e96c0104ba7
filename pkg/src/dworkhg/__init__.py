"""Dwork-type p-adic hypergeometric functions, unit roots and related checks."""

__version__ = "0.1.0"
