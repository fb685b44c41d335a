"""Exact search and verification tools for Cameron-Liebler line classes in PG(3,q)."""

__version__ = "0.1.0"
