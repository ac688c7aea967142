"""Sturmian words, the U construction, factor complexity and monomial word algebras."""

__version__ = "0.1.0"
