"""Exact arithmetic for vector-valued Eisenstein coefficients, Heegner divisor
algebra, and rational polyhedral cone certification."""

__version__ = "0.1.0"
