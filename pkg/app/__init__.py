"""Monomial decomposition of characters of fixed-point groups of involutions."""
