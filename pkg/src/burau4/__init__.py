"""Burau representation of the positive braid monoid on four strands.

Tools for computing the reduced Burau matrix of a four-strand braid over
Laurent polynomials, enumerating the path expansion of its entries, and
checking, braid by braid, whether the matrix detects non-triviality modulo
a prime.
"""

__version__ = "0.1.0"
