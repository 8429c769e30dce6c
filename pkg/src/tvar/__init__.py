"""Divisors on complexity-one T-varieties: fansy divisors, support functions,
divisorial polytopes, positivity and Fujita freeness checks."""

__version__ = "0.1.0"
