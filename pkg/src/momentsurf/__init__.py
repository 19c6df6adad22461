"""Symbolic replay and numerical checks for stationary surfaces of the moment energy."""

__version__ = "0.1.0"
