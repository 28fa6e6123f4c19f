"""Exact computations with the quantum group U_q(G2) and its 7-dimensional module."""

__version__ = "0.1.0"
