"""Exact-arithmetic engine for fractional-bubble weighted integrals,
energy polynomials and discriminant sweeps, with numeric oracles."""

__version__ = "0.1.0"
