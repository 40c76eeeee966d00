"""Exact and asymptotic toolkit for polynomial-intersection satisfaction
bounds over prime fields."""

__version__ = "0.1.0"
