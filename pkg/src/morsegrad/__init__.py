"""Discrete gradients for multi-parameter sublevel filtrations and their invariants."""

__version__ = "0.1.0"
