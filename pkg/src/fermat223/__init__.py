"""Modular-method criteria for x^2 + y^(2l) = z^3 over prime fields."""

__version__ = "0.1.0"
