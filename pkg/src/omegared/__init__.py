"""Omega-automata models, coding functions and the effective reduction pipeline."""

__version__ = "0.1.0"
