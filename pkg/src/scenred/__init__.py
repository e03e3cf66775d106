"""Scenario reduction toolkit for two-stage stochastic programs."""

__version__ = "0.1.0"
