"""Karhunen-Loeve emulation of stochastic simulators."""

__version__ = "1.0.0"
