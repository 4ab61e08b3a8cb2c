"""Steady supersonic Euler-Poisson flow in a two-dimensional nozzle."""

__version__ = "0.1.0"
