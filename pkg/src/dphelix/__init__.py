"""Numerical exceptional collections on del Pezzo surfaces and their seeds."""
__version__ = "0.1.0"
