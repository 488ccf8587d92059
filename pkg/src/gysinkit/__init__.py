"""Exact homological algebra for Morse-Bott filtered complexes built from Reeb orbit data."""

__version__ = "0.1.0"
