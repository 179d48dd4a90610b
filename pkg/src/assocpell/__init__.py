"""Certified reproduction of repdigit Diophantine results for associated Pell numbers."""

__version__ = "0.1.0"
