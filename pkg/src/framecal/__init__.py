"""Continuous frames on atomic measure spaces: duals, approximate duals and wavelet tightness."""

__version__ = "0.1.0"
