"""Exact decision procedures for nilpotent actions and R-good/R-bad classifying spaces."""

__version__ = "0.1.0"
