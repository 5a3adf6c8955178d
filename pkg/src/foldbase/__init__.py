"""Integral affine bases with folds: construction, checks and invariants."""

__version__ = "0.1.0"
