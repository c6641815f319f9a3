"""Hybrid XPath with data comparisons: evaluation, proofs and model constructions."""

__version__ = "0.1.0"
