"""Workbench for a tweet misinformation-classification pipeline."""

__version__ = "0.1.0"
