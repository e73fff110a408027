"""Slicing-based context extraction and graph-edit repair toolkit."""

__version__ = "0.1.0"
