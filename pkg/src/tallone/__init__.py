"""Exact classification data for tall complexity-one torus actions."""

__version__ = "0.1.0"
