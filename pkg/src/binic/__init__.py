"""Rings, ideals and pairs of symmetric matrices attached to integral binary n-ic forms."""

__version__ = "0.1.0"
