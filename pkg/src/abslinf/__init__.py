"""Exact rational machinery for curved L-infinity algebras, mc^n and their nerves."""
__version__ = "0.1.0"
