"""Constructive Hamiltonicity for tough (P4 + P1)-free graphs."""

__version__ = "0.1.0"
