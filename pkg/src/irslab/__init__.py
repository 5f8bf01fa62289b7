"""Simulation toolkit for intelligent-reflecting-surface (IRS) aided links."""

__version__ = "0.1.0"
