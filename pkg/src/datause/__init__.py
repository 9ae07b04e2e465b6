"""Toolkit for detecting dataset citations and mentions in scientific papers."""

__version__ = "0.1.0"
