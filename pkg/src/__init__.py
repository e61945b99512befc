"""Subexponential proof-search kernel"""

__version__ = "0.1.0"
