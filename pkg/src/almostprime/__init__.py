"""Numerical workbench for the least almost-prime P2 in arithmetic progressions."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
