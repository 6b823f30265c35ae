"""Exact arithmetic for hypergeometric KP tau functions, their change of
variables to cohomological field theories, and topological recursion."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
