"""Exact short words for elements of SL(n, K) over generating sets with a transvection."""

from .algebra import GF, QQ, Field, Matrix
from .transvection import IDENTITY, Transvection, TransvectionGroup, recognize

__version__ = "0.1.0"

__all__ = ["GF", "QQ", "Field", "Matrix", "IDENTITY", "Transvection", "TransvectionGroup", "recognize"]
