"""rosserlab: an executable workbench for recursion-theoretic separation.

A partial-recursive machine with an acceptable numbering, the s-m-n and
double recursion theorems as program transformers, the disjoint-pair
reduction algebra, and a checkable proof system for the weak arithmetic R
in which Rosser-style separating formulas are constructed and certified at
desk scale.
"""

from __future__ import annotations

# Importing the subpackages registers every extern before the registry is
# frozen by the first evaluation.
from . import coding, kernel  # noqa: F401
from .logic import theories as _theories  # noqa: F401

__version__ = "0.1.0"
