"""Distributed inner product in the preprocessing model, and the attack on it."""

from ._kernels import BACKEND
from .field import FieldElement, FieldModulus, InversionOfZero, ModulusMismatch, Rng
from .linalg import FieldMatrix, FieldVector, SolutionSet, inner_product, solve
from .membership import LAMBDA

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FieldElement",
    "FieldMatrix",
    "FieldModulus",
    "FieldVector",
    "InversionOfZero",
    "LAMBDA",
    "ModulusMismatch",
    "Rng",
    "SolutionSet",
    "inner_product",
    "solve",
]
