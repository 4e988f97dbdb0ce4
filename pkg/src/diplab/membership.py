"""Unvalidated wire values, the abort symbol, and F_q^k membership checks."""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .field import FieldElement, FieldModulus, modulus
from .linalg import FieldVector

RawVector = Tuple[int, ...]


class _Lambda:
    """The abort output.  Not a field element and never equal to one."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "LAMBDA"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Lambda, ())


LAMBDA = _Lambda()


def is_lambda(x) -> bool:
    return x is LAMBDA


def raw(values) -> RawVector:
    """Strip a FieldVector (or any int sequence) down to a tuple of ints."""
    if isinstance(values, FieldVector):
        return tuple(values.tolist())
    return tuple(int(v) for v in values)


def in_field(v, q: FieldModulus) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and 0 <= v < q.q


def check_vector(values: RawVector, k: int, q) -> FieldVector | None:
    """Return the vector if it lies in F_q^k, else ``None``."""
    m = modulus(q)
    if values is None or len(values) != k:
        return None
    if not all(in_field(v, m) for v in values):
        return None
    return FieldVector(list(values), m)


def check_scalar(v, q) -> FieldElement | None:
    m = modulus(q)
    if not in_field(v, m):
        return None
    return FieldElement(v, m)
