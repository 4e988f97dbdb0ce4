"""Vectors and matrices over F_q, and exact Gaussian elimination."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .field import FieldElement, FieldModulus, ModulusMismatch, modulus


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class FieldVector:
    """Length-k vector of canonical residues sharing one modulus."""

    __slots__ = ("data", "modulus")

    def __init__(self, values, q):
        m = modulus(q)
        if isinstance(values, np.ndarray) and values.dtype == np.int64:
            arr = values % m.q
        else:
            arr = np.array([int(v) % m.q for v in values], dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("FieldVector needs a non-empty 1-d sequence")
        object.__setattr__(self, "data", _frozen(arr))
        object.__setattr__(self, "modulus", m)

    @classmethod
    def _wrap(cls, arr: np.ndarray, m: FieldModulus) -> FieldVector:
        # arr must already be canonical int64
        self = object.__new__(cls)
        object.__setattr__(self, "data", _frozen(arr))
        object.__setattr__(self, "modulus", m)
        return self

    @classmethod
    def zeros(cls, k: int, q) -> FieldVector:
        return cls._wrap(np.zeros(k, dtype=np.int64), modulus(q))

    def __setattr__(self, name, value):
        raise AttributeError("FieldVector is immutable")

    @property
    def q(self) -> int:
        return self.modulus.q

    def __len__(self):
        return self.data.shape[0]

    def __getitem__(self, i) -> FieldElement:
        return FieldElement(int(self.data[i]), self.modulus)

    def __iter__(self):
        for v in self.data:
            yield FieldElement(int(v), self.modulus)

    def tolist(self) -> list[int]:
        return [int(v) for v in self.data]

    def _check(self, other: FieldVector):
        if not isinstance(other, FieldVector):
            raise TypeError("expected FieldVector")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"F_{self.q} vs F_{other.q}")
        if len(other) != len(self):
            raise ValueError(f"length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: FieldVector) -> FieldVector:
        return vec_arith("add", self, other)

    def __sub__(self, other: FieldVector) -> FieldVector:
        return vec_arith("sub", self, other)

    def __neg__(self) -> FieldVector:
        return FieldVector._wrap((-self.data) % self.q, self.modulus)

    def scale(self, c) -> FieldVector:
        return FieldVector._wrap((self.data * (int(c) % self.q)) % self.q, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, FieldVector):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and len(self) == len(other)
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.q, self.data.tobytes()))

    def __repr__(self):
        return f"FieldVector({self.tolist()}, q={self.q})"

    def __reduce__(self):
        return (FieldVector, (self.tolist(), self.q))


class FieldMatrix:
    """Row-major m x n matrix over F_q."""

    __slots__ = ("data", "modulus")

    def __init__(self, rows, q):
        m = modulus(q)
        if isinstance(rows, np.ndarray) and rows.dtype == np.int64:
            arr = rows % m.q
        else:
            arr = np.array([[int(v) % m.q for v in row] for row in rows], dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("FieldMatrix needs a non-empty rectangular 2-d sequence")
        object.__setattr__(self, "data", _frozen(arr))
        object.__setattr__(self, "modulus", m)

    @classmethod
    def identity(cls, n: int, q) -> FieldMatrix:
        return cls(np.eye(n, dtype=np.int64), q)

    @classmethod
    def from_columns(cls, cols: Sequence[FieldVector]) -> FieldMatrix:
        if not cols:
            raise ValueError("need at least one column")
        m = cols[0].modulus
        for c in cols:
            cols[0]._check(c)
        return cls(np.stack([c.data for c in cols], axis=1), m)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def column(self, j: int) -> FieldVector:
        return FieldVector._wrap(self.data[:, j].copy(), self.modulus)

    def row(self, i: int) -> FieldVector:
        return FieldVector._wrap(self.data[i].copy(), self.modulus)

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix(np.ascontiguousarray(self.data.T), self.modulus)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.q, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FieldMatrix({self.tolist()}, q={self.q})"

    def __reduce__(self):
        return (FieldMatrix, (self.tolist(), self.q))


def inner_product(x: FieldVector, y: FieldVector) -> FieldElement:
    x._check(y)
    return FieldElement(_kernels.inner_mod(x.data, y.data, x.q), x.modulus)


def vec_arith(op: str, a: FieldVector, b: FieldVector) -> FieldVector:
    a._check(b)
    if op == "add":
        out = a.data + b.data
    elif op == "sub":
        out = a.data - b.data
    else:
        raise ValueError(f"unknown vector op {op!r}")
    return FieldVector._wrap(out % a.q, a.modulus)


def vec_mat_mul(x: FieldVector, Y: FieldMatrix) -> FieldVector:
    """Row vector times matrix; entry i is the inner product with column i."""
    if not isinstance(Y, FieldMatrix) or Y.modulus != x.modulus:
        raise ModulusMismatch("vector and matrix must share a modulus")
    if len(x) != Y.rows:
        raise ValueError(f"cannot multiply 1x{len(x)} by {Y.rows}x{Y.cols}")
    return FieldVector._wrap(
        np.asarray(_kernels.matvec_mod(x.data, Y.data, x.q), dtype=np.int64), x.modulus
    )


def mat_vec_mul(A: FieldMatrix, x: FieldVector) -> FieldVector:
    """``A @ x`` for a column vector ``x``."""
    return vec_mat_mul(x, A.T)


@dataclass(frozen=True)
class SolutionSet:
    """Solutions of ``A x = b``.

    ``kind`` is ``"unique"``, ``"affine"`` or ``"inconsistent"``.  Every
    solution is ``particular + sum(c_i * nullspace_basis[i])``.
    """

    kind: str
    rank: int
    particular: FieldVector | None = None
    nullspace_basis: tuple[FieldVector, ...] = field(default_factory=tuple)

    @property
    def dimension(self) -> int:
        return len(self.nullspace_basis)

    def contains(self, x: FieldVector) -> bool:
        """Exact membership test: is ``x - particular`` in the span of the basis?"""
        if self.kind == "inconsistent":
            return False
        diff = x - self.particular
        if not self.nullspace_basis:
            return not diff.data.any()
        basis = FieldMatrix.from_columns(list(self.nullspace_basis))
        aug = np.concatenate([basis.data, diff.data[:, None]], axis=1)
        return rank(FieldMatrix(aug, x.modulus)) == basis.cols

    def enumerate(self):
        """Yield every solution; only sensible for tiny fields."""
        if self.kind == "inconsistent":
            return
        q, d = self.particular.q, self.dimension
        for coeffs in np.ndindex(*(q,) * d):
            v = self.particular
            for c, b in zip(coeffs, self.nullspace_basis):
                v = v + b.scale(c)
            yield v


def rref(A: FieldMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot columns of ``A``."""
    work = np.array(A.data, dtype=np.int64, copy=True)
    pivots = _kernels.rref_mod(work, A.q)
    return work, np.asarray(pivots, dtype=np.int64)


def rank(A: FieldMatrix) -> int:
    return len(rref(A)[1])


def solve(A: FieldMatrix, b: FieldVector) -> SolutionSet:
    """Solve ``A x = b`` exactly by Gauss-Jordan elimination."""
    if A.modulus != b.modulus:
        raise ModulusMismatch("system and right-hand side must share a modulus")
    if A.rows != len(b):
        raise ValueError(f"{A.rows} equations but rhs of length {len(b)}")
    q, n = A.q, A.cols
    aug = np.concatenate([A.data, b.data[:, None]], axis=1)
    red, pivots = rref(FieldMatrix(aug, A.modulus))
    r = int(np.count_nonzero(pivots < n))
    if r < len(pivots):  # a pivot landed in the rhs column
        return SolutionSet("inconsistent", rank=r)

    particular = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(pivots):
        particular[c] = red[row, n]

    pivot_set = set(int(c) for c in pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = (-red[row, f]) % q
        # leading nonzero entry scaled to 1 gives one canonical basis representative
        lead = int(v[np.flatnonzero(v)[0]])
        v = (v * pow(lead, -1, q)) % q
        basis.append(FieldVector._wrap(v, A.modulus))

    kind = "unique" if not basis else "affine"
    return SolutionSet(kind, rank=r, particular=FieldVector._wrap(particular, A.modulus),
                       nullspace_basis=tuple(basis))


def is_nonsingular(A: FieldMatrix) -> bool:
    if A.rows != A.cols:
        raise ValueError(f"is_nonsingular needs a square matrix, got {A.rows}x{A.cols}")
    return rank(A) == A.rows


def as_vector(values: Iterable[int], q) -> FieldVector:
    return FieldVector(list(values), q)
