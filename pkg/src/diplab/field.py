"""Prime-field elements, moduli and the seeded sampler."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_MODULUS = 2**31


class ModulusMismatch(ValueError):
    """Operands belong to different fields."""


class InversionOfZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3_215_031_751."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldModulus:
    """A prime ``q`` with ``2 <= q < 2**31``."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        q = int(q)
        if not 2 <= q < MAX_MODULUS:
            raise ValueError(f"modulus {q} outside [2, 2**31)")
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("FieldModulus is immutable")

    def __eq__(self, other):
        return isinstance(other, FieldModulus) and other.q == self.q

    def __hash__(self):
        return hash(("FieldModulus", self.q))

    def __int__(self):
        return self.q

    def __repr__(self):
        return f"FieldModulus({self.q})"

    def __reduce__(self):
        return (modulus, (self.q,))


@lru_cache(maxsize=None)
def _modulus(q: int) -> FieldModulus:
    return FieldModulus(q)


def modulus(q) -> FieldModulus:
    """Coerce an int or FieldModulus to a (cached) FieldModulus."""
    if isinstance(q, FieldModulus):
        return q
    return _modulus(int(q))


class FieldElement:
    """Canonical residue ``value`` in ``[0, q)``."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, q):
        m = modulus(q)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "value", int(value) % m.q)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def q(self) -> int:
        return self.modulus.q

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"F_{self.q} vs F_{other.q}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement(other, self.modulus)
        return self * fe_inv(other)

    def inverse(self) -> FieldElement:
        return fe_inv(self)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"FieldElement({self.value}, q={self.q})"

    def __reduce__(self):
        return (FieldElement, (self.value, self.modulus.q))


def fe_canon(v: int, q) -> FieldElement:
    return FieldElement(v, q)


def fe_arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Dispatch ``add``/``sub``/``mul``/``neg`` by name."""
    if op == "neg":
        if b is not None:
            raise TypeError("neg takes one operand")
        return -a
    if b is None:
        raise TypeError(f"{op} takes two operands")
    if not isinstance(b, FieldElement) or a.modulus != b.modulus:
        raise ModulusMismatch(f"operands of {op} must share a modulus")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown field op {op!r}")


def fe_inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise InversionOfZero(f"0 has no inverse in F_{a.q}")
    return FieldElement(pow(a.value, -1, a.q), a.modulus)


class Rng:
    """Seeded PCG64 stream; field draws use numpy's unbiased bounded sampler.

    ``Generator.integers`` rejects out-of-range candidates (Lemire's method),
    so residues are uniform on ``[0, q)`` with no modulo bias.
    """

    def __init__(self, seed: int, stream: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.stream = tuple(int(s) for s in stream)
        ss = np.random.SeedSequence(seed, spawn_key=self.stream)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def derive(self, *key: int) -> Rng:
        """Independent child stream; the SeedSequence hash mixes seed and key."""
        return Rng(self.seed, self.stream + key)

    def field_int(self, q: int) -> int:
        return int(self._gen.integers(0, q))

    def field_array(self, q: int, size) -> np.ndarray:
        return self._gen.integers(0, q, size=size, dtype=np.int64)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def fe_sample(rng: Rng, q) -> FieldElement:
    m = modulus(q)
    return FieldElement(rng.field_int(m.q), m)
