"""The trusted-party distributed inner-product functionality."""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldElement, Rng, fe_sample, modulus
from .linalg import inner_product
from .membership import LAMBDA, RawVector, check_vector


@dataclass(frozen=True)
class IdealOutcome:
    """Output shares; both are ``LAMBDA`` on abort."""

    w1: object
    w2: object

    @property
    def kind(self) -> str:
        return "abort" if self.w1 is LAMBDA else "shares"


def ideal_dip(x1: RawVector, x2: RawVector, k: int, q, rng: Rng,
              u: int | None = None) -> IdealOutcome:
    """Run the TTP on raw inputs from P1 (``x1``) and P2 (``x2``).

    ``u`` forces the mask given to P1; by default it is drawn from ``rng``.
    """
    m = modulus(q)
    v1 = check_vector(x1, k, m)
    v2 = check_vector(x2, k, m)
    if v1 is None or v2 is None:
        return IdealOutcome(LAMBDA, LAMBDA)
    w1 = fe_sample(rng, m) if u is None else FieldElement(u, m)
    return IdealOutcome(w1, inner_product(v1, v2) - w1)
