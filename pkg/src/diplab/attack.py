"""What a semi-honest P2 learns about P1's input, and how to use it.

From ``x1 = x + x0`` and ``s0 = <x0, y0>`` P2 obtains one linear equation
``<x, y0> = <x1, y0> - s0`` per session.  One session with ``k = 1`` reveals
``x`` outright; ``k`` sessions against the same ``x`` reveal it whenever the
stacked masks are nonsingular.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import FieldElement, Rng, fe_sample
from .linalg import FieldMatrix, FieldVector, SolutionSet, inner_product, is_nonsingular, solve
from .protocol import P2View


@dataclass(frozen=True)
class LinearEquation:
    """``<x, coeffs> = rhs``."""

    coeffs: FieldVector
    rhs: FieldElement

    def satisfied_by(self, x: FieldVector) -> bool:
        return inner_product(x, self.coeffs) == self.rhs


def extract_equation(view: P2View) -> LinearEquation:
    return LinearEquation(view.y0, inner_product(view.x1, view.y0) - view.s0)


def recover_k1(view: P2View) -> FieldElement | None:
    """P1's scalar input, or ``None`` when the mask ``y0`` is zero."""
    if view.k != 1:
        raise ValueError(f"recover_k1 needs k = 1, got k = {view.k}")
    eq = extract_equation(view)
    y0 = eq.coeffs[0]
    if y0.value == 0:
        return None
    return eq.rhs / y0


def build_system(views: Sequence[P2View]) -> tuple[FieldMatrix, FieldVector]:
    """Masks as columns of ``Y0`` and right-hand sides as ``q0``, so ``x Y0 = q0``."""
    if not views:
        raise ValueError("need at least one view")
    k, q = views[0].k, views[0].q
    for v in views:
        if v.k != k or v.q != q:
            raise ValueError("views disagree on k or q")
    eqs = [extract_equation(v) for v in views]
    Y0 = FieldMatrix.from_columns([e.coeffs for e in eqs])
    q0 = FieldVector([e.rhs.value for e in eqs], q)
    return Y0, q0


def _fe_str(v: FieldVector | None):
    return None if v is None else [str(x) for x in v.tolist()]


@dataclass(frozen=True)
class RecoveryResult:
    """``kind`` is ``"unique"``, ``"partial"`` or ``"none"`` (inconsistent system)."""

    kind: str
    Y0: FieldMatrix
    q0: FieldVector
    solution_set: SolutionSet
    recovered: FieldVector | None = None

    def to_dict(self) -> dict:
        ss = self.solution_set
        return {
            "kind": self.kind,
            "recovered": _fe_str(self.recovered),
            "solution_set": {
                "kind": ss.kind,
                "rank": ss.rank,
                "particular": _fe_str(ss.particular),
                "nullspace_basis": [_fe_str(b) for b in ss.nullspace_basis],
            },
            "system": {
                "q": str(self.Y0.q),
                "Y0": [[str(v) for v in row] for row in self.Y0.tolist()],
                "q0": _fe_str(self.q0),
            },
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def recover_input(views: Sequence[P2View]) -> RecoveryResult:
    Y0, q0 = build_system(views)
    # x Y0 = q0  <=>  Y0^T x^T = q0^T
    ss = solve(Y0.T, q0)
    if ss.kind == "unique":
        return RecoveryResult("unique", Y0, q0, ss, recovered=ss.particular)
    if ss.kind == "affine":
        return RecoveryResult("partial", Y0, q0, ss)
    return RecoveryResult("none", Y0, q0, ss)


# ---------------------------------------------------------------------------
# real vs. ideal
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimulatedP2View(P2View):
    """A P2 view fabricated from ``y`` and ``w2`` alone."""


def straw_simulate(y: FieldVector, w2: FieldElement, rng: Rng) -> SimulatedP2View:
    """Fresh uniform masks and ``x1``; ``r1`` chosen so the output check passes."""
    q, k = y.modulus, len(y)
    y0 = FieldVector(rng.field_array(q.q, k), q)
    x1 = FieldVector(rng.field_array(q.q, k), q)
    s0 = fe_sample(rng, q)
    r1 = w2 - inner_product(x1, y0) + s0
    return SimulatedP2View(y=y, y0=y0, s0=s0, x1=x1, r1=r1, w2=w2)


def distinguish(view: P2View, x: FieldVector) -> int:
    """1 iff the leaked equation holds for the environment's ``x``."""
    return int(extract_equation(view).satisfied_by(x))


@dataclass(frozen=True)
class AdvantageReport:
    trials: int
    real_accepts: int
    ideal_accepts: int
    q: int
    k: int
    seed: int

    @property
    def real_accept_rate(self) -> float:
        return self.real_accepts / self.trials

    @property
    def ideal_accept_rate(self) -> float:
        return self.ideal_accepts / self.trials

    @property
    def advantage(self) -> float:
        return (self.real_accepts - self.ideal_accepts) / self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "real_accept_rate": self.real_accept_rate,
            "ideal_accept_rate": self.ideal_accept_rate,
            "advantage": self.advantage,
            "real_accepts": self.real_accepts,
            "ideal_accepts": self.ideal_accepts,
            "q": str(self.q),
            "k": self.k,
            "seed": self.seed,
        }


def _distinguisher_block(q: int, k: int, rng: Rng, n: int) -> np.ndarray:
    from .ideal import ideal_dip
    from .membership import raw
    from .protocol import run_session

    real = ideal = 0
    for _ in range(n):
        x = FieldVector(rng.field_array(q, k), q)
        y = FieldVector(rng.field_array(q, k), q)
        t = run_session(x, y, k, q, rng)
        real += distinguish(t.p2_view(y), x)
        out = ideal_dip(raw(x), raw(y), k, q, rng)
        ideal += distinguish(straw_simulate(y, out.w2, rng), x)
    return np.array([real, ideal], dtype=np.int64)


def run_distinguisher_experiment(q: int, k: int, trials: int, seed: int,
                                 threads: int = 1) -> AdvantageReport:
    """Accept rates of ``distinguish`` on real views and on straw-simulated ideal views."""
    from .experiment import run_trials

    if trials < 1:
        raise ValueError("trials must be at least 1")
    real, ideal = run_trials(_distinguisher_block, (int(q), int(k)), trials, seed, threads)
    return AdvantageReport(trials, int(real), int(ideal), int(q), int(k), int(seed))


def nonsingular_probability(q: int, k: int) -> float:
    """Chance that a uniform k x k matrix over F_q is invertible."""
    p = 1.0
    for i in range(1, k + 1):
        p *= 1.0 - float(q) ** -i
    return p


@dataclass(frozen=True)
class ScalarAttackReport:
    trials: int
    recovered: int
    correct: int
    q: int
    seed: int

    @property
    def success_rate(self) -> float:
        return self.recovered / self.trials


def _scalar_block(q: int, rng: Rng, n: int) -> np.ndarray:
    from .protocol import run_session

    recovered = correct = 0
    for _ in range(n):
        x = FieldVector(rng.field_array(q, 1), q)
        y = FieldVector(rng.field_array(q, 1), q)
        t = run_session(x, y, 1, q, rng)
        guess = recover_k1(t.p2_view(y))
        if guess is not None:
            recovered += 1
            correct += guess == x[0]
    return np.array([recovered, correct], dtype=np.int64)


def run_scalar_attack_experiment(q: int, trials: int, seed: int, threads: int = 1,
                                 padded_k: int | None = None) -> ScalarAttackReport:
    """k = 1 recovery over ``trials`` sessions.

    With ``padded_k`` the scalar inputs run through a zero-padded length
    ``padded_k`` session and P2 attacks the first coordinate.
    """
    from .experiment import run_trials

    if trials < 1:
        raise ValueError("trials must be at least 1")
    fn, args = (_scalar_block, (int(q),)) if padded_k is None else (_padded_block, (int(q), int(padded_k)))
    rec, ok = run_trials(fn, args, trials, seed, threads)
    return ScalarAttackReport(trials, int(rec), int(ok), int(q), int(seed))


def recover_padded_scalar(view: P2View) -> FieldElement | None:
    """Scalar recovery from a zero-padded session: padding coordinates of ``x`` are known zeros."""
    eq = extract_equation(view)
    y0 = eq.coeffs[0]
    if y0.value == 0:
        return None
    return eq.rhs / y0


def _padded_block(q: int, k: int, rng: Rng, n: int) -> np.ndarray:
    from .protocol import pad_inputs, run_padded_session

    recovered = correct = 0
    for _ in range(n):
        x = FieldVector(rng.field_array(q, 1), q)
        y = FieldVector(rng.field_array(q, 1), q)
        t = run_padded_session(x, y, k, q, rng)
        guess = recover_padded_scalar(t.p2_view(pad_inputs(y, k)))
        if guess is not None:
            recovered += 1
            correct += guess == x[0]
    return np.array([recovered, correct], dtype=np.int64)
