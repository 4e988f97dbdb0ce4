"""Shared vector-by-matrix product built from one DIP session per column."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import RecoveryResult, recover_input
from .field import Rng, modulus
from .linalg import FieldMatrix, FieldVector, is_nonsingular
from .membership import LAMBDA
from .protocol import P2View, Transcript, run_session


@dataclass(frozen=True)
class VecMatShares:
    """Per-column output shares and P2's views, in column order.

    On abort ``w1`` and ``w2`` are ``LAMBDA`` and ``views2`` holds the views of
    the sessions that completed before the failing one.
    """

    w1: object
    w2: object
    views2: tuple[P2View, ...]
    transcripts: tuple[Transcript, ...]

    @property
    def aborted(self) -> bool:
        return self.w1 is LAMBDA


def shared_vec_mat(x: FieldVector, Y: FieldMatrix, q, rng: Rng, **session_kw) -> VecMatShares:
    """Run one fresh session per column ``i`` with inputs ``x`` and ``Y[:, i]``."""
    m = modulus(q)
    if Y.modulus != m or x.modulus != m:
        raise ValueError(f"inputs must live in F_{m.q}")
    if Y.rows != len(x):
        raise ValueError(f"cannot multiply 1x{len(x)} by {Y.rows}x{Y.cols}")
    k = len(x)
    w1, w2, views, ts = [], [], [], []
    for i in range(Y.cols):
        col = Y.column(i)
        t = run_session(x, col, k, m, rng, **session_kw)
        ts.append(t)
        if not t.completed:
            return VecMatShares(LAMBDA, LAMBDA, tuple(views), tuple(ts))
        views.append(t.p2_view(col))
        w1.append(t.outcome1.value)
        w2.append(t.outcome2.value)
    return VecMatShares(FieldVector(w1, m), FieldVector(w2, m), tuple(views), tuple(ts))


def attack_shared_vec_mat(shares: VecMatShares) -> RecoveryResult:
    """Solve for P1's vector from the first ``k`` session views."""
    if not shares.views2:
        raise ValueError("no completed sessions to attack")
    k = shares.views2[0].k
    return recover_input(shares.views2[:k])


@dataclass(frozen=True)
class VecMatAttackReport:
    trials: int
    unique: int
    unique_correct: int
    nonsingular: int
    biconditional_violations: int
    partial_missing_truth: int
    q: int
    k: int
    seed: int

    @property
    def success_rate(self) -> float:
        return self.unique / self.trials


def _vecmat_block(q: int, k: int, rng: Rng, n: int):
    unique = correct = nonsing = bicond = missing = 0
    for _ in range(n):
        x = FieldVector(rng.field_array(q, k), q)
        Y = FieldMatrix(rng.field_array(q, (k, k)), q)
        res = attack_shared_vec_mat(shared_vec_mat(x, Y, q, rng))
        ns = is_nonsingular(res.Y0)
        nonsing += ns
        if res.kind == "unique":
            unique += 1
            correct += res.recovered == x
        elif not res.solution_set.contains(x):
            missing += 1
        bicond += (res.kind == "unique") != ns
    return np.array([unique, correct, nonsing, bicond, missing], dtype=np.int64)


def run_vecmat_attack_experiment(q: int, k: int, trials: int, seed: int,
                                 threads: int = 1) -> VecMatAttackReport:
    """Compose ``k`` sessions per trial against fresh ``x`` and ``Y``; attack each composition."""
    from .experiment import run_trials

    if trials < 1:
        raise ValueError("trials must be at least 1")
    tallies = run_trials(_vecmat_block, (int(q), int(k)), trials, seed, threads)
    return VecMatAttackReport(trials, *(int(t) for t in tallies), q=int(q), k=int(k), seed=int(seed))
