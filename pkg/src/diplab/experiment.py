"""Seeded, block-parallel trial runner.

Trials are grouped into fixed-size blocks; block ``b`` draws from
``Rng(seed).derive(b)``.  Results depend on the seed and the trial count only,
never on the number of workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .field import Rng

BLOCK = 1000


def _blocks(trials: int):
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range((trials + BLOCK - 1) // BLOCK)]


def _run_block(fn, args, seed, b, n):
    return fn(*args, Rng(seed).derive(b), n)


def run_trials(fn: Callable[..., np.ndarray], args: tuple, trials: int, seed: int,
               threads: int = 1) -> np.ndarray:
    """Sum ``fn(*args, rng, n)`` over all blocks; ``fn`` returns an int64 tally array."""
    blocks = _blocks(trials)
    if threads <= 1 or len(blocks) == 1:
        parts = [_run_block(fn, args, seed, b, n) for b, n in blocks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(_run_block, fn, args, seed, b, n) for b, n in blocks]
            parts = [f.result() for f in futs]
    total = parts[0].copy()
    for p in parts[1:]:
        total += p
    return total


def binomial_band(p: float, n: int, z: float = 3.0) -> tuple[float, float]:
    """``p -/+ z`` standard errors of a rate estimated from ``n`` Bernoulli trials."""
    s = z * (p * (1.0 - p) / n) ** 0.5
    return p - s, p + s


def check_rate(name: str, hits: int, n: int, p: float, z: float = 3.0) -> dict:
    lo, hi = binomial_band(p, n, z)
    rate = hits / n
    return {
        "claim": name,
        "observed": rate,
        "expected": p,
        "lower": lo,
        "upper": hi,
        "trials": n,
        "pass": lo <= rate <= hi,
    }


def check_exact(name: str, observed, expected) -> dict:
    return {"claim": name, "observed": observed, "expected": expected, "pass": observed == expected}
