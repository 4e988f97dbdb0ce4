"""Exit criteria.  Each test prints one PASS/FAIL line (collected in the summary).

Statistical bands are 3 sigma binomial bands unless stated; exact checks
have zero tolerance.  All randomness is seeded, so results are reproducible.
"""

import struct

import numpy as np
import pytest
from scipy import stats

from diplab.attack import (
    nonsingular_probability, run_distinguisher_experiment, run_scalar_attack_experiment,
)
from diplab.composed import attack_shared_vec_mat, run_vecmat_attack_experiment, shared_vec_mat
from diplab.experiment import binomial_band
from diplab.field import Rng
from diplab.ideal import ideal_dip
from diplab.linalg import FieldMatrix, FieldVector, inner_product, is_nonsingular, solve
from diplab.membership import LAMBDA
from diplab.protocol import (
    Msg1, Msg2, Party1, Party2, preprocess, run_padded_session, run_session,
)
from diplab.wire import TAG_MSG1, TAG_MSG2, DecodeError, decode_msg, encode_msg

import oracles

P31 = 2147483647  # largest prime below 2**31


def in_band(hits, n, p):
    lo, hi = binomial_band(p, n)
    return lo <= hits / n <= hi, f"rate {hits / n:.5f}, band [{lo:.5f}, {hi:.5f}]"


def test_c01_protocol_correctness(criterion):
    rng = Rng(101)
    grid = [(q, k) for q in (2, 7, 101, P31) for k in (1, 2, 8, 64)]
    bad = n = 0
    for q, k in grid:
        for _ in range(10_000 // len(grid)):
            x = FieldVector(rng.field_array(q, k), q)
            y = FieldVector(rng.field_array(q, k), q)
            t = run_session(x, y, k, q, rng)
            n += 1
            bad += not (t.completed and
                        (t.outcome1 + t.outcome2).value == oracles.inner(x.tolist(), y.tolist(), q))
    criterion(1, "w1 + w2 = <x, y> in every honest session", bad == 0 and n == 10_000,
              f"{n - bad}/{n}")


def test_c02_leakage_identity(criterion):
    rng = Rng(102)
    bad = 0
    for i in range(10_000):
        q = (2, 7, 101, P31)[i % 4]
        k = (1, 2, 8, 64)[(i // 4) % 4]
        x = FieldVector(rng.field_array(q, k), q)
        y = FieldVector(rng.field_array(q, k), q)
        v = run_session(x, y, k, q, rng).p2_view(y)
        bad += inner_product(x, v.y0) != inner_product(v.x1, v.y0) - v.s0
    criterion(2, "<x, y0> = <x1, y0> - s0 in every honest transcript", bad == 0,
              f"{10_000 - bad}/10000")


def test_c03_scalar_break(criterion):
    rep = run_scalar_attack_experiment(101, 10_000, seed=103)
    ok, detail = in_band(rep.recovered, rep.trials, 1 - 1 / 101)
    exact = rep.correct == rep.recovered
    criterion(3, "k=1 recovery rate ~ 1 - 1/101 and every recovery exact", ok and exact,
              f"{detail}; exact {rep.correct}/{rep.recovered}")


def test_c04_composed_attack(criterion):
    rng = Rng(104)
    q, k, n = 101, 8, 1000
    nonsing = exact = bicond_bad = 0
    for _ in range(n):
        x = FieldVector(rng.field_array(q, k), q)
        Y = FieldMatrix(rng.field_array(q, (k, k)), q)
        res = attack_shared_vec_mat(shared_vec_mat(x, Y, q, rng))
        ns = is_nonsingular(res.Y0)
        bicond_bad += (res.kind == "unique") != ns
        if ns:
            nonsing += 1
            exact += res.kind == "unique" and res.recovered == x
    ok = bicond_bad == 0 and exact == nonsing and nonsing > 0
    criterion(4, "composed attack exact whenever Y0 nonsingular; unique <=> nonsingular", ok,
              f"nonsingular {nonsing}/{n} (expected ~{nonsingular_probability(q, k):.4f}), "
              f"exact {exact}/{nonsing}, biconditional violations {bicond_bad}")


def test_c05_nonsingularity_frequency(criterion):
    hits, total = oracles.count_nonsingular(2, 2)
    oracle_ok = (hits, total) == (6, 16) and hits / total == 0.375
    rep = run_vecmat_attack_experiment(2, 2, 10_000, seed=105)
    ok, detail = in_band(rep.unique, rep.trials, hits / total)
    criterion(5, "unique-recovery rate at (q=2, k=2) ~ 0.375 (oracle: 6/16)",
              oracle_ok and ok and rep.unique_correct == rep.unique, detail)


@pytest.mark.parametrize("q, k", [(2, 1), (101, 4)])
def test_c06_distinguisher(criterion, q, k):
    rep = run_distinguisher_experiment(q, k, 100_000, seed=106)
    sim_ok, sim_detail = in_band(rep.ideal_accepts, rep.trials, 1 / q)
    adv_ok, _ = in_band(rep.real_accepts - rep.ideal_accepts, rep.trials, 1 - 1 / q)
    criterion(6, f"distinguisher at q={q}: real rate 1.0, simulated ~ 1/q, advantage ~ 1 - 1/q",
              rep.real_accept_rate == 1.0 and sim_ok and adv_ok,
              f"real {rep.real_accept_rate}, simulated {sim_detail}, advantage {rep.advantage:.5f}")


def test_c07_padding_reduction(criterion):
    rng = Rng(107)
    q, k, bad = 101, 8, 0
    for kp in range(1, k + 1):
        for _ in range(1000):
            x = FieldVector(rng.field_array(q, kp), q)
            y = FieldVector(rng.field_array(q, kp), q)
            t = run_padded_session(x, y, k, q, rng)
            bad += not (t.completed and t.outcome1 + t.outcome2 == inner_product(x, y))
    rep = run_scalar_attack_experiment(q, 10_000, seed=1070, padded_k=k)
    ok, detail = in_band(rep.recovered, rep.trials, 1 - 1 / q)
    criterion(7, "padded sessions correct for k'=1..8; padded k'=1 broken at ~ 1 - 1/q",
              bad == 0 and ok and rep.correct == rep.recovered,
              f"failures {bad}/8000; padded break {detail}")


def test_c08_ideal_reference(criterion):
    q, n = 101, 100_000
    rng = Rng(108)
    w1 = np.zeros(q, dtype=np.int64)
    for _ in range(n):
        w1[ideal_dip((3, 4, 5), (6, 7, 8), 3, q, rng).w1.value] += 1
    p_chi = stats.chisquare(w1).pvalue

    def marginal(x1):
        c = np.zeros(q, dtype=np.int64)
        for _ in range(n):
            c[ideal_dip(x1, (6, 7, 8), 3, q, rng).w2.value] += 1
        return c / n

    diff = np.abs(marginal((3, 4, 5)) - marginal((90, 0, 17)))
    sigma = np.sqrt(2 * (1 / q) * (1 - 1 / q) / n)
    criterion(8, "ideal w1 uniform (chi-square, alpha=0.001); P2 marginal input-independent (4 sigma)",
              p_chi > 0.001 and bool(np.all(diff <= 4 * sigma)),
              f"chi-square p={p_chi:.3f}, max bin diff {diff.max() / sigma:.2f} sigma")


def _solve_agrees(A, b, q):
    s = solve(FieldMatrix(A, q), FieldVector(b, q))
    brute = sorted(oracles.brute_solutions(A, b, q))
    if s.kind == "inconsistent":
        return brute == []
    return sorted(tuple(v.tolist()) for v in s.enumerate()) == brute


def test_c09_solve_vs_brute_force(criterion):
    rng = np.random.default_rng(109)
    cases = []
    for _ in range(1000):
        q = int(rng.choice([2, 3]))
        m, n = (int(v) for v in rng.integers(1, 4, 2))
        cases.append((rng.integers(0, q, (m, n)).tolist(), rng.integers(0, q, m).tolist(), q))
    # rank-deficient constructions: zero matrix, repeated rows, scaled rows, zero columns
    for q in (2, 3):
        for n in (1, 2, 3):
            for b in ([0, 0, 0], [1, 0, 0], [1, 1, 1]):
                row = rng.integers(0, q, n).tolist()
                cases.append(([[0] * n] * 3, b, q))
                cases.append(([row, row, row], b, q))
                cases.append(([row, [(2 * v) % q for v in row], [0] * n], b, q))
                cases.append(([[0] + row[1:], [0] + row[1:], [1] * n], b, q))
    bad = sum(not _solve_agrees(A, b, q) for A, b, q in cases)
    criterion(9, "solve equals exhaustive search on small systems", bad == 0,
              f"{len(cases) - bad}/{len(cases)} agree")


def test_c10_fuzzed_wire(criterion):
    rng = np.random.default_rng(110)
    q, k = 7, 3
    crashes = outcomes = 0
    bufs = []
    for _ in range(3000):
        bufs.append(rng.bytes(int(rng.integers(0, 64))))
    for tag in (TAG_MSG1, TAG_MSG2):
        for _ in range(1500):
            kk = int(rng.choice([0, 1, 2, 3, 4, 1000]))
            n = kk + (tag == TAG_MSG2)
            vals = rng.integers(0, 2**63, n, dtype=np.uint64)
            vals[rng.random(n) < 0.7] %= q
            buf = struct.pack("<BI", tag, kk) + vals.astype("<u8").tobytes()
            cut = int(rng.integers(-2, 3))
            bufs.append(buf[:len(buf) + cut] if cut < 0 else buf + b"\x00" * cut)
    for buf in bufs:
        try:
            try:
                decode_msg(buf)
            except DecodeError:
                outcomes += 1
                continue
            s1, s2 = preprocess(k, q, Rng(0))
            p1 = Party1(FieldVector((1, 2, 3), q), Rng(1))
            p1.receive_setup(s1)
            reply = p1.receive(buf)
            p2 = Party2(FieldVector((4, 5, 6), q))
            p2.receive_setup(s2)
            p2.first_message()
            out2 = p2.receive(buf)
            ok1 = (reply is None and p1.output is LAMBDA) or (reply is not None and p1.output is not LAMBDA)
            ok2 = out2 is LAMBDA or 0 <= out2.value < q
            outcomes += ok1 and ok2
        except Exception:
            crashes += 1
    criterion(10, "fuzzed wire messages yield LAMBDA, a valid reply, or DecodeError; never crash",
              crashes == 0 and outcomes == len(bufs), f"{len(bufs)} buffers, {crashes} crashes")
