import itertools

import pytest
from hypothesis import given, strategies as st
from scipy import stats

from diplab.field import (
    FieldElement, FieldModulus, InversionOfZero, ModulusMismatch, Rng,
    fe_arith, fe_canon, fe_inv, fe_sample, is_prime, modulus,
)

F7 = modulus(7)


@pytest.mark.parametrize("v, expected", [(15, 1), (0, 0), (-1, 6)])
def test_canon(v, expected):
    assert fe_canon(v, 7).value == expected


@pytest.mark.parametrize("op, a, b, expected", [
    ("add", 3, 5, 1),
    ("mul", 3, 5, 1),
    ("sub", 2, 5, 4),
])
def test_arith_examples(op, a, b, expected):
    assert fe_arith(op, FieldElement(a, 7), FieldElement(b, 7)).value == expected


def test_neg_zero():
    assert fe_arith("neg", FieldElement(0, 7)).value == 0


def test_modulus_mismatch_rejected():
    with pytest.raises(ModulusMismatch):
        fe_arith("add", FieldElement(1, 7), FieldElement(1, 11))
    with pytest.raises(ModulusMismatch):
        FieldElement(1, 7) * FieldElement(1, 11)


def test_arity_checked():
    with pytest.raises(TypeError):
        fe_arith("add", FieldElement(1, 7))
    with pytest.raises(TypeError):
        fe_arith("neg", FieldElement(1, 7), FieldElement(1, 7))


@pytest.mark.parametrize("a, expected", [(1, 1), (3, 5), (4, 2)])
def test_inverse_examples(a, expected):
    assert fe_inv(FieldElement(a, 7)).value == expected


def test_inverse_of_zero():
    with pytest.raises(InversionOfZero):
        fe_inv(FieldElement(0, 7))


@pytest.mark.parametrize("q", [0, 1, 4, 6, 9, 561, 2**31, 2**31 + 11])
def test_bad_moduli(q):
    with pytest.raises(ValueError):
        FieldModulus(q)


def test_primality_against_sieve():
    n = 20000
    sieve = [True] * n
    sieve[0] = sieve[1] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = [False] * len(sieve[i * i::i])
    assert [is_prime(i) for i in range(n)] == sieve
    assert is_prime(2147483647)
    assert not is_prime(2147483645)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_axioms_exhaustive(q):
    els = [FieldElement(v, q) for v in range(q)]
    zero, one = FieldElement(0, q), FieldElement(1, q)
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a in els:
        assert a + zero == a and a * one == a and a + (-a) == zero
        if a.value:
            assert a * fe_inv(a) == one


big = st.integers(min_value=0, max_value=2147483646)


@given(big, big, big)
def test_axioms_random_large_prime(a, b, c):
    q = 2147483647
    a, b, c = (FieldElement(v, q) for v in (a, b, c))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a.value:
        assert (a * fe_inv(a)).value == 1


@given(st.integers(), st.sampled_from(["add", "sub", "mul"]), st.integers())
def test_results_already_canonical(x, op, y):
    r = fe_arith(op, fe_canon(x, 101), fe_canon(y, 101))
    assert 0 <= r.value < 101
    assert fe_canon(r.value, 101) == r


def test_sample_binary_mean():
    rng = Rng(2024)
    mean = sum(fe_sample(rng, 2).value for _ in range(10000)) / 10000
    assert 0.47 <= mean <= 0.53


def test_sample_determinism():
    a, b = Rng(99), Rng(99)
    assert [fe_sample(a, 101).value for _ in range(100)] == [fe_sample(b, 101).value for _ in range(100)]


@pytest.mark.parametrize("q", [2, 3, 101, 2147483647])
def test_sample_range(q):
    rng = Rng(1)
    assert all(0 <= fe_sample(rng, q).value < q for _ in range(500))
    arr = rng.field_array(q, 5000)
    assert arr.min() >= 0 and arr.max() < q


def test_sample_uniform_chi_square():
    counts = [0] * 101
    for v in Rng(7).field_array(101, 100_000):
        counts[v] += 1
    assert stats.chisquare(counts).pvalue > 0.001


def test_derived_streams_differ_and_repeat():
    r = Rng(5)
    a = r.derive(0).field_array(101, 20).tolist()
    b = r.derive(1).field_array(101, 20).tolist()
    assert a != b
    assert a == Rng(5).derive(0).field_array(101, 20).tolist()


def test_seed_range():
    with pytest.raises(ValueError):
        Rng(-1)
    with pytest.raises(ValueError):
        Rng(2**64)
    Rng(2**64 - 1)


def test_immutable():
    a = FieldElement(3, 7)
    with pytest.raises(AttributeError):
        a.value = 4
