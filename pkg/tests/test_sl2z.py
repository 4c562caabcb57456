import random

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from orbmod.modular_data import Phase, t_matrix
from orbmod.sl2z import (
    IDENTITY,
    S_GEN,
    T_GEN,
    GeneratorWord,
    SL2Matrix,
    decompose_to_generators,
    evaluate_word,
    is_prime,
    rho_of,
    sector_congruence,
)


def random_word(rng, max_len, max_exp):
    """Valid random generator word (no adjacent T tokens)."""
    tokens = []
    last_t = False
    for _ in range(rng.randint(0, max_len)):
        if last_t or rng.random() < 0.5:
            tokens.append("S")
            last_t = False
        else:
            n = rng.choice([x for x in range(-max_exp, max_exp + 1) if x])
            tokens.append(f"T^{n}")
            last_t = True
    return GeneratorWord(tuple(tokens))


# ---------------------------------------------------------------------------
# words and evaluation
# ---------------------------------------------------------------------------

def test_evaluate_word_examples():
    assert evaluate_word(["S"]) == S_GEN
    assert evaluate_word(["T^3"]) == SL2Matrix(1, 3, 0, 1)
    assert evaluate_word(["S", "S"]) == SL2Matrix(-1, 0, 0, -1)
    assert evaluate_word([]) == IDENTITY


def test_word_validation():
    with pytest.raises(ValueError, match="adjacent"):
        GeneratorWord(("T^1", "T^2"))
    with pytest.raises(ValueError, match="T\\^0"):
        GeneratorWord(("T^0",))
    with pytest.raises(ValueError, match="bad generator token"):
        GeneratorWord(("U",))
    assert str(GeneratorWord(("S", "T^-2"))) == "S T^-2"
    assert str(GeneratorWord()) == "<empty>"


def test_sl2matrix_rejects_wrong_determinant():
    with pytest.raises(ValueError, match="determinant"):
        SL2Matrix(1, 0, 0, 2)


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def test_decompose_examples():
    assert decompose_to_generators(S_GEN).tokens == ("S",)
    assert decompose_to_generators(T_GEN).tokens == ("T^1",)
    assert decompose_to_generators(IDENTITY).tokens == ()
    assert decompose_to_generators(SL2Matrix(-1, 0, 0, -1)).tokens == ("S", "S")


def test_decompose_round_trip_example():
    m = SL2Matrix(2, -1, -1, 1)
    word = decompose_to_generators(m)
    assert evaluate_word(word) == m


def test_decompose_round_trip_bounded_entries():
    # pseudo-random matrices with |entries| <= 1e6, exact integer round trip
    rng = random.Random(1282)
    accepted = 0
    attempts = 0
    while accepted < 1000:
        attempts += 1
        assert attempts < 50_000
        m = evaluate_word(random_word(rng, max_len=12, max_exp=9))
        if max(abs(v) for v in m.entries()) > 10**6:
            continue
        accepted += 1
        word = decompose_to_generators(m)
        assert evaluate_word(word) == m


@given(st.lists(st.integers(-8, 8), max_size=10), st.integers(0, 3))
def test_decompose_round_trip_hypothesis(exponents, trailing_s):
    # words of the continued-fraction shape T^n1 S T^n2 S ... S^trailing
    m = IDENTITY
    for n in exponents:
        m = m @ SL2Matrix(1, n, 0, 1) @ S_GEN
    for _ in range(trailing_s):
        m = m @ S_GEN
    word = decompose_to_generators(m)
    assert evaluate_word(word) == m
    # canonical form invariants: T tokens merged, nonzero
    toks = word.tokens
    for prev, cur in zip(toks, toks[1:]):
        assert not (prev.startswith("T") and cur.startswith("T"))


def test_decompose_word_length_logarithmic():
    rng = random.Random(7)
    for _ in range(50):
        m = evaluate_word(random_word(rng, max_len=30, max_exp=9))
        word = decompose_to_generators(m)
        bits = max(abs(v) for v in m.entries()).bit_length()
        assert len(word) <= 4 * bits + 8


# ---------------------------------------------------------------------------
# the representation rho
# ---------------------------------------------------------------------------

def test_rho_identity_and_generators(ising):
    assert_allclose(rho_of(IDENTITY, ising), np.eye(3), atol=1e-12)
    assert_allclose(rho_of(S_GEN, ising), ising.s_matrix, atol=1e-12)
    t_diag = np.diag([p.value for p in t_matrix(ising)])
    assert_allclose(rho_of(T_GEN, ising), t_diag, atol=1e-12)


def test_rho_matches_independent_factorization(ising):
    # (2, -1; -1, 1) = T^-3 S T^-1 S T^-2, checked below by integer product
    word = GeneratorWord(("T^-3", "S", "T^-1", "S", "T^-2"))
    m = SL2Matrix(2, -1, -1, 1)
    assert evaluate_word(word) == m
    t_angles = [p.angle for p in t_matrix(ising)]

    def rho_token(tok):
        if tok == "S":
            return np.array(ising.s_matrix)
        n = int(tok[2:])
        return np.diag([Phase(n * a).value for a in t_angles])

    by_hand = np.eye(3, dtype=complex)
    for tok in word:
        by_hand = by_hand @ rho_token(tok)
    assert_allclose(rho_of(m, ising), by_hand, atol=1e-9)


def test_rho_of_minus_identity_is_charge_conjugation(ising):
    s2 = ising.s_matrix @ ising.s_matrix
    assert_allclose(rho_of(SL2Matrix(-1, 0, 0, -1), ising), s2, atol=1e-12)


def test_rho_homomorphism_random_pairs(ising):
    rng = random.Random(99)
    for _ in range(60):
        m1 = evaluate_word(random_word(rng, max_len=6, max_exp=3))
        m2 = evaluate_word(random_word(rng, max_len=6, max_exp=3))
        lhs = rho_of(m1 @ m2, ising)
        rhs = rho_of(m1, ising) @ rho_of(m2, ising)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


# ---------------------------------------------------------------------------
# sector congruences
# ---------------------------------------------------------------------------

def test_sector_congruence_examples():
    assert sector_congruence(2, 1, 1) == (1, 1, SL2Matrix(2, -1, -1, 1))
    assert sector_congruence(3, 1, 2) == (2, 1, SL2Matrix(3, -1, -2, 1))
    assert sector_congruence(3, 2, 2) == (1, 2, SL2Matrix(3, -2, -1, 1))


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_sector_congruence_brute_force_oracle(k):
    for r in range(1, k):
        for s in range(1, k):
            solutions = [
                (a, b)
                for a in range(1, k)
                for b in range(1, k)
                if (r * a - s) % k == 0 and (s * b + r) % k == 0
            ]
            assert len(solutions) == 1
            a, b, mat = sector_congruence(k, r, s)
            assert (a, b) == solutions[0]
            assert mat.a * mat.d - mat.b * mat.c == 1
            assert (1 + a * b) % k == 0
            assert mat == SL2Matrix(k, -b, -a, (1 + a * b) // k)


def test_sector_congruence_preconditions():
    with pytest.raises(ValueError, match="prime"):
        sector_congruence(4, 1, 1)
    with pytest.raises(ValueError, match="strictly between"):
        sector_congruence(3, 0, 1)
    with pytest.raises(ValueError, match="strictly between"):
        sector_congruence(3, 1, 3)


def test_is_prime_small_cases():
    assert [k for k in range(15) if is_prime(k)] == [2, 3, 5, 7, 11, 13]
