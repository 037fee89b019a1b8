import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsdc.bits import (
    BitString,
    ProbDist,
    binary_entropy,
    binomial,
    entropy_of_probs,
    hamming_weight,
    shannon_entropy,
)


def test_bitstring_roundtrip_and_indexing():
    k = BitString.from_str("01101")
    assert str(k) == "01101"
    assert k.bits == (0, 1, 1, 0, 1)
    assert k[0] == 0 and k[1] == 1
    assert len(k) == 5
    assert hamming_weight(k) == 3
    assert BitString.from_bits([0, 1, 1, 0, 1]) == k


def test_bitstring_rejects_bad_input():
    with pytest.raises(ValueError):
        BitString(4, 2)
    with pytest.raises(ValueError):
        BitString(0, 0)
    with pytest.raises(ValueError):
        BitString(0, 13)
    with pytest.raises(ValueError):
        BitString.from_str("012")
    with pytest.raises(AttributeError):
        BitString(0, 2).value = 3


def test_bitstring_xor_and_ordering():
    a = BitString.from_str("0110")
    b = BitString.from_str("0101")
    assert str(a ^ b) == "0011"
    with pytest.raises(ValueError):
        a ^ BitString.from_str("01")
    strings = list(BitString.all_strings(3))
    assert strings == sorted(strings)
    assert [str(s) for s in strings[:3]] == ["000", "001", "010"]


@given(st.integers(1, 8))
def test_weight_enumeration_matches_binomial(n):
    counts = [0] * (n + 1)
    for k in BitString.all_strings(n):
        counts[k.weight] += 1
    assert counts == [binomial(n, w) for w in range(n + 1)]


def test_binomial_bounds():
    assert binomial(64, 32) == math.comb(64, 32)
    with pytest.raises(ValueError):
        binomial(65, 1)
    with pytest.raises(ValueError):
        binomial(4, 5)
    with pytest.raises(TypeError):
        binomial(4.0, 2)


def test_entropy_examples():
    assert shannon_entropy(ProbDist.uniform("abcd")) == pytest.approx(2.0, abs=1e-12)
    assert shannon_entropy(ProbDist.point_mass("x")) == 0.0
    assert entropy_of_probs((0.75, 0.25)) == pytest.approx(0.811278, abs=1e-6)
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)


def test_probdist_validation():
    with pytest.raises(ValueError):
        ProbDist({"a": 0.6, "b": 0.5})
    with pytest.raises(ValueError):
        ProbDist({"a": -0.1, "b": 1.1})
    with pytest.raises(ValueError):
        ProbDist({})
    d = ProbDist({"a": 0.25, "b": 0.75})
    assert d["a"] == 0.25
    assert d["missing"] == 0.0


@given(st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_entropy_permutation_invariant(weights, rnd):
    probs = [w / sum(weights) for w in weights]
    shuffled = list(probs)
    rnd.shuffle(shuffled)
    assert entropy_of_probs(probs) == pytest.approx(entropy_of_probs(shuffled), abs=1e-9)


def test_entropy_concave_under_binary_mixing():
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = rng.dirichlet(np.ones(5))
        q = rng.dirichlet(np.ones(5))
        lam = rng.random()
        mixed = entropy_of_probs(lam * p + (1 - lam) * q)
        assert mixed >= lam * entropy_of_probs(p) + (1 - lam) * entropy_of_probs(q) - 1e-9


def test_entropy_additive_on_products():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = rng.dirichlet(np.ones(4))
        q = rng.dirichlet(np.ones(3))
        prod = np.outer(p, q).ravel()
        assert entropy_of_probs(prod) == pytest.approx(
            entropy_of_probs(p) + entropy_of_probs(q), abs=1e-9
        )


def test_entropy_floor_squashes_tiny_weights():
    assert entropy_of_probs((1.0, 1e-16, 0.0)) == 0.0
    assert entropy_of_probs((1.0,)) == 0.0
