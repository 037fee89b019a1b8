"""Classical substrate: fixed-length bitstrings, exact combinatorics, probability
distributions, and Shannon entropy. Everything here is pure and value-typed; the
other modules build on these primitives."""
from __future__ import annotations

import math
from typing import Any, Iterable, Iterator, Mapping

DEFAULT_N_MAX = 12
BINOMIAL_N_MAX = 64
PROB_SUM_ATOL = 1e-12
# probabilities below this are treated as exact zeros inside entropy sums
ENTROPY_PROB_FLOOR = 1e-15

_LOG2 = math.log(2.0)


class BitString:
    """Immutable string over {0, 1} of fixed length n.

    Stored as an integer with the leftmost bit most significant, so numeric
    order on `value` coincides with lexicographic order on the bits. Ordering
    across different lengths falls back to (n, value) so enumeration stays
    deterministic and total.
    """

    __slots__ = ("value", "n")

    def __init__(self, value: int, n: int, *, n_max: int = DEFAULT_N_MAX) -> None:
        if not 1 <= n <= n_max:
            raise ValueError(f"bitstring length {n} outside [1, {n_max}]")
        if not 0 <= value < (1 << n):
            raise ValueError(f"value {value} does not fit in {n} bits")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("BitString is immutable")

    @classmethod
    def from_bits(cls, bits: Iterable[int], *, n_max: int = DEFAULT_N_MAX) -> "BitString":
        seq = tuple(bits)
        value = 0
        for b in seq:
            if b not in (0, 1):
                raise ValueError(f"bit {b!r} is not 0 or 1")
            value = (value << 1) | b
        return cls(value, len(seq), n_max=n_max)

    @classmethod
    def from_str(cls, text: str, *, n_max: int = DEFAULT_N_MAX) -> "BitString":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {text!r}")
        return cls(int(text, 2), len(text), n_max=n_max)

    @classmethod
    def zeros(cls, n: int, *, n_max: int = DEFAULT_N_MAX) -> "BitString":
        return cls(0, n, n_max=n_max)

    @classmethod
    def all_strings(cls, n: int, *, n_max: int = DEFAULT_N_MAX) -> Iterator["BitString"]:
        """All 2^n strings of length n in lexicographic order."""
        for value in range(1 << n):
            yield cls(value, n, n_max=n_max)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - i)) & 1 for i in range(self.n))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> (self.n - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __len__(self) -> int:
        return self.n

    def __xor__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitString(self.value ^ other.value, self.n, n_max=max(self.n, DEFAULT_N_MAX))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitString)
            and self.n == other.n
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.n, self.value))

    def __lt__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (self.n, self.value) < (other.n, other.value)

    def __le__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (self.n, self.value) <= (other.n, other.value)

    def __gt__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (other.n, other.value) < (self.n, self.value)

    def __ge__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (other.n, other.value) <= (self.n, self.value)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __repr__(self) -> str:
        return f"BitString('{self}')"


def hamming_weight(k: BitString) -> int:
    """Number of 1-bits in k."""
    return k.weight


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n <= 64."""
    if not isinstance(n, int) or not isinstance(k, int):
        raise TypeError("binomial takes integers")
    if not 0 <= k <= n <= BINOMIAL_N_MAX:
        raise ValueError(f"binomial out of range: n={n}, k={k} (need 0 <= k <= n <= {BINOMIAL_N_MAX})")
    return math.comb(n, k)


class ProbDist:
    """Finite probability distribution: a frozen map from outcome label to weight.

    Weights must be nonnegative and sum to 1 within 1e-12.
    """

    __slots__ = ("_weights",)

    def __init__(self, weights: Mapping[Any, float]) -> None:
        items = dict(weights)
        if not items:
            raise ValueError("empty distribution")
        total = 0.0
        for label, w in items.items():
            if w < 0.0:
                raise ValueError(f"negative weight {w} for outcome {label!r}")
            total += w
        if abs(total - 1.0) > PROB_SUM_ATOL:
            raise ValueError(f"weights sum to {total}, not 1 within {PROB_SUM_ATOL}")
        object.__setattr__(self, "_weights", items)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("ProbDist is immutable")

    @classmethod
    def uniform(cls, labels: Iterable[Any]) -> "ProbDist":
        seq = list(labels)
        return cls({label: 1.0 / len(seq) for label in seq})

    @classmethod
    def point_mass(cls, label: Any) -> "ProbDist":
        return cls({label: 1.0})

    def __getitem__(self, label: Any) -> float:
        return self._weights.get(label, 0.0)

    def __iter__(self) -> Iterator[Any]:
        return iter(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def items(self) -> Iterable[tuple[Any, float]]:
        return self._weights.items()

    def probabilities(self) -> tuple[float, ...]:
        return tuple(self._weights.values())

    def __repr__(self) -> str:
        return f"ProbDist({self._weights!r})"


def entropy_of_probs(probs: Iterable[float]) -> float:
    """Shannon entropy in bits of a bare weight sequence.

    Weights below ENTROPY_PROB_FLOOR contribute exactly zero, which keeps the
    sum NaN-free when rounding produces stray tiny or zero entries.
    """
    h = 0.0
    for p in probs:
        if p > ENTROPY_PROB_FLOOR:
            h -= p * math.log(p)
    return h / _LOG2


def shannon_entropy(d: ProbDist) -> float:
    """Shannon entropy H(d) in bits, with 0*log(0) = 0."""
    if not isinstance(d, ProbDist):
        raise TypeError("shannon_entropy takes a ProbDist (see entropy_of_probs for raw weights)")
    return entropy_of_probs(d.probabilities())


def binary_entropy(p: float) -> float:
    """H(p, 1-p) in bits."""
    return entropy_of_probs((p, 1.0 - p))
