"""The four public-channel disclosure rules.

Alice measures her n qubits and obtains a bitstring k; the rule fixes what she
announces about k on the public channel. Each rule exposes the forward
distribution P(s|k) (compatible announcements are equiprobable), the
compatibility sets K(s) and S(k) with closed-form cardinalities, and the
posteriors P(s) and P(k|s).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

import numpy as np

from .bits import BitString, ProbDist, binomial

# K(s) enumeration is exponential in n; only small ensembles are ever needed.
DISCLOSURE_N_MAX = 16

SCHEME_KINDS = ("full", "excess", "weight", "parity")

Payload = Union[BitString, int]


@dataclass(frozen=True)
class Announcement:
    """One public announcement: a position mask or outcome copy (BitString) for
    the full-outcome and excess-bits rules, an integer for weight and parity."""

    kind: str
    payload: Payload

    def serialize(self) -> str:
        if isinstance(self.payload, BitString):
            return str(self.payload)
        return str(self.payload)

    def __str__(self) -> str:
        return self.serialize()


class DisclosureScheme:
    """Base class: one disclosure rule bound to an ensemble size n."""

    kind: str = ""

    def __init__(self, n: int) -> None:
        if not 1 <= n <= DISCLOSURE_N_MAX:
            raise ValueError(f"ensemble size {n} outside [1, {DISCLOSURE_N_MAX}]")
        self.n = n

    # -- forward direction ------------------------------------------------

    def announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        """Draw s from P(s|k): uniform over the compatible announcements S(k)."""
        self._check_outcome(k)
        return self._announce(k, rng)

    def supports(self, k: BitString) -> tuple[Announcement, ...]:
        """S(k): every announcement k can produce, in a fixed deterministic order."""
        self._check_outcome(k)
        return self._supports(k)

    def support_size(self, k: BitString) -> int:
        """|S(k)| by closed form (no enumeration)."""
        self._check_outcome(k)
        return self._support_size(k)

    def p_announcement_given_outcome(self, s: Announcement, k: BitString) -> float:
        """P(s|k) = 1/|S(k)| when s is compatible with k, else 0."""
        self._check_outcome(k)
        self.validate_announcement(s)
        if self._compatible(s, k):
            return 1.0 / self._support_size(k)
        return 0.0

    # -- backward direction -----------------------------------------------

    def compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        """K(s): every outcome that can produce s, in lexicographic order."""
        self.validate_announcement(s)
        return self._compat_outcomes(s)

    def compat_count(self, s: Announcement) -> int:
        """|K(s)| by closed form (no enumeration)."""
        self.validate_announcement(s)
        return self._compat_count(s)

    def posterior(self, s: Announcement) -> tuple[float, ProbDist]:
        """P(s) and the posterior P(k|s), uniform over K(s).

        P(s) = |K(s)| / (2^n |S(k_s)|) where k_s is any outcome in K(s); the
        support size is the same for all of them.
        """
        outcomes = self.compat_outcomes(s)
        p_s = self.compat_count(s) / ((1 << self.n) * self._support_size(outcomes[0]))
        return p_s, ProbDist.uniform(outcomes)

    def validate_announcement(self, s: Announcement) -> None:
        if not isinstance(s, Announcement) or s.kind != self.kind:
            raise ValueError(f"announcement {s!r} does not belong to scheme {self.kind!r}")
        self._validate_payload(s.payload)

    # -- hooks --------------------------------------------------------------

    def _check_outcome(self, k: BitString) -> None:
        if not isinstance(k, BitString) or k.n != self.n:
            raise ValueError(f"outcome {k!r} is not a length-{self.n} bitstring")

    def _announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        raise NotImplementedError

    def _supports(self, k: BitString) -> tuple[Announcement, ...]:
        raise NotImplementedError

    def _support_size(self, k: BitString) -> int:
        raise NotImplementedError

    def _compatible(self, s: Announcement, k: BitString) -> bool:
        raise NotImplementedError

    def _compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        raise NotImplementedError

    def _compat_count(self, s: Announcement) -> int:
        raise NotImplementedError

    def _validate_payload(self, payload: Payload) -> None:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DisclosureScheme) and self.kind == other.kind and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.kind, self.n))


class FullOutcome(DisclosureScheme):
    """Alice announces her outcome verbatim: s = k."""

    kind = "full"

    def _announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        return Announcement(self.kind, k)

    def _supports(self, k: BitString) -> tuple[Announcement, ...]:
        return (Announcement(self.kind, k),)

    def _support_size(self, k: BitString) -> int:
        return 1

    def _compatible(self, s: Announcement, k: BitString) -> bool:
        return s.payload == k

    def _compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        assert isinstance(s.payload, BitString)
        return (s.payload,)

    def _compat_count(self, s: Announcement) -> int:
        return 1

    def _validate_payload(self, payload: Payload) -> None:
        if not isinstance(payload, BitString) or payload.n != self.n:
            raise ValueError(f"full-outcome announcement must be a length-{self.n} bitstring")


class ExcessBits(DisclosureScheme):
    """Alice announces the positions of the excess majority bits.

    With m1 ones and m0 zeros, she picks |m1 - m0| positions uniformly without
    replacement among the majority-value positions and announces that position
    mask. A balanced outcome announces the all-zero mask.
    """

    kind = "excess"

    def _excess(self, k: BitString) -> int:
        return abs(2 * k.weight - self.n)

    def _majority_positions(self, k: BitString) -> list[int]:
        maj = 1 if 2 * k.weight > self.n else 0
        return [i for i, b in enumerate(k.bits) if b == maj]

    def _announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        excess = self._excess(k)
        if excess == 0:
            return Announcement(self.kind, BitString.zeros(self.n, n_max=DISCLOSURE_N_MAX))
        positions = self._majority_positions(k)
        chosen = rng.choice(len(positions), size=excess, replace=False)
        mask = 0
        for c in chosen:
            mask |= 1 << (self.n - 1 - positions[int(c)])
        return Announcement(self.kind, BitString(mask, self.n, n_max=DISCLOSURE_N_MAX))

    def _supports(self, k: BitString) -> tuple[Announcement, ...]:
        excess = self._excess(k)
        if excess == 0:
            return (Announcement(self.kind, BitString.zeros(self.n, n_max=DISCLOSURE_N_MAX)),)
        positions = self._majority_positions(k)
        out = []
        for combo in combinations(positions, excess):
            mask = 0
            for i in combo:
                mask |= 1 << (self.n - 1 - i)
            out.append(Announcement(self.kind, BitString(mask, self.n, n_max=DISCLOSURE_N_MAX)))
        out.sort(key=lambda a: a.payload.value)
        return tuple(out)

    def _support_size(self, k: BitString) -> int:
        excess = self._excess(k)
        return binomial((self.n + excess) // 2, excess)

    def _compatible(self, s: Announcement, k: BitString) -> bool:
        assert isinstance(s.payload, BitString)
        mask = s.payload
        if mask.weight != self._excess(k):
            return False
        if mask.weight == 0:
            return True
        maj = 1 if 2 * k.weight > self.n else 0
        # every announced position must carry the majority value
        return all(k[i] == maj for i, b in enumerate(mask.bits) if b == 1)

    def _compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        assert isinstance(s.payload, BitString)
        mask = s.payload
        w = mask.weight
        rest = [i for i in range(self.n) if mask[i] == 0]
        half = len(rest) // 2
        out = []
        values = (0, 1) if w > 0 else (0,)
        for v in values:
            base = 0
            if v == 1:
                for i in range(self.n):
                    if mask[i] == 1:
                        base |= 1 << (self.n - 1 - i)
            # balanced fill of the remaining positions; for v the ones among
            # them are the minority, so the excess stays |mask|
            for ones in combinations(rest, half):
                value = base
                for i in ones:
                    value |= 1 << (self.n - 1 - i)
                out.append(BitString(value, self.n, n_max=DISCLOSURE_N_MAX))
        out.sort()
        return tuple(out)

    def _compat_count(self, s: Announcement) -> int:
        assert isinstance(s.payload, BitString)
        w = s.payload.weight
        f_s = 1 if w == 0 else 2
        m = self.n - w
        return binomial(m, m // 2) * f_s

    def _validate_payload(self, payload: Payload) -> None:
        if not isinstance(payload, BitString) or payload.n != self.n:
            raise ValueError(f"excess-bits announcement must be a length-{self.n} position mask")
        if (self.n - payload.weight) % 2 != 0:
            raise ValueError(
                f"mask weight {payload.weight} leaves an odd number of undisclosed positions"
            )


class Weight(DisclosureScheme):
    """Alice announces the number of ones: s = |k|."""

    kind = "weight"

    def _announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        return Announcement(self.kind, k.weight)

    def _supports(self, k: BitString) -> tuple[Announcement, ...]:
        return (Announcement(self.kind, k.weight),)

    def _support_size(self, k: BitString) -> int:
        return 1

    def _compatible(self, s: Announcement, k: BitString) -> bool:
        return s.payload == k.weight

    def _compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        assert isinstance(s.payload, int)
        w = s.payload
        out = [
            BitString(value, self.n, n_max=DISCLOSURE_N_MAX)
            for value in range(1 << self.n)
            if value.bit_count() == w
        ]
        return tuple(out)

    def _compat_count(self, s: Announcement) -> int:
        assert isinstance(s.payload, int)
        return binomial(self.n, s.payload)

    def _validate_payload(self, payload: Payload) -> None:
        if not isinstance(payload, int) or isinstance(payload, bool) or not 0 <= payload <= self.n:
            raise ValueError(f"weight announcement must be an integer in [0, {self.n}]")


class Parity(DisclosureScheme):
    """Alice announces the parity of k: s = |k| mod 2."""

    kind = "parity"

    def _announce(self, k: BitString, rng: np.random.Generator) -> Announcement:
        return Announcement(self.kind, k.weight & 1)

    def _supports(self, k: BitString) -> tuple[Announcement, ...]:
        return (Announcement(self.kind, k.weight & 1),)

    def _support_size(self, k: BitString) -> int:
        return 1

    def _compatible(self, s: Announcement, k: BitString) -> bool:
        return s.payload == (k.weight & 1)

    def _compat_outcomes(self, s: Announcement) -> tuple[BitString, ...]:
        assert isinstance(s.payload, int)
        out = [
            BitString(value, self.n, n_max=DISCLOSURE_N_MAX)
            for value in range(1 << self.n)
            if (value.bit_count() & 1) == s.payload
        ]
        return tuple(out)

    def _compat_count(self, s: Announcement) -> int:
        assert isinstance(s.payload, int)
        total = 0
        l = 0
        while 2 * l + s.payload <= self.n:
            total += binomial(self.n, 2 * l + s.payload)
            l += 1
        return total

    def _validate_payload(self, payload: Payload) -> None:
        if not isinstance(payload, int) or isinstance(payload, bool) or payload not in (0, 1):
            raise ValueError("parity announcement must be 0 or 1")


_SCHEME_CLASSES: dict[str, type[DisclosureScheme]] = {
    FullOutcome.kind: FullOutcome,
    ExcessBits.kind: ExcessBits,
    Weight.kind: Weight,
    Parity.kind: Parity,
}


def make_scheme(kind: str, n: int) -> DisclosureScheme:
    """Construct a disclosure scheme by its CLI/CSV name: full, excess, weight, parity."""
    try:
        cls = _SCHEME_CLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown scheme {kind!r}; choose from {', '.join(SCHEME_KINDS)}") from None
    return cls(n)


def all_announcements(scheme: DisclosureScheme) -> tuple[Announcement, ...]:
    """Every announcement the scheme can emit, deduplicated, in a fixed order."""
    seen: dict[str, Announcement] = {}
    for k in BitString.all_strings(scheme.n, n_max=DISCLOSURE_N_MAX):
        for s in scheme.supports(k):
            seen.setdefault(s.serialize(), s)
    return tuple(sorted(seen.values(), key=lambda a: (a.payload.value if isinstance(a.payload, BitString) else a.payload)))
