"""The symmetric (Bell-diagonal) attack family.

The attacked pair is diagonal in the Bell basis with coefficients lambda_ij
parametrized by the two error rates and one free parameter t:

    lambda_00 = 1 - (Q_X + t + Q_Z) / 2
    lambda_01 = (Q_X + t - Q_Z) / 2
    lambda_10 = (-Q_X + t + Q_Z) / 2
    lambda_11 = (Q_X - t + Q_Z) / 2

so that lambda_10 + lambda_11 = Q_Z and lambda_01 + lambda_11 = Q_X. The
feasible range of t below is derived from nonnegativity of the four
coefficients; it is a derivation, not a quoted result.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LAMBDA_ATOL = 1e-12

_LAMBDA_NAMES = ("lambda_00", "lambda_01", "lambda_10", "lambda_11")


def t_interval(q_z: float, q_x: float) -> tuple[float, float]:
    """Closed feasibility interval for t given the two error rates.

    Solving the four lambda >= 0 inequalities gives
    t_min = |Q_Z - Q_X| and t_max = min(Q_Z + Q_X, 2 - Q_Z - Q_X); both
    endpoints are themselves feasible.
    """
    if not (0.0 <= q_z <= 1.0 and 0.0 <= q_x <= 1.0):
        raise ValueError(f"error rates must lie in [0, 1]: got Q_Z={q_z}, Q_X={q_x}")
    return abs(q_z - q_x), min(q_z + q_x, 2.0 - q_z - q_x)


def _raw_lambdas(q_z: float, q_x: float, t: float) -> tuple[float, float, float, float]:
    return (
        1.0 - (q_x + t + q_z) / 2.0,
        (q_x + t - q_z) / 2.0,
        (-q_x + t + q_z) / 2.0,
        (q_x - t + q_z) / 2.0,
    )


def feasible_lambdas(q_z: float, q_x: float, t: float) -> tuple[float, float, float, float]:
    """The four Bell coefficients for (Q_Z, Q_X, t), rejecting infeasible t.

    Any coefficient below -1e-12 raises; tiny negatives produced by exact
    interval endpoints are clamped to zero.
    """
    raw = _raw_lambdas(q_z, q_x, t)
    clamped = []
    for name, lam in zip(_LAMBDA_NAMES, raw):
        if lam < -LAMBDA_ATOL:
            raise ValueError(
                f"infeasible t={t}: {name} = {lam} < 0 (feasible t in {t_interval(q_z, q_x)})"
            )
        clamped.append(max(lam, 0.0))
    return (clamped[0], clamped[1], clamped[2], clamped[3])


@dataclass(frozen=True)
class AttackSpec:
    """One attack: error rates (Q_Z, Q_X) plus the free parameter t.

    Construction rejects infeasible t (any lambda below -1e-12) and clamps
    the tiny negatives that exact interval endpoints produce.
    """

    q_z: float
    q_x: float
    t: float
    lambdas: tuple[float, float, float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.q_z <= 1.0 and 0.0 <= self.q_x <= 1.0):
            raise ValueError(f"error rates must lie in [0, 1]: got Q_Z={self.q_z}, Q_X={self.q_x}")
        object.__setattr__(self, "lambdas", feasible_lambdas(self.q_z, self.q_x, self.t))


def lambdas(spec: AttackSpec) -> tuple[float, float, float, float]:
    """The four Bell coefficients (lambda_00, lambda_01, lambda_10, lambda_11)."""
    return spec.lambdas


def sample_pauli(spec: AttackSpec, rng: np.random.Generator) -> tuple[int, int]:
    """Draw one Pauli label (i, j) with probability lambda_ij.

    The i component flips a Z-basis outcome, the j component flips an X-basis
    outcome, so the marginals reproduce the two error rates.
    """
    l00, l01, l10, _ = spec.lambdas
    u = rng.random()
    if u < l00:
        return (0, 0)
    if u < l00 + l01:
        return (0, 1)
    if u < l00 + l01 + l10:
        return (1, 0)
    return (1, 1)


def sample_pauli_array(spec: AttackSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized sample_pauli: an array of shape (size, 2) of (i, j) labels."""
    l00, l01, l10, _ = spec.lambdas
    u = rng.random(size)
    code = (u >= l00).astype(np.int8) + (u >= l00 + l01) + (u >= l00 + l01 + l10)
    return np.stack([code >> 1, code & 1], axis=1)
