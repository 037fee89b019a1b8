"""Seeded Monte Carlo simulation of protocol sessions.

Two session kinds share one report shape: the fixed-basis two-qubit-group
protocol with ensemble balancing and majority decoding ("cdm06" mode), and
the general announcement model whose classical shadow (a, s, k') validates
the analytic chi_B ("model" mode).

Eve's quantum side information is never sampled. The simulator exposes no
classical estimator of chi_E; any such estimator would be unsound, since her
advantage lives in the joint quantum states, not in any sampled classical
record. Only Bob-side statistics are estimated here.

Determinism: every run derives per-chunk child streams from one seed via
SeedSequence.spawn, with a fixed chunk size, so results are bit-identical
for any parallel degree and for serial execution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import AttackSpec, sample_pauli
from .disclosure import DisclosureScheme

TRIAL_CHUNK = 4096
QBER_MIN_PAIRS = 100
QBER_MIN_SIFTED = 10
# two-sided Hoeffding at 99% coverage: eps = sqrt(ln(2/alpha) / (2 m))
QBER_ALPHA = 0.01

MODES = ("cdm06", "model")


@dataclass(frozen=True)
class QberEstimate:
    """Frequency estimate with a two-sided Hoeffding confidence interval."""

    value: float
    lower: float
    upper: float
    sifted: int
    unreliable: bool = False


@dataclass(frozen=True)
class SessionConfig:
    """One simulation session.

    mode "model" sizes ensembles by n and needs a scheme; mode "cdm06" sizes
    by the per-trial qubit count n_prime (the decoded group is the balanced
    remainder). p is P_A(0). sacrifice_fraction of all transmitted pairs is
    spent on channel diagnosis and must leave at least one message pair per
    ensemble.
    """

    mode: str
    attack: AttackSpec
    p: float
    trials: int
    seed: int
    sacrifice_fraction: float = 0.1
    scheme: DisclosureScheme | None = None
    n: int | None = None
    b: int = 0
    n_prime: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0.0 < self.sacrifice_fraction < 1.0:
            raise ValueError("sacrifice_fraction must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode == "model":
            if self.scheme is None or self.n is None:
                raise ValueError("model mode needs scheme and n")
            if self.scheme.n != self.n:
                raise ValueError(f"scheme sized for n={self.scheme.n}, config says {self.n}")
            if self.b not in (0, 1):
                raise ValueError("b must be 0 (Z) or 1 (X)")
            ensemble = self.n
        else:
            if self.n_prime is None or self.n_prime < 2:
                raise ValueError("cdm06 mode needs n_prime >= 2")
            ensemble = self.n_prime
        if ensemble * (1.0 - self.sacrifice_fraction) < 1.0:
            raise ValueError(
                "sacrifice_fraction leaves no message pair per ensemble "
                f"({ensemble} pairs, fraction {self.sacrifice_fraction})"
            )


@dataclass(frozen=True)
class SessionReport:
    """Aggregated session statistics; fields inapplicable to the session's
    mode are None."""

    qber_z_hat: QberEstimate | None
    qber_x_hat: QberEstimate | None
    p_e_hat: float | None
    p_e_trials: int
    p_e_by_m: dict[int, tuple[int, int]] | None  # realized m -> (trials, errors)
    discard_stats: dict[int, float] | None  # discarded count -> frequency
    all_discard_rate: float | None
    mi_hat: float | None
    mi_bias_bound: float | None
    trials: int = 0

    def __post_init__(self) -> None:
        for name in ("p_e_hat", "all_discard_rate", "mi_hat"):
            v = getattr(self, name)
            if v is not None and not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"{name} = {v} outside [0, 1]")


def _child_rngs(seed: int, chunks: int) -> list[np.random.Generator]:
    seq = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(c)) for c in seq.spawn(chunks)]


def _chunk_sizes(trials: int) -> list[int]:
    full, rem = divmod(trials, TRIAL_CHUNK)
    return [TRIAL_CHUNK] * full + ([rem] if rem else [])


# ---------------------------------------------------------------------------
# single-round reference and QBER estimation


def simulate_epr_round(
    attack: AttackSpec, a: int, b: int, rng: np.random.Generator
) -> tuple[int, int]:
    """One EPR pair: Alice's uniform outcome and Bob's outcome.

    Matching bases copy Alice's bit through a flip channel (the Z component
    of the Pauli label for basis 0, the X component for basis 1); differing
    bases leave Bob uniform and independent.
    """
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("basis bits must be 0 or 1")
    alice = int(rng.integers(0, 2))
    if a != b:
        return alice, int(rng.integers(0, 2))
    i, j = sample_pauli(attack, rng)
    flip = i if a == 0 else j
    return alice, alice ^ flip


def estimate_qber(
    attack: AttackSpec, pairs: int, rng: np.random.Generator
) -> tuple[QberEstimate, QberEstimate]:
    """Sifted QBER estimates: random independent bases on both sides, keep
    matching-basis rounds, report per-basis disagreement with a Hoeffding
    99% interval. Under ten sifted rounds in a basis flags that estimate
    unreliable."""
    if pairs < QBER_MIN_PAIRS:
        raise ValueError(f"need at least {QBER_MIN_PAIRS} pairs, got {pairs}")
    alice_basis = rng.integers(0, 2, size=pairs)
    bob_basis = rng.integers(0, 2, size=pairs)
    u = rng.random(pairs)
    out = []
    for basis, q in ((0, attack.q_z), (1, attack.q_x)):
        keep = (alice_basis == basis) & (bob_basis == basis)
        m = int(keep.sum())
        if m == 0:
            out.append(QberEstimate(0.0, 0.0, 1.0, 0, unreliable=True))
            continue
        disagree = int((u[keep] < q).sum())
        hat = disagree / m
        eps = math.sqrt(math.log(2.0 / QBER_ALPHA) / (2.0 * m))
        out.append(
            QberEstimate(
                value=hat,
                lower=max(0.0, hat - eps),
                upper=min(1.0, hat + eps),
                sifted=m,
                unreliable=m < QBER_MIN_SIFTED,
            )
        )
    return out[0], out[1]


def _diagnosis_estimates(
    config: SessionConfig, ensemble: int, rng: np.random.Generator
) -> tuple[QberEstimate | None, QberEstimate | None]:
    pool = round(config.sacrifice_fraction * config.trials * ensemble)
    if pool < QBER_MIN_PAIRS:
        return None, None
    qz, qx = estimate_qber(config.attack, pool, rng)
    return qz, qx


# ---------------------------------------------------------------------------
# balanced-group protocol ("cdm06")


def _uniform_subset_mask(
    keys: np.ndarray, allowed: np.ndarray, counts: np.ndarray
) -> np.ndarray:
    """Row-wise uniform choice of counts[i] positions among allowed[i] ones.

    keys are iid uniforms; the counts[i] smallest keys inside the allowed set
    win, which is a uniform subset. Returns a boolean mask of chosen cells.
    """
    masked = np.where(allowed, keys, np.inf)
    order = np.argsort(masked, axis=1, kind="stable")
    ranks = np.empty_like(order)
    rows = np.arange(keys.shape[0])[:, None]
    ranks[rows, order] = np.arange(keys.shape[1])[None, :]
    return ranks < counts[:, None]


def run_cdm06(config: SessionConfig) -> SessionReport:
    """Monte Carlo of the fixed-basis protocol with ensemble balancing.

    Per trial: Alice measures n_prime qubits in her basis a, discards excess
    majority outcomes (chosen uniformly) to leave a balanced group of 2m,
    announces the discarded positions, and Bob measures the kept qubits in Z.
    Bob decodes 0 when he sees exactly m of each value. Trials whose group is
    empty (m = 0) are communication failures, not decoding errors.
    """
    if config.mode != "cdm06":
        raise ValueError("run_cdm06 needs mode='cdm06'")
    n_p = config.n_prime
    assert n_p is not None
    sizes = _chunk_sizes(config.trials)
    rngs = _child_rngs(config.seed, len(sizes) + 1)

    discard_counts: dict[int, int] = {}
    m_stats: dict[int, list[int]] = {}
    errors = 0
    decoded_trials = 0
    for size, rng in zip(sizes, rngs[:-1]):
        a = (rng.random(size) >= config.p).astype(np.int8)  # P(a=0) = p
        alice = rng.integers(0, 2, size=(size, n_p), dtype=np.int8)
        ones = alice.sum(axis=1)
        m = np.minimum(ones, n_p - ones)
        majority_val = (ones * 2 >= n_p).astype(np.int8)
        # ties (ones == n_p - ones) have no excess, so the value is unused
        excess = n_p - 2 * m
        discard = _uniform_subset_mask(
            rng.random((size, n_p)), alice == majority_val[:, None], excess
        )
        kept = ~discard

        flips_z = (rng.random((size, n_p)) < config.attack.q_z).astype(np.int8)
        bob_uniform = rng.integers(0, 2, size=(size, n_p), dtype=np.int8)
        bob = np.where(a[:, None] == 0, alice ^ flips_z, bob_uniform)

        kept_ones = (bob & kept).sum(axis=1)
        decode_zero = kept_ones == m
        ok_trial = m > 0
        err = ok_trial & (decode_zero != (a == 0))

        errors += int(err.sum())
        decoded_trials += int(ok_trial.sum())
        for d, c in zip(*np.unique(excess, return_counts=True)):
            discard_counts[int(d)] = discard_counts.get(int(d), 0) + int(c)
        for mv in np.unique(m):
            sel = m == mv
            stats = m_stats.setdefault(int(mv), [0, 0])
            stats[0] += int(sel.sum())
            stats[1] += int((err & sel).sum())

    qz_hat, qx_hat = _diagnosis_estimates(config, n_p, rngs[-1])
    total = config.trials
    all_discard = m_stats.get(0, [0, 0])[0]
    return SessionReport(
        qber_z_hat=qz_hat,
        qber_x_hat=qx_hat,
        p_e_hat=(errors / decoded_trials) if decoded_trials else None,
        p_e_trials=decoded_trials,
        p_e_by_m={mv: (c, e) for mv, (c, e) in sorted(m_stats.items()) if mv > 0},
        discard_stats={d: c / total for d, c in sorted(discard_counts.items())},
        all_discard_rate=all_discard / total,
        mi_hat=None,
        mi_bias_bound=None,
        trials=total,
    )


# ---------------------------------------------------------------------------
# announcement-model sessions


def _announce_codes(
    scheme: DisclosureScheme, k: np.ndarray, w: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized announcement, encoded as an integer per trial.

    Distributions match the disclosure module: deterministic rules map
    directly; the excess rule picks a uniform subset of majority positions.
    """
    n = scheme.n
    kind = scheme.kind
    if kind == "full":
        return k.astype(np.int64)
    if kind == "weight":
        return w.astype(np.int64)
    if kind == "parity":
        return (w & 1).astype(np.int64)
    if kind == "excess":
        size = k.shape[0]
        excess = np.abs(2 * w - n)
        majority_val = (2 * w >= n).astype(np.int8)
        bits = ((k[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1).astype(np.int8)
        chosen = _uniform_subset_mask(
            rng.random((size, n)), bits == majority_val[:, None], excess
        )
        weights = 1 << np.arange(n - 1, -1, -1)
        return (chosen * weights[None, :]).sum(axis=1).astype(np.int64)
    raise ValueError(f"unknown scheme kind {kind!r}")


def _plug_in_mi(codes_a: np.ndarray, codes_sk: np.ndarray) -> tuple[float, float]:
    """Plug-in mutual information of an empirical joint, in bits, plus the
    Miller-Madow bias bound (nonzero cells - 1) / (2 N ln 2)."""
    total = codes_a.shape[0]
    joint_codes = codes_a.astype(np.int64) * (codes_sk.max() + 1 if codes_sk.size else 1)
    joint_codes = joint_codes + codes_sk

    def h(codes: np.ndarray) -> tuple[float, int]:
        _, counts = np.unique(codes, return_counts=True)
        freq = counts / total
        return float(-(freq * np.log2(freq)).sum()), counts.size

    h_a, _ = h(codes_a)
    h_sk, _ = h(codes_sk)
    h_joint, cells = h(joint_codes)
    mi = max(0.0, h_a + h_sk - h_joint)
    bias = (cells - 1) / (2.0 * total * math.log(2.0))
    return mi, bias


def run_model(config: SessionConfig) -> SessionReport:
    """Monte Carlo of the announcement model's classical shadow.

    Per trial: draw the basis bit a with P_A(0) = p, Alice's outcome k
    uniform, the announcement s by the scheme's rule, and Bob's outcome k'
    through the channel (flip channel when bases match, uniform otherwise).
    Reports the plug-in mutual information I(A; S, K') in bits.
    """
    if config.mode != "model":
        raise ValueError("run_model needs mode='model'")
    scheme = config.scheme
    n = config.n
    assert scheme is not None and n is not None
    sizes = _chunk_sizes(config.trials)
    rngs = _child_rngs(config.seed, len(sizes) + 1)

    q_match = config.attack.q_z if config.b == 0 else config.attack.q_x
    a_parts: list[np.ndarray] = []
    sk_parts: list[np.ndarray] = []
    for size, rng in zip(sizes, rngs[:-1]):
        a = (rng.random(size) >= config.p).astype(np.int8)  # P(a=0) = p
        k = rng.integers(0, 1 << n, size=size, dtype=np.int64)
        bits = ((k[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1).astype(np.int8)
        w = bits.sum(axis=1)
        s_codes = _announce_codes(scheme, k, w, rng)

        weights = (1 << np.arange(n - 1, -1, -1)).astype(np.int64)
        flips = (rng.random((size, n)) < q_match).astype(np.int8)
        matched = (bits ^ flips).astype(np.int64) @ weights
        uniform = rng.integers(0, 1 << n, size=size, dtype=np.int64)
        k_prime = np.where(a == config.b, matched, uniform)

        a_parts.append(a)
        sk_parts.append(s_codes * (1 << n) + k_prime)

    mi, bias = _plug_in_mi(np.concatenate(a_parts), np.concatenate(sk_parts))
    qz_hat, qx_hat = _diagnosis_estimates(config, n, rngs[-1])
    return SessionReport(
        qber_z_hat=qz_hat,
        qber_x_hat=qx_hat,
        p_e_hat=None,
        p_e_trials=0,
        p_e_by_m=None,
        discard_stats=None,
        all_discard_rate=None,
        mi_hat=mi,
        mi_bias_bound=bias,
        trials=config.trials,
    )


def run_session(config: SessionConfig) -> SessionReport:
    return run_cdm06(config) if config.mode == "cdm06" else run_model(config)


# ---------------------------------------------------------------------------
# ensemble balancing statistics


def ensemble_imbalance_stats(
    n_pairs: int, trials: int, rng: np.random.Generator
) -> tuple[float, float, np.ndarray]:
    """Imbalance of N fair coin flips: delta = (#zeros) - N/2.

    Returns (mean delta, std delta, bloch_z samples 2 delta / N). The spread
    grows as sqrt(N)/2, which is what makes basis-hiding by balancing cheap.
    """
    if n_pairs < 2:
        raise ValueError("need at least 2 pairs")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    zeros = rng.binomial(n_pairs, 0.5, size=trials)
    delta = zeros - n_pairs / 2.0
    return float(delta.mean()), float(delta.std()), 2.0 * delta / n_pairs


def analytic_decode_error(m: int) -> float:
    """Closed-form average decoding error for a balanced group of 2m:
    C(2m, m) / 2^(2m+1), with the basis bit uniform."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return math.comb(2 * m, m) / 2.0 ** (2 * m + 1)


# ---------------------------------------------------------------------------
# report serialization


def report_to_kv(report: SessionReport) -> str:
    """Flat key=value text form, one field per line, deterministic order."""
    lines = []

    def put(key: str, value) -> None:
        if value is None:
            lines.append(f"{key} =")
        elif isinstance(value, float):
            lines.append(f"{key} = {value:.9g}")
        else:
            lines.append(f"{key} = {value}")

    put("trials", report.trials)
    for name, est in (("qber_z", report.qber_z_hat), ("qber_x", report.qber_x_hat)):
        if est is None:
            put(name + "_hat", None)
        else:
            put(name + "_hat", est.value)
            put(name + "_lower", est.lower)
            put(name + "_upper", est.upper)
            put(name + "_sifted", est.sifted)
            put(name + "_unreliable", est.unreliable)
    put("p_e_hat", report.p_e_hat)
    put("p_e_trials", report.p_e_trials)
    if report.p_e_by_m is not None:
        for mv, (count, errs) in report.p_e_by_m.items():
            put(f"p_e_m{mv}_trials", count)
            put(f"p_e_m{mv}_errors", errs)
    if report.discard_stats is not None:
        for d, freq in report.discard_stats.items():
            put(f"discard_{d}_freq", freq)
    put("all_discard_rate", report.all_discard_rate)
    put("mi_hat", report.mi_hat)
    put("mi_bias_bound", report.mi_bias_bound)
    return "\n".join(lines) + "\n"
