"""Rate engine: the two Holevo quantities and the minimax search for
achievable secure net bit rates.

The secret is Alice's basis bit a. Bob's accessible information per ensemble
is bounded by chi_B, computed from his outcome statistics conditioned on the
public announcement; Eve's by chi_E, computed from her conditional probe
states. The achievable rate per ensemble is C = max(0, max_p min_t
(chi_B - chi_E)) with p = P_A(0) and t the attack's free parameter, and
R = C / n per EPR pair.

Eve's conditional states live on a 4^n-dimensional probe space with an
orthonormal per-probe basis {e_00, e_01, e_10, e_11} and per-probe components

    xi_r(k) for a = 0:  sqrt(lam[r,0]) e_r0 + (-1)^(k xor r) sqrt(lam[r,1]) e_r1
    xi_c(k) for a = 1:  sqrt(lam[0,c]) e_0c + (-1)^k        sqrt(lam[1,c]) e_1c

mixed over the posterior P(k|s) and the per-probe register string (r or c).
Three exact evaluation paths for the mixture entropy are implemented and they
agree to working precision (the tests enforce 1e-9 against an independent
dense reimplementation):

  dense      - assemble the 4^n matrix and diagonalize.
  gram       - the nonzero spectrum of sum_a w_a |u_a><u_a| equals the
               spectrum of the Gram matrix [sqrt(w_a w_b) <u_a|u_b>], whose
               size 2 |K(s)| 2^n is far below 4^n for the schemes with small
               compatible sets.
  components - when the compatible set K(s) is invariant under some XOR flips
               v (its stabilizer), the diagonal unitaries
               V_v = diag(1,-1,-1,1)^(tensor over v) commute with both
               conditional states; grading by the stabilizer's orthogonal
               complement W plus the row/column sparsity of the two states
               splits the mixture into (2^n/|W|)^2 blocks of dimension |W|^2.

Per-a entropies always use the small per-register Gram blocks. The engine
picks the cheapest valid mixture path unless one is forced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._version import __version__
from .attack import AttackSpec, feasible_lambdas, t_interval
from .bits import BitString, ENTROPY_PROB_FLOOR
from .disclosure import (
    Announcement,
    DisclosureScheme,
    DISCLOSURE_N_MAX,
    make_scheme,
)
from .operators import EIG_FLOOR, HermitianOperator

ENGINE_N_MAX = 5
# the dense cross-check path is capped at 4^6; nothing above n = 6 is allowed
ENGINE_N_HARD_CAP = 6
COARSE_GRID = 129
GS_TOL = 1e-7
MIXTURE_PATHS = ("auto", "components", "gram", "dense")

CSV_HEADER = "scheme,n,b,q_z,q_x,p_star,t_star,chi_b,chi_e,c_per_ensemble,r_per_pair,status"
BASIS_NAMES = ("z", "x")
SCHEME_ORDER = ("full", "excess", "weight", "parity")

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_P_EXACT_EPS = 1e-15
# memory budget for one batched eigensolve stack
_BATCH_BYTES = 48_000_000


@dataclass(frozen=True)
class ModelConfig:
    """One rate computation: disclosure scheme, ensemble size, Bob's basis, QBERs."""

    scheme: DisclosureScheme
    n: int
    b: int
    q_z: float
    q_x: float
    allow_large_n: bool = False

    def __post_init__(self) -> None:
        if self.scheme.n != self.n:
            raise ValueError(f"scheme is sized for n={self.scheme.n}, config says n={self.n}")
        cap = ENGINE_N_HARD_CAP if self.allow_large_n else ENGINE_N_MAX
        if not 1 <= self.n <= cap:
            raise ValueError(
                f"ensemble size {self.n} outside [1, {cap}]"
                + ("" if self.allow_large_n else " (pass allow_large_n to go to 6)")
            )
        if self.b not in (0, 1):
            raise ValueError(f"basis must be 0 (Z) or 1 (X), got {self.b}")
        if not (0.0 <= self.q_z <= 0.5 and 0.0 <= self.q_x <= 0.5):
            raise ValueError(f"QBERs must lie in [0, 0.5]: got ({self.q_z}, {self.q_x})")

    def __hash__(self) -> int:
        return hash((self.scheme, self.n, self.b, self.q_z, self.q_x, self.allow_large_n))


@dataclass(frozen=True)
class RateResult:
    """Optimum of one configuration: Holevo quantities at (p_star, t_star),
    the clamped rate C per ensemble and R = C/n per pair."""

    chi_b: float
    chi_e: float
    c: float
    r: float
    p_star: float
    t_star: float
    status: str = "ok"

    @property
    def insecure(self) -> bool:
        return self.status == "insecure"


def p_bob_given_alice(
    a: int, b: int, k: BitString, k_prime: BitString, q_z: float, q_x: float
) -> float:
    """Bob's outcome distribution P_a(k'|k): a binary symmetric product channel
    when the bases match (error rate Q_Z or Q_X), uniform otherwise."""
    if k.n != k_prime.n:
        raise ValueError("outcome strings must have equal length")
    n = k.n
    if a != b:
        return 1.0 / (1 << n)
    q = q_z if a == 0 else q_x
    d = (k.value ^ k_prime.value).bit_count()
    return q**d * (1.0 - q) ** (n - d)


# ---------------------------------------------------------------------------
# shared small helpers


def _entropy_vec(v: np.ndarray) -> float:
    """Entropy in bits of a probability vector, flooring below 1e-15."""
    w = v[v > ENTROPY_PROB_FLOOR]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def _entropy_eigs(e: np.ndarray) -> float:
    """Entropy in bits of eigenvalue arrays, flooring below 1e-12."""
    w = e[e > EIG_FLOOR]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def _kron_power(m: np.ndarray, n: int) -> np.ndarray:
    """m^(tensor n) for a 2x2 array: the (2^n, 2^n) table of per-position products."""
    out = np.array([[1.0]])
    for _ in range(n):
        out = np.kron(out, m)
    return out


def _bit_table(values: np.ndarray, n: int) -> np.ndarray:
    """(len(values), n) array of bits, leftmost bit first."""
    shifts = np.arange(n - 1, -1, -1)
    return (values[:, None] >> shifts[None, :]) & 1


def _parity_of_and(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise parity of popcount(a & b) for integer arrays (n <= 16)."""
    x = a & b
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


# ---------------------------------------------------------------------------
# announcement equivalence classes
#
# Two announcements s, s' are equivalent when K(s') is K(s) relabeled by an
# XOR flip or a position permutation: both relabelings are implemented by
# unitaries that act identically on the a = 0 and a = 1 conditional states
# (a diagonal sign unitary V_v and a probe permutation), so every entropy in
# chi_E and every outcome entropy in chi_B is unchanged. The classes below
# are validated numerically at n <= 3 by the test-suite before being relied
# on, as a guard against an unproven symmetry claim.


@dataclass(frozen=True)
class AnnouncementClass:
    rep: Announcement
    weight: float  # sum of P(s) over the class
    count: int  # number of announcements in the class


def announcement_classes(scheme: DisclosureScheme) -> tuple[AnnouncementClass, ...]:
    """Equivalence classes of announcements with their total probability."""
    n = scheme.n
    kind = scheme.kind
    if kind == "full":
        rep = Announcement(kind, BitString.zeros(n, n_max=DISCLOSURE_N_MAX))
        return (AnnouncementClass(rep, 1.0, 1 << n),)
    if kind == "parity":
        return (AnnouncementClass(Announcement(kind, 0), 1.0, 2),)
    if kind == "weight":
        out = []
        for w in range(n // 2 + 1):
            p_s, _ = scheme.posterior(Announcement(kind, w))
            if n - w == w:
                out.append(AnnouncementClass(Announcement(kind, w), p_s, 1))
            else:
                out.append(AnnouncementClass(Announcement(kind, w), 2.0 * p_s, 2))
        return tuple(out)
    if kind == "excess":
        out = []
        for e in range(n % 2, n + 1, 2):
            mask = ((1 << e) - 1) << (n - e) if e else 0
            rep = Announcement(kind, BitString(mask, n, n_max=DISCLOSURE_N_MAX))
            p_s, _ = scheme.posterior(rep)
            count = math.comb(n, e)
            out.append(AnnouncementClass(rep, count * p_s, count))
        return tuple(out)
    raise ValueError(f"unknown scheme kind {kind!r}")


# ---------------------------------------------------------------------------
# per-class evaluator


class _ClassEvaluator:
    """Everything needed to evaluate one announcement's chi_B and chi_E terms.

    Precomputes the attack-independent structure: the compatible set, the
    posterior's XOR spectrum W4, the stabilizer grading, sign tables, and
    gather indices. Attack-dependent tables are tiny Kronecker powers of 2x2
    matrices rebuilt per evaluation.
    """

    def __init__(self, config: ModelConfig, announcement: Announcement, weight: float) -> None:
        self.config = config
        self.weight = weight
        n = config.n
        self.n = n
        self.dim_probe = 1 << (2 * n)
        self.size = 1 << n

        outcomes = config.scheme.compat_outcomes(announcement)
        self.k_values = np.array([k.value for k in outcomes], dtype=np.int64)
        self.k_count = len(outcomes)
        # posterior P(k|s) is uniform for all four rules
        self.p_post = 1.0 / self.k_count

        self._init_bob_pieces()
        self._init_structure()

    # -- Bob side -----------------------------------------------------------

    def _init_bob_pieces(self) -> None:
        cfg = self.config
        q = cfg.q_z if cfg.b == 0 else cfg.q_x
        n = self.n
        all_kp = np.arange(self.size, dtype=np.int64)
        dist = (self.k_values[:, None] ^ all_kp[None, :]).astype(np.int64)
        pop = np.array([int(v).bit_count() for v in range(self.size)], dtype=np.int64)
        d = pop[dist]
        pw = q ** np.arange(n + 1) * (1.0 - q) ** (n - np.arange(n + 1))
        self._bob_matched = pw[d].mean(axis=0)
        self._bob_matched_h = _entropy_vec(self._bob_matched)

    def chi_b_term(self, p: float) -> float:
        """H of Bob's mixed outcome distribution minus the conditional entropies."""
        n = self.n
        uniform = 1.0 / self.size
        matched_w = p if self.config.b == 0 else 1.0 - p
        mix = matched_w * self._bob_matched + (1.0 - matched_w) * uniform
        term = _entropy_vec(mix) - matched_w * self._bob_matched_h - (1.0 - matched_w) * n
        return max(term, 0.0)

    def bob_dist(self, a: int) -> np.ndarray:
        """P_a(k'|s) as a vector over all 2^n outcomes."""
        if a == self.config.b:
            return self._bob_matched.copy()
        return np.full(self.size, 1.0 / self.size)

    # -- Eve side: structure --------------------------------------------------

    def _init_structure(self) -> None:
        n = self.n
        size = self.size
        kset = set(int(v) for v in self.k_values)
        stab = [v for v in range(size) if {k ^ v for k in kset} == kset]
        self.stabilizer = stab

        # XOR spectrum of the posterior: W4[d] = mean over K of (-1)^(k . d)
        all_d = np.arange(size, dtype=np.int64)
        signs = 1.0 - 2.0 * _parity_of_and(self.k_values[:, None], all_d[None, :])
        self.w4 = signs.mean(axis=0)

        gram_m = 2 * self.k_count * size
        self._paths: dict[str, object] = {}
        cost_gram = float(gram_m) ** 3
        cost_dense = float(self.dim_probe) ** 3
        if len(stab) > 1:
            w_sub = [g for g in range(size) if all(((g & v).bit_count() & 1) == 0 for v in stab)]
            n_blocks = (size // len(w_sub)) ** 2
            cost_comp = n_blocks * float(len(w_sub) ** 2) ** 3
        else:
            cost_comp = math.inf
        best = min(
            ("components", cost_comp), ("gram", cost_gram), ("dense", cost_dense),
            key=lambda kv: kv[1],
        )[0]
        self.auto_path = best
        self._w_sub = w_sub if len(stab) > 1 else None

        self._init_per_register()

    def _init_per_register(self) -> None:
        # XOR distance table for the per-register Gram blocks
        self._didx = (self.k_values[:, None] ^ self.k_values[None, :]).astype(np.int64)

    # -- Eve side: per-a entropies (register-graded Gram blocks) -------------

    @staticmethod
    def _pair_tables(lam: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        l00, l01, l10, l11 = lam
        t_rows = np.array([[l00 + l01, l00 - l01], [l10 + l11, l10 - l11]])
        t_cols = np.array([[l00 + l10, l00 - l10], [l01 + l11, l01 - l11]])
        return t_rows, t_cols

    def s_entropies(self, lam: Sequence[float]) -> tuple[float, float]:
        """(S(rho_{E|0,s}), S(rho_{E|1,s})) via one small Gram block per register
        string; states conditioned on one basis are block-diagonal there."""
        n = self.n
        t_rows, t_cols = self._pair_tables(lam)
        out = []
        for table in (_kron_power(t_rows, n), _kron_power(t_cols, n)):
            blocks = table[:, self._didx] * self.p_post  # (2^n, |K|, |K|)
            eigs = np.linalg.eigvalsh(blocks)
            out.append(_entropy_eigs(eigs.ravel()))
        return out[0], out[1]

    # -- Eve side: mixture entropy -------------------------------------------

    def _path(self, name: str):
        if name == "auto":
            name = self.auto_path
        if name in self._paths:
            return self._paths[name]
        if name == "components":
            if self._w_sub is None:
                raise ValueError("components path needs a nontrivial stabilizer")
            path = _ComponentsMixture(self)
        elif name == "gram":
            path = _GramMixture(self)
        elif name == "dense":
            if self.dim_probe > 4**ENGINE_N_HARD_CAP:
                raise ValueError("dense path dimension cap exceeded")
            path = _DenseMixture(self)
        else:
            raise ValueError(f"unknown mixture path {name!r}; choose from {MIXTURE_PATHS}")
        self._paths[name] = path
        return path

    def mixture_blocks(self, p: float, lam: Sequence[float], path: str = "auto") -> np.ndarray:
        """Stacked symmetric blocks whose joint spectrum is the mixture's
        nonzero spectrum (plus possibly exact zeros)."""
        return self._path(path).blocks_for(p, lam)

    def mixture_entropy(self, p: float, lam: Sequence[float], path: str = "auto") -> float:
        eigs = np.linalg.eigvalsh(self.mixture_blocks(p, lam, path))
        return _entropy_eigs(eigs.ravel())

    def holevo_term(self, p: float, lam: Sequence[float], path: str = "auto") -> float:
        """S(p rho_0 + (1-p) rho_1) - p S(rho_0) - (1-p) S(rho_1)."""
        if p < _P_EXACT_EPS or 1.0 - p < _P_EXACT_EPS:
            return 0.0
        s0, s1 = self.s_entropies(lam)
        return max(self.mixture_entropy(p, lam, path) - p * s0 - (1.0 - p) * s1, 0.0)


class _ComponentsMixture:
    """Stabilizer-graded mixture blocks.

    Basis elements are labeled (g, x): grade g = row xor column string, row
    string x. Within one block the a = 0 state couples equal x only and the
    a = 1 state couples equal columns only, with matrix elements

        M0[(g,x),(g',x)]  = (-1)^(x.d) W4[d] Amp[x, x+g] Amp[x, x+g'],  d = g+g'
        M1[(g,x),(g',x')] = W4[x+x'] Amp[x, y] Amp[x', y],  y = x+g = x'+g'

    (+ is XOR, Amp = sqrt(lam)^(tensor n)). Both are sign/W4 tables times an
    outer product of the gather vector u[(g,x)] = Amp[x, x xor g], so the
    attack-independent part is precomputed once.
    """

    def __init__(self, ev: _ClassEvaluator) -> None:
        n = ev.n
        size = ev.size
        w_sub = np.array(ev._w_sub, dtype=np.int64)
        self.n = n
        wn = len(w_sub)

        # coset representatives of W in {0,1}^n
        seen = np.zeros(size, dtype=bool)
        reps = []
        for g in range(size):
            if not seen[g]:
                reps.append(g)
                seen[np.bitwise_xor(g, w_sub)] = True

        dim = wn * wn
        x_idx_list, y_idx_list, s0_list, s1_list = [], [], [], []
        for g0 in reps:
            grades = g0 ^ w_sub
            for x0 in reps:
                xs = x0 ^ w_sub
                gg = np.repeat(grades, wn)
                xx = np.tile(xs, wn)
                yy = gg ^ xx
                x_idx_list.append(xx)
                y_idx_list.append(yy)
                d = gg[:, None] ^ gg[None, :]
                sign = 1.0 - 2.0 * _parity_of_and(xx[:, None], d)
                s0 = np.where(xx[:, None] == xx[None, :], sign * ev.w4[d], 0.0)
                s1 = np.where(yy[:, None] == yy[None, :], ev.w4[xx[:, None] ^ xx[None, :]], 0.0)
                s0_list.append(s0)
                s1_list.append(s1)
        self.x_idx = np.array(x_idx_list)  # (B, dim)
        self.y_idx = np.array(y_idx_list)
        self.s0 = np.array(s0_list)  # (B, dim, dim)
        self.s1 = np.array(s1_list)

    def blocks_for(self, p: float, lam: Sequence[float]) -> np.ndarray:
        amp = _kron_power(np.sqrt(np.asarray(lam, dtype=float)).reshape(2, 2), self.n)
        u = amp[self.x_idx, self.y_idx]  # (B, dim)
        outer = u[:, :, None] * u[:, None, :]
        # the posterior 1/|K| lives inside w4 already (it is a mean over K)
        return (p * self.s0 + (1.0 - p) * self.s1) * outer


class _GramMixture:
    """Weighted Gram matrix of the 2 |K| 2^n spanning vectors of the mixture.

    Row order: a = 0 register-major (r, k), then a = 1 register-major (c, k).
    Within one basis the overlaps are XOR-distance tables (diagonal in the
    register); across bases they are lam^(tensor n) gathers with a fixed sign.
    """

    def __init__(self, ev: _ClassEvaluator) -> None:
        n = ev.n
        size = ev.size
        kc = ev.k_count
        self.n = n
        self.size = size
        self.k_count = kc
        self.p_post = ev.p_post
        self.m_half = kc * size
        self.didx = ev._didx

        regs = np.repeat(np.arange(size, dtype=np.int64), kc)
        ks = np.tile(ev.k_values, size)
        self.row_reg = regs
        self.col_reg = regs
        # sign of <Xi0_r(k) | Xi1_c(k')> = (-1)^((k xor r).c + k'.r)
        left = ks ^ regs
        sign_pow = _parity_of_and(left[:, None], regs[None, :]) ^ _parity_of_and(
            ks[None, :], regs[:, None]
        )
        self.s01 = 1.0 - 2.0 * sign_pow

    def blocks_for(self, p: float, lam: Sequence[float]) -> np.ndarray:
        n = self.n
        kc = self.k_count
        q = 1.0 - p
        t_rows, t_cols = _ClassEvaluator._pair_tables(lam)
        table0 = _kron_power(t_rows, n)
        table1 = _kron_power(t_cols, n)
        lam_n = _kron_power(np.asarray(lam, dtype=float).reshape(2, 2), n)

        mh = self.m_half
        g = np.zeros((2 * mh, 2 * mh))
        blocks0 = table0[:, self.didx]  # (2^n, |K|, |K|)
        blocks1 = table1[:, self.didx]
        for reg in range(self.size):
            sl = slice(reg * kc, (reg + 1) * kc)
            g[sl, sl] = (p * self.p_post) * blocks0[reg]
            sl1 = slice(mh + reg * kc, mh + (reg + 1) * kc)
            g[sl1, sl1] = (q * self.p_post) * blocks1[reg]
        cross = self.s01 * lam_n[self.row_reg[:, None], self.col_reg[None, :]]
        cross *= math.sqrt(p * q) * self.p_post
        g[:mh, mh:] = cross
        g[mh:, :mh] = cross.T
        return g[None]


class _DenseMixture:
    """Plain 4^n assembly of p rho_0 + (1-p) rho_1; the slow reference path."""

    def __init__(self, ev: _ClassEvaluator) -> None:
        self.ev = ev

    def blocks_for(self, p: float, lam: Sequence[float]) -> np.ndarray:
        ev = self.ev
        rho0 = _dense_conditional(ev.n, ev.k_values, ev.p_post, 0, lam)
        rho1 = _dense_conditional(ev.n, ev.k_values, ev.p_post, 1, lam)
        return (p * rho0 + (1.0 - p) * rho1)[None]


def _xi_pair(a: int, reg: int, k_bit: int, lam: Sequence[float]) -> np.ndarray:
    """The two nonzero components of one probe's conditional vector."""
    l00, l01, l10, l11 = lam
    if a == 0:
        first = math.sqrt(l00 if reg == 0 else l10)
        second = math.sqrt(l01 if reg == 0 else l11)
        return np.array([first, -second if (k_bit ^ reg) else second])
    first = math.sqrt(l00 if reg == 0 else l01)
    second = math.sqrt(l10 if reg == 0 else l11)
    return np.array([first, -second if k_bit else second])


def _dense_conditional(
    n: int, k_values: np.ndarray, p_post: float, a: int, lam: Sequence[float]
) -> np.ndarray:
    """Dense 4^n conditional state, built from per-register product vectors."""
    dim = 1 << (2 * n)
    size = 1 << n
    rho = np.zeros((dim, dim))
    for reg in range(size):
        reg_bits = [(reg >> (n - 1 - i)) & 1 for i in range(n)]
        for kv in k_values:
            k_bits = [(int(kv) >> (n - 1 - i)) & 1 for i in range(n)]
            vec = np.array([1.0])
            idx = np.array([0])
            for i in range(n):
                pair = _xi_pair(a, reg_bits[i], k_bits[i], lam)
                if a == 0:
                    cells = np.array([2 * reg_bits[i], 2 * reg_bits[i] + 1])
                else:
                    cells = np.array([reg_bits[i], 2 + reg_bits[i]])
                vec = np.kron(vec, pair)
                idx = (idx[:, None] * 4 + cells[None, :]).ravel()
            idx = np.asarray(idx, dtype=np.int64)
            rho[np.ix_(idx, idx)] += p_post * np.outer(vec, vec)
    return rho


# ---------------------------------------------------------------------------
# public chi_B / chi_E / rho_E


class _Engine:
    """Evaluators plus small scalar caches for one configuration."""

    def __init__(self, config: ModelConfig, mixture_path: str = "auto") -> None:
        if mixture_path not in MIXTURE_PATHS:
            raise ValueError(f"unknown mixture path {mixture_path!r}")
        self.config = config
        self.mixture_path = mixture_path
        self.classes = announcement_classes(config.scheme)
        self.evaluators = [
            _ClassEvaluator(config, cls.rep, cls.weight) for cls in self.classes
        ]
        self._sa_cache: dict[tuple, list[tuple[float, float]]] = {}
        self._chib_cache: dict[float, float] = {}

    def chi_b(self, p: float) -> float:
        got = self._chib_cache.get(p)
        if got is None:
            got = sum(ev.weight * ev.chi_b_term(p) for ev in self.evaluators)
            got = min(max(got, 0.0), 1.0)
            self._chib_cache[p] = got
        return got

    def _s_entropies(self, lam: tuple) -> list[tuple[float, float]]:
        got = self._sa_cache.get(lam)
        if got is None:
            got = [ev.s_entropies(lam) for ev in self.evaluators]
            self._sa_cache[lam] = got
        return got

    def chi_e(self, p: float, lam: tuple) -> float:
        if p < _P_EXACT_EPS or 1.0 - p < _P_EXACT_EPS:
            return 0.0
        sa = self._s_entropies(lam)
        total = 0.0
        for ev, (s0, s1) in zip(self.evaluators, sa):
            mix = ev.mixture_entropy(p, lam, self.mixture_path)
            total += ev.weight * max(mix - p * s0 - (1.0 - p) * s1, 0.0)
        return min(total, 1.0)

    def chi_e_batch(self, p: float, lams: list[tuple]) -> np.ndarray:
        """chi_E at one p over many attacks, with the eigensolves batched."""
        if p < _P_EXACT_EPS or 1.0 - p < _P_EXACT_EPS:
            return np.zeros(len(lams))
        out = np.zeros(len(lams))
        for ei, ev in enumerate(self.evaluators):
            sa = [self._s_entropies(lam)[ei] for lam in lams]
            per_block = None
            stacks: list[np.ndarray] = []
            mixes = np.empty(len(lams))
            filled = 0
            for ti, lam in enumerate(lams):
                blocks = ev.mixture_blocks(p, lam, self.mixture_path)
                if per_block is None:
                    per_block = blocks.shape[0]
                    chunk = max(1, int(_BATCH_BYTES // max(1, blocks.nbytes)))
                stacks.append(blocks)
                if len(stacks) == chunk or ti == len(lams) - 1:
                    eigs = np.linalg.eigvalsh(np.concatenate(stacks))
                    eigs = eigs.reshape(len(stacks), -1)
                    for row in eigs:
                        mixes[filled] = _entropy_eigs(row)
                        filled += 1
                    stacks = []
            for ti, lam in enumerate(lams):
                s0, s1 = sa[ti]
                out[ti] += ev.weight * max(mixes[ti] - p * s0 - (1.0 - p) * s1, 0.0)
        return np.minimum(out, 1.0)


_ENGINE_CACHE: dict[tuple[ModelConfig, str], _Engine] = {}
_ENGINE_CACHE_CAP = 8


def _engine_for(config: ModelConfig, mixture_path: str = "auto") -> _Engine:
    key = (config, mixture_path)
    eng = _ENGINE_CACHE.get(key)
    if eng is None:
        eng = _Engine(config, mixture_path)
        if len(_ENGINE_CACHE) >= _ENGINE_CACHE_CAP:
            _ENGINE_CACHE.pop(next(iter(_ENGINE_CACHE)))
        _ENGINE_CACHE[key] = eng
    return eng


def chi_B(config: ModelConfig, p: float) -> float:
    """Bob's Holevo bound at P_A(0) = p, in bits (one secret bit, so in [0, 1])."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return _engine_for(config).chi_b(p)


def chi_E(config: ModelConfig, spec: AttackSpec, p: float, *, mixture_path: str = "auto") -> float:
    """Eve's Holevo bound at P_A(0) = p under the given attack, in bits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return _engine_for(config, mixture_path).chi_e(p, tuple(spec.lambdas))


def rho_E(a: int, s: Announcement, config: ModelConfig, spec: AttackSpec) -> HermitianOperator:
    """Eve's conditional probe state given the basis bit a and announcement s.

    Block-diagonal over the per-probe register string (2^n blocks of dimension
    2^n on the 4^n probe space); complex dtype by module convention.
    """
    if a not in (0, 1):
        raise ValueError(f"a must be 0 or 1, got {a}")
    scheme = config.scheme
    outcomes = scheme.compat_outcomes(s)
    n = config.n
    size = 1 << n
    p_post = 1.0 / len(outcomes)
    lam = spec.lambdas
    weights = np.int64(4) ** np.arange(n - 1, -1, -1)

    blocks = []
    cs = np.arange(size, dtype=np.int64)
    c_bits = _bit_table(cs, n)
    for reg in range(size):
        reg_bits = [(reg >> (n - 1 - i)) & 1 for i in range(n)]
        sub = np.zeros((size, size), dtype=complex)
        for k in outcomes:
            vec = np.array([1.0])
            for i in range(n):
                vec = np.kron(vec, _xi_pair(a, reg_bits[i], k[i], lam))
            sub += p_post * np.outer(vec, vec)
        if a == 0:
            cells = np.array([2 * rb for rb in reg_bits], dtype=np.int64)
            idx = (c_bits + cells[None, :]) @ weights
        else:
            cells = np.array(reg_bits, dtype=np.int64)
            idx = (2 * c_bits + cells[None, :]) @ weights
        blocks.append((tuple(int(i) for i in idx), sub))
    return HermitianOperator(dim=1 << (2 * n), blocks=tuple(blocks))


# ---------------------------------------------------------------------------
# minimax optimization


def _golden_section(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Deterministic golden-section minimization; returns (best_x, best_value)."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = fun(x2)
        if f1 < best_f:
            best_x, best_f = x1, f1
        if f2 < best_f:
            best_x, best_f = x2, f2
    return best_x, best_f


def achievable_rate(
    config: ModelConfig,
    *,
    coarse: int = COARSE_GRID,
    gs_tol: float = GS_TOL,
    mixture_path: str = "auto",
) -> RateResult:
    """Maximize over p the attack-minimized advantage chi_B - chi_E.

    Exact minimax, max over p in [0,1] of min over feasible t: each 1-D search
    is a coarse grid (129 points by default) followed by golden-section
    refinement of the bracketing interval to 1e-7. Deterministic throughout.
    """
    if coarse < 3:
        raise ValueError("coarse grid needs at least 3 points")
    engine = _Engine(config, mixture_path)
    t_lo, t_hi = t_interval(config.q_z, config.q_x)
    q_z, q_x = config.q_z, config.q_x

    def lam_of(t: float) -> tuple:
        return feasible_lambdas(q_z, q_x, t)

    def inner_min(p: float) -> tuple[float, float]:
        """min over t of chi_B(p) - chi_E(p, t); returns (value, argmin t)."""
        cb = engine.chi_b(p)
        if p < _P_EXACT_EPS or 1.0 - p < _P_EXACT_EPS:
            return 0.0, t_lo
        if t_hi - t_lo < 1e-15:
            return cb - engine.chi_e(p, lam_of(t_lo)), t_lo
        ts = np.linspace(t_lo, t_hi, coarse)
        ces = engine.chi_e_batch(p, [lam_of(float(t)) for t in ts])
        vals = cb - ces
        i = int(np.argmin(vals))
        best_t, best_v = float(ts[i]), float(vals[i])
        lo = float(ts[max(i - 1, 0)])
        hi = float(ts[min(i + 1, coarse - 1)])
        gx, gv = _golden_section(lambda t: cb - engine.chi_e(p, lam_of(t)), lo, hi, gs_tol)
        if gv < best_v:
            best_t, best_v = gx, gv
        return best_v, best_t

    # p = 0 and p = 1 carry no secret (the advantage is exactly 0 there), so
    # the maximum is taken over interior candidates; a configuration whose
    # every interior p has negative advantage is flagged insecure.
    ps = np.linspace(0.0, 1.0, coarse)
    inner_vals = np.empty(coarse)
    inner_ts = np.empty(coarse)
    for i, p in enumerate(ps):
        inner_vals[i], inner_ts[i] = inner_min(float(p))
    j = 1 + int(np.argmax(inner_vals[1:-1]))
    best_p, best_v, best_t = float(ps[j]), float(inner_vals[j]), float(inner_ts[j])
    lo = float(ps[j - 1])
    hi = float(ps[j + 1])

    inner_arg: dict[float, float] = {}

    def neg_outer(p: float) -> float:
        v, t_arg = inner_min(p)
        inner_arg[p] = t_arg
        return -v

    gx, gv = _golden_section(neg_outer, lo, hi, gs_tol)
    if -gv > best_v:
        best_v = -gv
        best_p = gx
        best_t = inner_arg[gx]

    chi_b_star = engine.chi_b(best_p)
    chi_e_star = engine.chi_e(best_p, lam_of(best_t))
    raw = best_v
    c = max(0.0, raw)
    status = "ok" if raw >= 0.0 else "insecure"
    return RateResult(
        chi_b=chi_b_star,
        chi_e=chi_e_star,
        c=c,
        r=c / config.n,
        p_star=best_p,
        t_star=best_t,
        status=status,
    )


# ---------------------------------------------------------------------------
# sweeps and CSV


def _sweep_one(args) -> RateResult:
    config, kwargs = args
    try:
        return achievable_rate(config, **kwargs)
    except Exception as exc:  # per-point failures become error rows
        return RateResult(
            chi_b=math.nan, chi_e=math.nan, c=math.nan, r=math.nan,
            p_star=math.nan, t_star=math.nan, status=f"error:{exc}",
        )


def sweep(
    configs: Sequence[ModelConfig],
    *,
    threads: int = 1,
    coarse: int = COARSE_GRID,
    gs_tol: float = GS_TOL,
    mixture_path: str = "auto",
) -> list[RateResult]:
    """Evaluate achievable_rate over many configurations.

    Results come back in input order; per-point failures are recorded as
    error rows and never abort the sweep. threads > 1 fans points out to
    worker processes; results are identical for any degree.
    """
    kwargs = {"coarse": coarse, "gs_tol": gs_tol, "mixture_path": mixture_path}
    items = [(cfg, kwargs) for cfg in configs]
    if threads > 1 and len(items) > 1:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(processes=threads) as pool:
            return pool.map(_sweep_one, items)
    return [_sweep_one(item) for item in items]


def format_csv_float(x: float) -> str:
    """9 significant digits, plain decimal notation (never exponent form)."""
    if math.isnan(x):
        return ""
    if x == 0.0:
        return "0.00000000"
    exponent = math.floor(math.log10(abs(x)))
    for _ in range(2):
        decimals = max(0, 8 - exponent)
        text = f"{x:.{decimals}f}"
        rounded = float(text)
        # rounding can bump the magnitude up one decade; reformat once if so
        new_exp = exponent if rounded == 0.0 else math.floor(math.log10(abs(rounded)))
        if new_exp == exponent:
            break
        exponent = new_exp
    return text


def csv_row(config: ModelConfig, result: RateResult) -> str:
    status = result.status.replace(",", ";").replace("\n", " ")
    fields = [
        config.scheme.kind,
        str(config.n),
        BASIS_NAMES[config.b],
        format_csv_float(config.q_z),
        format_csv_float(config.q_x),
        format_csv_float(result.p_star),
        format_csv_float(result.t_star),
        format_csv_float(result.chi_b),
        format_csv_float(result.chi_e),
        format_csv_float(result.c),
        format_csv_float(result.r),
        status,
    ]
    return ",".join(fields)


def engine_settings_comment(coarse: int = COARSE_GRID, gs_tol: float = GS_TOL) -> str:
    """Seed-free provenance line appended to sweep CSV files."""
    return (
        f"# engine: coarse_grid={coarse} golden_section_tol={gs_tol} "
        f"n_default_cap={ENGINE_N_MAX} version={__version__}"
    )
