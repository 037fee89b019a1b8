"""Independent reference implementations used as test oracles.

Everything here is brute force and self-contained: no imports from the package
under test, only numpy and the standard library. Slow is fine; these exist so
the fast implementations have something honest to disagree with.
"""
from functools import lru_cache
from itertools import combinations, product

import numpy as np


# ---------------------------------------------------------------------------
# disclosure: brute-force joint distribution of (outcome, announcement)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def brute_joint(kind: str, n: int) -> dict[tuple[str, str], float]:
    """P(k, s) for every outcome/announcement pair, by direct enumeration.

    Keys are (k as 0/1 text, s serialized the same way the package does:
    bit text for full/excess, decimal for weight/parity). Cached; callers
    must not mutate the result.
    """
    joint: dict[tuple[str, str], float] = {}
    p_k = 1.0 / 2**n
    for value in range(2**n):
        k = format(value, f"0{n}b")
        w = k.count("1")
        if kind == "full":
            options = [k]
        elif kind == "weight":
            options = [str(w)]
        elif kind == "parity":
            options = [str(w & 1)]
        elif kind == "excess":
            excess = abs(2 * w - n)
            if excess == 0:
                options = ["0" * n]
            else:
                maj = "1" if 2 * w > n else "0"
                positions = [i for i, c in enumerate(k) if c == maj]
                options = []
                for combo in combinations(positions, excess):
                    mask = ["0"] * n
                    for i in combo:
                        mask[i] = "1"
                    options.append("".join(mask))
        else:
            raise ValueError(kind)
        for s in options:
            key = (k, s)
            joint[key] = joint.get(key, 0.0) + p_k / len(options)
    return joint


def brute_compat_outcomes(kind: str, n: int, s: str) -> list[str]:
    return sorted({k for (k, s2) in brute_joint(kind, n) if s2 == s})


def brute_supports(kind: str, n: int, k: str) -> list[str]:
    return sorted({s for (k2, s) in brute_joint(kind, n) if k2 == k})


# ---------------------------------------------------------------------------
# Bob statistics and the classical Holevo term
# ---------------------------------------------------------------------------

def bob_channel(a: int, b: int, k: str, k_prime: str, q_z: float, q_x: float) -> float:
    if a != b:
        return 1.0 / 2 ** len(k)
    q = q_z if a == 0 else q_x
    flips = sum(c1 != c2 for c1, c2 in zip(k, k_prime))
    return q**flips * (1 - q) ** (len(k) - flips)


def mutual_information_bits(joint: np.ndarray) -> float:
    """I(row; column) of a joint probability table, exact plug-in form."""
    pr = joint.sum(axis=1)
    pc = joint.sum(axis=0)
    mi = 0.0
    for i in range(joint.shape[0]):
        for j in range(joint.shape[1]):
            p = joint[i, j]
            if p > 1e-16:
                mi += p * np.log2(p / (pr[i] * pc[j]))
    return float(mi)


def chi_b_oracle(kind: str, n: int, b: int, q_z: float, q_x: float, p: float) -> float:
    """I(a; s, k') from the fully enumerated joint distribution."""
    disclosure = brute_joint(kind, n)
    announcements = sorted({s for _, s in disclosure})
    kprimes = [format(v, f"0{n}b") for v in range(2**n)]
    cols = {(s, kp): i for i, (s, kp) in enumerate(product(announcements, kprimes))}
    table = np.zeros((2, len(cols)))
    for a, p_a in ((0, p), (1, 1.0 - p)):
        for (k, s), p_ks in disclosure.items():
            for kp in kprimes:
                table[a, cols[s, kp]] += p_a * p_ks * bob_channel(a, b, k, kp, q_z, q_x)
    return mutual_information_bits(table)


# ---------------------------------------------------------------------------
# Eve: dense reconstruction of the conditional probe states, no shortcuts
# ---------------------------------------------------------------------------

def attack_lambdas(q_z: float, q_x: float, t: float) -> np.ndarray:
    return np.array(
        [
            1.0 - (q_x + t + q_z) / 2.0,
            (q_x + t - q_z) / 2.0,
            (-q_x + t + q_z) / 2.0,
            (q_x - t + q_z) / 2.0,
        ]
    )


def _xi(a: int, r: int, k: int, lam: np.ndarray) -> np.ndarray:
    # one probe's two-term vector in the basis (e00, e01, e10, e11)
    v = np.zeros(4)
    m = lam.reshape(2, 2)
    if a == 0:
        v[2 * r + 0] = np.sqrt(m[r, 0])
        v[2 * r + 1] = (-1.0) ** ((k ^ r) & 1) * np.sqrt(m[r, 1])
    else:
        v[r] = np.sqrt(m[0, r])
        v[2 + r] = (-1.0) ** (k & 1) * np.sqrt(m[1, r])
    return v


def _entropy_bits(rho: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(rho)
    eigs = eigs[eigs > 1e-12]
    return float(-(eigs * np.log2(eigs)).sum()) if eigs.size else 0.0


def rho_e_oracle(a: int, ks: list[str], lam: np.ndarray) -> np.ndarray:
    """Probe state given basis a and a uniform posterior over the outcomes ks."""
    n = len(ks[0])
    dim = 4**n
    rho = np.zeros((dim, dim))
    for k in ks:
        for r in product((0, 1), repeat=n):
            vec = np.ones(1)
            for i in range(n):
                vec = np.kron(vec, _xi(a, r[i], int(k[i]), lam))
            rho += np.outer(vec, vec) / len(ks)
    return rho


def chi_e_oracle(kind: str, n: int, q_z: float, q_x: float, t: float, p: float) -> float:
    """Eve's Holevo bound by dense 4^n reconstruction, announcement by announcement."""
    lam = attack_lambdas(q_z, q_x, t)
    joint = brute_joint(kind, n)
    by_s: dict[str, list[str]] = {}
    p_s: dict[str, float] = {}
    for (k, s), w in joint.items():
        by_s.setdefault(s, []).append(k)
        p_s[s] = p_s.get(s, 0.0) + w
    total = 0.0
    for s, ks in by_s.items():
        rho0 = rho_e_oracle(0, sorted(set(ks)), lam)
        rho1 = rho_e_oracle(1, sorted(set(ks)), lam)
        mix = p * rho0 + (1 - p) * rho1
        total += p_s[s] * (_entropy_bits(mix) - p * _entropy_bits(rho0) - (1 - p) * _entropy_bits(rho1))
    return total


# ---------------------------------------------------------------------------
# eigenvalues via the characteristic polynomial (small dims only)
# ---------------------------------------------------------------------------

def charpoly_eigs(matrix: np.ndarray) -> np.ndarray:
    roots = np.roots(np.poly(matrix))
    return np.sort(roots.real)


# ---------------------------------------------------------------------------
# balanced-ensemble decoding error, exhaustive over Bob's outcomes
# ---------------------------------------------------------------------------

def decode_error_oracle(m: int, p_zero: float = 0.5) -> float:
    """Exact decoding error for a balanced 2m-qubit ensemble, no noise.

    When the sender measured Z (probability p_zero) the receiver sees the
    balanced string unchanged and always decodes correctly. When the sender
    measured X, the receiver's 2m Z outcomes are uniform and decoding zero
    happens exactly when m of them are ones.
    """
    wrong_given_x = sum(1 for v in range(2 ** (2 * m)) if bin(v).count("1") == m)
    return (1.0 - p_zero) * wrong_given_x / 2 ** (2 * m)


def t_interval_oracle(q_z: float, q_x: float) -> tuple[float, float]:
    """Feasible t range found numerically from the weight signs.

    The worst weight is a minimum of linear functions of t, hence concave
    and unimodal, so ternary search locates its peak and bisection finds
    where feasibility is lost on each side. No grid, so intervals narrower
    than any fixed resolution (including single points) are still found.
    """

    def worst(t: float) -> float:
        return float(attack_lambdas(q_z, q_x, t).min())

    a, b = -1.0, 2.0
    for _ in range(200):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if worst(m1) < worst(m2):
            a = m1
        else:
            b = m2
    peak = (a + b) / 2.0
    if worst(peak) < -1e-9:
        raise ValueError("no feasible t at these error rates")

    if worst(-1.0) >= -1e-9:
        left = -1.0
    else:
        lo, hi = -1.0, peak
        for _ in range(100):
            mid = (lo + hi) / 2.0
            if worst(mid) >= -1e-9:
                hi = mid
            else:
                lo = mid
        left = hi
    if worst(2.0) >= -1e-9:
        right = 2.0
    else:
        lo, hi = peak, 2.0
        for _ in range(100):
            mid = (lo + hi) / 2.0
            if worst(mid) >= -1e-9:
                lo = mid
            else:
                hi = mid
        right = lo
    return left, right
