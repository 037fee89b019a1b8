"""Finite-dimensional Hermitian operators, eigenvalues, and von Neumann entropy.

Operators may carry an explicit block-diagonal structure (disjoint index
subsets with one Hermitian sub-matrix each); eigenvalues are then computed per
block and merged, which is exact. Complex arithmetic is used throughout even
though the states built elsewhere are real in the chosen basis: a silent
convention change must not turn into a silent phase bug.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_ATOL = 1e-12
STATE_TRACE_ATOL = 1e-10
STATE_EIG_ATOL = 1e-10
# eigenvalues below this are treated as exact zeros inside entropy sums;
# sub-normalized constructions produce numerically tiny negatives
EIG_FLOOR = 1e-12
DENSE_DIM_CAP = 4**6

Block = tuple[tuple[int, ...], np.ndarray]


def _check_hermitian(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"not a square matrix: shape {m.shape}")
    if not np.allclose(m, m.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
        raise ValueError("matrix is not Hermitian within 1e-12")


@dataclass(frozen=True)
class HermitianOperator:
    """A Hermitian matrix on a dim-dimensional space, dense or block-diagonal.

    Exactly one representation is stored. Block form is a sequence of
    (index subset, sub-matrix) pairs with pairwise disjoint subsets; indices
    not covered by any block are implicit zero rows/columns.
    """

    dim: int
    entries: np.ndarray | None = None
    blocks: tuple[Block, ...] | None = None

    def __post_init__(self) -> None:
        if (self.entries is None) == (self.blocks is None):
            raise ValueError("provide exactly one of entries or blocks")
        if self.dim < 1:
            raise ValueError(f"bad dimension {self.dim}")
        if self.entries is not None:
            m = np.asarray(self.entries, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"entries shape {m.shape} does not match dim {self.dim}")
            _check_hermitian(m)
            object.__setattr__(self, "entries", m)
        else:
            seen: set[int] = set()
            norm_blocks: list[Block] = []
            for idx, sub in self.blocks:  # type: ignore[union-attr]
                idx = tuple(int(i) for i in idx)
                sub = np.asarray(sub, dtype=complex)
                if len(idx) != sub.shape[0]:
                    raise ValueError(f"block index count {len(idx)} != sub-matrix dim {sub.shape}")
                if any(not 0 <= i < self.dim for i in idx):
                    raise ValueError("block index outside operator dimension")
                if seen & set(idx):
                    raise ValueError("block index subsets overlap")
                seen |= set(idx)
                _check_hermitian(sub)
                norm_blocks.append((idx, sub))
            object.__setattr__(self, "blocks", tuple(norm_blocks))

    def dense(self) -> np.ndarray:
        """Materialize the dense matrix (exact embedding of the blocks)."""
        if self.entries is not None:
            return self.entries
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for idx, sub in self.blocks:  # type: ignore[union-attr]
            ii = np.asarray(idx)
            out[np.ix_(ii, ii)] = sub
        return out

    def trace(self) -> float:
        if self.entries is not None:
            return float(np.trace(self.entries).real)
        return float(sum(np.trace(sub).real for _, sub in self.blocks))  # type: ignore[union-attr]


def eig_hermitian(op: HermitianOperator, *, dim_max: int = DENSE_DIM_CAP) -> np.ndarray:
    """All real eigenvalues of the operator, ascending.

    Block-structured input is solved per block; indices outside every block
    contribute exact zeros.
    """
    if op.dim > dim_max:
        raise ValueError(f"dimension {op.dim} exceeds cap {dim_max}")
    if op.entries is not None:
        return np.linalg.eigvalsh(op.entries)
    parts = [np.linalg.eigvalsh(sub) for _, sub in op.blocks]  # type: ignore[union-attr]
    covered = sum(len(idx) for idx, _ in op.blocks)  # type: ignore[union-attr]
    if covered < op.dim:
        parts.append(np.zeros(op.dim - covered))
    return np.sort(np.concatenate(parts))


def entropy_from_eigs(eigs: np.ndarray) -> float:
    """Entropy in bits of an eigenvalue list, flooring values below 1e-12 to 0."""
    lam = np.asarray(eigs, dtype=float)
    lam = lam[lam > EIG_FLOOR]
    if lam.size == 0:
        return 0.0
    return float(-(lam * np.log2(lam)).sum())


def von_neumann_entropy(state: HermitianOperator, *, dim_max: int = DENSE_DIM_CAP) -> float:
    """S(rho) = -sum mu log2 mu over the eigenvalues of a density operator."""
    eigs = eig_hermitian(state, dim_max=dim_max)
    tr = float(eigs.sum())
    if abs(tr - 1.0) > STATE_TRACE_ATOL:
        raise ValueError(f"not a state: trace {tr} differs from 1 beyond {STATE_TRACE_ATOL}")
    if eigs[0] < -STATE_EIG_ATOL:
        raise ValueError(f"not a state: minimum eigenvalue {eigs[0]} below -{STATE_EIG_ATOL}")
    return entropy_from_eigs(eigs)


def assemble_block_diagonal(blocks: Sequence[Block], *, dim: int | None = None) -> HermitianOperator:
    """Assemble a block-diagonal Hermitian operator from (index subset, sub-matrix) pairs."""
    if not blocks:
        raise ValueError("no blocks given")
    top = max(max(idx) for idx, _ in blocks if len(idx)) + 1
    if dim is None:
        dim = top
    elif dim < top:
        raise ValueError(f"dim {dim} smaller than highest block index {top - 1}")
    return HermitianOperator(dim=dim, blocks=tuple((tuple(idx), np.asarray(sub)) for idx, sub in blocks))
