import numpy as np
import pytest

from qsdc.operators import (
    HermitianOperator,
    assemble_block_diagonal,
    eig_hermitian,
    entropy_from_eigs,
    von_neumann_entropy,
)
from oracles import charpoly_eigs


def random_hermitian(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2


def test_eig_examples():
    half = HermitianOperator(dim=2, entries=np.eye(2) / 2)
    assert np.allclose(eig_hermitian(half), [0.5, 0.5])
    v = np.zeros(4)
    v[2] = 1.0
    proj = HermitianOperator(dim=4, entries=np.outer(v, v))
    assert np.allclose(eig_hermitian(proj), [0, 0, 0, 1], atol=1e-15)


def test_eig_matches_characteristic_polynomial_oracle():
    rng = np.random.default_rng(8)
    m = random_hermitian(rng, 8)
    op = HermitianOperator(dim=8, entries=m)
    assert np.allclose(eig_hermitian(op), charpoly_eigs(m), atol=1e-9)


def test_eigenvalue_sum_equals_trace():
    rng = np.random.default_rng(17)
    for _ in range(100):
        dim = int(rng.integers(2, 65))
        m = random_hermitian(rng, dim)
        op = HermitianOperator(dim=dim, entries=m)
        assert eig_hermitian(op).sum() == pytest.approx(np.trace(m).real, abs=1e-10 * dim)


def test_entropy_unitary_invariant():
    rng = np.random.default_rng(23)
    for dim in (2, 4, 8, 16):
        probs = rng.dirichlet(np.ones(dim))
        rho = np.diag(probs).astype(complex)
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
        rotated = q @ rho @ q.conj().T
        s1 = von_neumann_entropy(HermitianOperator(dim=dim, entries=rho))
        s2 = von_neumann_entropy(HermitianOperator(dim=dim, entries=rotated))
        assert s1 == pytest.approx(s2, abs=1e-9)


def test_entropy_examples():
    assert von_neumann_entropy(HermitianOperator(dim=2, entries=np.eye(2) / 2)) == pytest.approx(1.0)
    v = np.array([1.0, 0, 0, 0])
    assert von_neumann_entropy(HermitianOperator(dim=4, entries=np.outer(v, v))) == 0.0
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[1, 1] = 0.5
    assert von_neumann_entropy(HermitianOperator(dim=4, entries=rho)) == pytest.approx(1.0)


def test_state_validation():
    with pytest.raises(ValueError, match="trace"):
        von_neumann_entropy(HermitianOperator(dim=2, entries=np.eye(2)))
    bad = np.diag([1.2, -0.2])
    with pytest.raises(ValueError, match="eigenvalue"):
        von_neumann_entropy(HermitianOperator(dim=2, entries=bad))


def test_non_hermitian_rejected():
    with pytest.raises(ValueError, match="Hermitian"):
        HermitianOperator(dim=2, entries=np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        HermitianOperator(dim=2, entries=np.ones((2, 3)))


def test_block_construction_and_dense_embedding():
    blocks = [((0, 2), np.array([[0.3, 0.1], [0.1, 0.2]])), ((1,), np.array([[0.5]]))]
    op = assemble_block_diagonal(blocks, dim=4)
    dense = op.dense()
    assert dense[0, 2] == pytest.approx(0.1)
    assert dense[3, 3] == 0.0
    ref = HermitianOperator(dim=4, entries=dense)
    assert np.allclose(eig_hermitian(op), eig_hermitian(ref), atol=1e-12)
    assert op.trace() == pytest.approx(1.0, abs=1e-12)


def test_block_entropy_matches_concatenated_spectra():
    rng = np.random.default_rng(5)
    sub_a = np.diag(rng.dirichlet(np.ones(3)) * 0.6)
    sub_b = np.diag(rng.dirichlet(np.ones(2)) * 0.4)
    op = assemble_block_diagonal([((0, 1, 2), sub_a), ((3, 4), sub_b)], dim=5)
    merged = np.concatenate([np.diag(sub_a), np.diag(sub_b)])
    assert von_neumann_entropy(op) == pytest.approx(entropy_from_eigs(merged), abs=1e-12)


def test_two_half_blocks_entropy_is_one_bit():
    op = assemble_block_diagonal([((0,), np.array([[0.5]])), ((1,), np.array([[0.5]]))])
    assert von_neumann_entropy(op) == pytest.approx(1.0)


def test_overlapping_blocks_rejected():
    with pytest.raises(ValueError, match="overlap"):
        assemble_block_diagonal([((0, 1), np.eye(2) / 4), ((1, 2), np.eye(2) / 4)])


def test_block_index_bounds_checked():
    with pytest.raises(ValueError):
        assemble_block_diagonal([((0, 5), np.eye(2) / 2)], dim=4)
    with pytest.raises(ValueError):
        HermitianOperator(dim=2)


def test_uncovered_indices_contribute_zero_eigenvalues():
    op = assemble_block_diagonal([((1,), np.array([[1.0]]))], dim=3)
    assert np.allclose(eig_hermitian(op), [0.0, 0.0, 1.0])


def test_dimension_cap():
    with pytest.raises(ValueError, match="cap"):
        eig_hermitian(HermitianOperator(dim=5000, blocks=(((0,), np.array([[1.0]])),)))


def test_entropy_floor():
    assert entropy_from_eigs(np.array([1.0, -1e-13, 1e-13])) == 0.0
