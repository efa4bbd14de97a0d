from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from entroflow.composite.operations import (
    collapse_to_product,
    correlation_information,
    joint_distribution,
    marginal_information,
    natural_product_basis,
    partial_trace,
    product_basis_information,
    projection_information,
    reduced_operators,
    tensor_product,
)
from entroflow.composite.types import Partition, ProductBasis
from entroflow.core.operations import evolve, information, spectral_decompose, validate_density
from entroflow.core.random import make_stream, random_density, random_unitary
from entroflow.core.types import UnitaryOperator
from entroflow.inequalities.lemmas import shannon_information
from entroflow.lib.errors import BadFactorIndex, DimMismatch, NotUnitary

BELL = validate_density(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2)


def _brute_force_partial_trace(matrix: np.ndarray, dims, keep: int) -> np.ndarray:
    """Sum <n|rho|m> over composite indices that agree on every factor except `keep`."""
    d = dims[keep]
    out = np.zeros((d, d), dtype=complex)
    labels = list(itertools.product(*[range(x) for x in dims]))

    def flat(label) -> int:
        index = 0
        for digit, size in zip(label, dims):
            index = index * size + digit
        return index

    for n in labels:
        for m in labels:
            if all(n[i] == m[i] for i in range(len(dims)) if i != keep):
                out[n[keep], m[keep]] += matrix[flat(n), flat(m)]
    return out


def test_partition_properties_and_validation():
    p = Partition.of(2, 3, 2)
    assert p.k == 3 and p.total_dim == 12 and str(p) == "2x3x2"

    with pytest.raises(ValueError):
        Partition(dims=())
    with pytest.raises(ValueError):
        Partition.of(2, 0)
    with pytest.raises(BadFactorIndex):
        p.check_factor(3)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (2, 2, 2), (2, 3, 2)])
def test_partial_trace_matches_brute_force(dims):
    p = Partition(dims=dims)
    rho = random_density(p.total_dim, 3, make_stream(4, *dims))

    for keep in range(p.k):
        expected = _brute_force_partial_trace(rho.matrix, dims, keep)
        np.testing.assert_allclose(partial_trace(rho, p, keep).matrix, expected, atol=1e-13)


def test_partial_trace_errors():
    p = Partition.of(2, 2)
    with pytest.raises(DimMismatch):
        partial_trace(random_density(3, 1, make_stream(0)), p, 0)
    with pytest.raises(BadFactorIndex):
        partial_trace(BELL, p, 2)


def test_partial_trace_of_product_returns_factor():
    rng = make_stream(8, 0)
    a, b = random_density(2, 2, rng), random_density(3, 1, rng)
    p = Partition.of(2, 3)
    rho = tensor_product([a, b])

    np.testing.assert_allclose(partial_trace(rho, p, 0).matrix, a.matrix, atol=1e-13)
    np.testing.assert_allclose(partial_trace(rho, p, 1).matrix, b.matrix, atol=1e-13)


def test_bell_state_marginals_are_maximally_mixed():
    p = Partition.of(2, 2)
    for part in reduced_operators(BELL, p):
        np.testing.assert_allclose(part.matrix, np.eye(2) / 2, atol=1e-15)

    assert marginal_information(BELL, p) == pytest.approx([-math.log(2)] * 2)
    assert correlation_information(BELL, p) == pytest.approx(2 * math.log(2), abs=1e-12)
    np.testing.assert_allclose(collapse_to_product(BELL, p).matrix, np.eye(4) / 4, atol=1e-15)


def test_collapse_is_idempotent_and_keeps_marginals():
    p = Partition.of(2, 2, 2)
    rho = random_density(8, 4, make_stream(2, 2))
    once = collapse_to_product(rho, p)
    twice = collapse_to_product(once, p)

    np.testing.assert_allclose(twice.matrix, once.matrix, atol=1e-13)
    for before, after in zip(reduced_operators(rho, p), reduced_operators(once, p)):
        np.testing.assert_allclose(after.matrix, before.matrix, atol=1e-13)
    assert correlation_information(once, p) == pytest.approx(0.0, abs=1e-9)


def test_correlation_information_is_non_negative():
    for seed in range(30):
        p = Partition.of(2, 3)
        rho = random_density(6, 1 + seed % 6, make_stream(seed, 6))
        assert correlation_information(rho, p) >= -1e-9


def test_joint_distribution_in_standard_basis_is_the_diagonal():
    p = Partition.of(2, 3)
    rho = random_density(6, 2, make_stream(1, 6))
    joint = joint_distribution(rho, p, ProductBasis.standard(p))

    assert joint.shape == (2, 3)
    np.testing.assert_allclose(joint.entries.ravel(), np.diag(rho.matrix).real, atol=1e-15)


def test_joint_distribution_rejects_wrong_basis():
    with pytest.raises(DimMismatch):
        joint_distribution(BELL, Partition.of(2, 2), ProductBasis.standard(Partition.of(4)))
    with pytest.raises(NotUnitary):
        ProductBasis.from_factors([np.ones((2, 2)), np.eye(2)])


def test_natural_product_basis_diagonalizes_marginals():
    p = Partition.of(2, 2)
    rho = random_density(4, 2, make_stream(6, 6))
    joint = joint_distribution(rho, p, natural_product_basis(rho, p))

    for axis, part in enumerate(reduced_operators(rho, p)):
        eigenvalues = spectral_decompose(part).eigenvalues
        np.testing.assert_allclose(joint.marginal(axis).entries, eigenvalues, atol=1e-12)


def test_product_basis_information_bounded_by_information():
    p = Partition.of(2, 2)
    for seed in range(20):
        rng = make_stream(seed, 44)
        rho = random_density(4, 1 + seed % 4, rng)
        basis = ProductBasis.from_factors([random_unitary(2, rng).matrix, random_unitary(2, rng).matrix])
        assert product_basis_information(rho, p, basis) <= information(rho) + 1e-9


def test_projection_information_never_exceeds_information():
    for seed in range(20):
        rng = make_stream(seed, 55)
        rho = random_density(5, 1 + seed % 5, rng)
        basis = random_unitary(5, rng)
        assert projection_information(rho, basis) <= information(rho) + 1e-9


def test_projection_information_in_eigenbasis_equals_information():
    rho = random_density(4, 3, make_stream(0, 66))
    eigenbasis = UnitaryOperator(matrix=spectral_decompose(rho).eigenvectors)
    assert projection_information(rho, eigenbasis) == pytest.approx(information(rho), abs=1e-12)


def test_projection_information_errors():
    with pytest.raises(DimMismatch):
        projection_information(BELL, UnitaryOperator(matrix=np.eye(2)))
    with pytest.raises(NotUnitary):
        projection_information(BELL, UnitaryOperator(matrix=2 * np.eye(4)))


def _swap(da: int, db: int) -> np.ndarray:
    """Permutation |i, j> -> |j, i> from a (da, db) to a (db, da) composite index."""
    swap = np.zeros((da * db, da * db))
    for i, j in itertools.product(range(da), range(db)):
        swap[j * da + i, i * db + j] = 1.0
    return swap


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2)])
def test_swap_unitary_exchanges_the_factors(dims):
    da, db = dims
    rng = make_stream(8, da, db)
    a, b = random_density(da, da, rng), random_density(db, 1, rng)

    swapped = evolve(tensor_product([a, b]), UnitaryOperator(matrix=_swap(da, db)))
    np.testing.assert_allclose(swapped.matrix, tensor_product([b, a]).matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(swapped, Partition.of(db, da), 0).matrix, b.matrix, atol=1e-12)


def test_tensor_product_adds_information():
    rng = make_stream(3, 77)
    parts = [random_density(2, 2, rng), random_density(3, 2, rng), random_density(2, 1, rng)]
    product = tensor_product(parts)

    assert product.dim == 12
    assert information(product) == pytest.approx(sum(information(part) for part in parts), abs=1e-10)


@pytest.mark.parametrize("dims", [(2, 3), (2, 2, 2)])
def test_joint_distribution_marginals_match_reduced_operators(dims):
    p = Partition(dims=dims)
    for seed in range(10):
        rng = make_stream(seed, 88)
        rho = random_density(p.total_dim, 1 + seed % p.total_dim, rng)
        basis = ProductBasis.from_factors([random_unitary(d, rng).matrix for d in dims])
        joint = joint_distribution(rho, p, basis)

        for axis, part in enumerate(reduced_operators(rho, p)):
            local = Partition.of(dims[axis])
            expected = joint_distribution(part, local, ProductBasis(factors=(basis.factors[axis],)))
            np.testing.assert_allclose(joint.marginal(axis).entries, expected.entries, atol=1e-12)


def test_projection_information_at_dim_8():
    for seed in range(1000):
        rng = make_stream(seed, 8)
        rho = random_density(8, int(rng.integers(1, 9)), rng)
        basis = random_unitary(8, rng)
        value = projection_information(rho, basis)
        assert value <= information(rho) + 1e-9

        if seed % 100 == 0:
            spectrum = spectral_decompose(rho)
            overlaps = np.abs(spectrum.eigenvectors.conj().T @ basis.matrix) ** 2
            weights = np.clip(spectrum.eigenvalues, 0.0, None) @ overlaps
            assert value == pytest.approx(shannon_information(weights), abs=1e-12)


def test_projection_information_of_maximally_mixed_state():
    rho = validate_density(np.eye(8) / 8)
    basis = random_unitary(8, make_stream(1, 8))
    assert projection_information(rho, basis) == pytest.approx(-math.log(8), abs=1e-12)
