from __future__ import annotations

import logging
from functools import reduce
from typing import List, Sequence

import numpy as np

from entroflow.composite.types import Partition, ProductBasis
from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import (
    clipped_probabilities,
    information,
    spectral_decompose,
    unitarity_error,
    validate_density,
)
from entroflow.core.types import DensityOperator, UnitaryOperator
from entroflow.inequalities.lemmas import doubly_stochastic_apply, shannon_information
from entroflow.inequalities.types import (
    DoublyStochasticMatrix,
    JointDistribution,
    ProbabilityVector,
)
from entroflow.lib.errors import DimMismatch, NotNormalized, NotUnitary

logger = logging.getLogger(__name__)


def tensor_product(rhos: Sequence[DensityOperator], tol: ToleranceSet = DEFAULT_TOLERANCES) -> DensityOperator:
    if not rhos:
        raise ValueError("tensor_product needs at least one operator")
    return validate_density(reduce(np.kron, [rho.matrix for rho in rhos]), tol)


def _trace_out(matrix: np.ndarray, dims: List[int], index: int) -> np.ndarray:
    pre = int(np.prod(dims[:index]))
    mid = dims[index]
    post = int(np.prod(dims[index + 1 :]))
    blocks = matrix.reshape(pre, mid, post, pre, mid, post)
    reduced = np.einsum("aibcid->abcd", blocks)
    return reduced.reshape(pre * post, pre * post)


def partial_trace(
    rho: DensityOperator,
    p: Partition,
    keep: int,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> DensityOperator:
    """
    Reduced operator of factor `keep`: sum of elements diagonal in every other factor.

    Other factors are traced one at a time in ascending index order.
    """
    p.check_dim(rho.dim)
    p.check_factor(keep)

    matrix = np.asarray(rho.matrix)
    remaining = list(range(p.k))
    dims = list(p.dims)
    for original in range(p.k):
        if original == keep:
            continue
        position = remaining.index(original)
        matrix = _trace_out(matrix, dims, position)
        del remaining[position]
        del dims[position]

    return validate_density(matrix, tol)


def reduced_operators(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> List[DensityOperator]:
    return [partial_trace(rho, p, index, tol) for index in range(p.k)]


def collapse_to_product(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> DensityOperator:
    """Replace the state by the tensor product of its marginals (per-part measurement)."""
    return tensor_product(reduced_operators(rho, p, tol), tol)


def marginal_information(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> List[float]:
    return [information(part, tol) for part in reduced_operators(rho, p, tol)]


def correlation_information(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    """I(rho) - sum_i I(rho_i): information lost when the parts are measured separately."""
    p.check_dim(rho.dim)
    return information(rho, tol) - sum(marginal_information(rho, p, tol))


def joint_distribution(
    rho: DensityOperator,
    p: Partition,
    basis: ProductBasis,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> JointDistribution:
    """W_{n_1...n_k} = <n_1...n_k| rho |n_1...n_k>, one array axis per part."""
    p.check_dim(rho.dim)
    if basis.dims != p.dims:
        raise DimMismatch(f"Basis dims {basis.dims} do not match partition {p}")

    b = basis.matrix()
    diagonal = np.einsum("ji,jk,ki->i", b.conj(), rho.matrix, b).real
    entries = clipped_probabilities(diagonal, tol)
    total = float(entries.sum())
    if abs(total - 1.0) > tol.trace:
        raise NotNormalized(abs(total - 1.0), tol.trace)
    return JointDistribution(entries=entries.reshape(p.dims))


def natural_product_basis(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> ProductBasis:
    """Product of the marginals' eigenbases (each part in its natural representation)."""
    return ProductBasis(
        factors=tuple(spectral_decompose(part, tol).eigenvectors for part in reduced_operators(rho, p, tol))
    )


def product_basis_information(
    rho: DensityOperator,
    p: Partition,
    basis: ProductBasis,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    """Information about the local variables measured in `basis`; never above information(rho)."""
    return shannon_information(joint_distribution(rho, p, basis, tol))


def projection_information(
    rho: DensityOperator,
    basis: UnitaryOperator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    """
    sum_m W'_m ln W'_m for W'_m = sum_n |<n|m>|^2 W_n, where |n> are the
    eigenstates of rho and |m> the columns of `basis`.
    """
    if rho.dim != basis.dim:
        raise DimMismatch(f"State dim {rho.dim} does not match basis dim {basis.dim}")
    err = unitarity_error(basis.matrix)
    if err > tol.unitary:
        raise NotUnitary(err, tol.unitary)

    spectrum = spectral_decompose(rho, tol)
    weights = ProbabilityVector.from_values(spectrum.eigenvalues, tol)
    overlaps = DoublyStochasticMatrix.from_overlaps(spectrum.eigenvectors, basis.matrix)
    return shannon_information(doubly_stochastic_apply(weights, overlaps, tol))
