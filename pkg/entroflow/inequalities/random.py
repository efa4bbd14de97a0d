from __future__ import annotations

import numpy as np

from entroflow.inequalities.types import (
    DoublyStochasticMatrix,
    JointDistribution,
    ProbabilityVector,
)


def random_probability_vector(n: int, rng: np.random.Generator) -> ProbabilityVector:
    """Uniform draw from the simplex."""
    return ProbabilityVector(entries=rng.dirichlet(np.ones(n)))


def random_joint(shape: tuple[int, ...], rng: np.random.Generator) -> JointDistribution:
    size = int(np.prod(shape))
    return JointDistribution(entries=rng.dirichlet(np.ones(size)).reshape(shape))


def random_permutation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    matrix = np.zeros((n, n))
    matrix[np.arange(n), rng.permutation(n)] = 1.0
    return matrix


def random_doubly_stochastic(n: int, k_terms: int, rng: np.random.Generator) -> DoublyStochasticMatrix:
    """
    Convex mixture sum_k c_k P_k of k_terms uniform random permutation
    matrices with Dirichlet-uniform weights c.

    Row and column sums equal sum_k c_k = 1 up to rounding; no iterative
    normalisation is involved.
    """
    if n < 1 or k_terms < 1:
        raise ValueError(f"Need n >= 1 and k_terms >= 1, got n={n} k_terms={k_terms}")

    weights = rng.dirichlet(np.ones(k_terms)) if k_terms > 1 else np.ones(1)
    entries = np.zeros((n, n))
    for weight in weights:
        entries += weight * random_permutation_matrix(n, rng)
    return DoublyStochasticMatrix(entries=entries)
