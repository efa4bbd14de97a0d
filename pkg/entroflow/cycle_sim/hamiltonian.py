from __future__ import annotations

import numpy as np

from entroflow.composite.types import Partition
from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import spectral_decompose, validate_hermitian
from entroflow.core.random import random_hermitian
from entroflow.core.types import HermitianOperator


def unit_scale(h: HermitianOperator, tol: ToleranceSet = DEFAULT_TOLERANCES) -> HermitianOperator:
    """Rescale to spectral radius 1 (the zero operator is returned as is)."""
    radius = float(np.max(np.abs(spectral_decompose(h, tol).eigenvalues)))
    if radius == 0.0:
        return h
    return HermitianOperator(matrix=h.matrix / radius)


def embed_local(term: np.ndarray, p: Partition, index: int) -> np.ndarray:
    """1 (x) ... (x) term (x) ... (x) 1 with `term` on factor `index`."""
    p.check_factor(index)
    pre = int(np.prod(p.dims[:index]))
    post = int(np.prod(p.dims[index + 1 :]))
    return np.kron(np.kron(np.eye(pre), term), np.eye(post))


def build_interacting_hamiltonian(
    p: Partition,
    coupling: float,
    rng: np.random.Generator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> HermitianOperator:
    """
    H = sum_i (unit-scale random local term on part i) + coupling * (unit-scale random global term).

    The local terms alone never entangle the parts; the global term is what
    correlates them between two measurements. Draw order: local terms in
    factor order, then the global term.
    """
    if coupling < 0.0:
        raise ValueError(f"coupling must be >= 0, got {coupling}")

    total = np.zeros((p.total_dim, p.total_dim), dtype=complex)
    for index, dim in enumerate(p.dims):
        local = unit_scale(random_hermitian(dim, rng, tol), tol)
        total += embed_local(local.matrix, p, index)

    interaction = unit_scale(random_hermitian(p.total_dim, rng, tol), tol)
    if coupling > 0.0:
        total += coupling * interaction.matrix

    return validate_hermitian(total, tol)
