from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import validate_density, validate_hermitian, validate_unitary
from entroflow.core.types import DensityOperator, HermitianOperator, UnitaryOperator
from entroflow.lib.errors import DegenerateDraw

logger = logging.getLogger(__name__)

_MAX_UNITARY_ATTEMPTS = 3
_SINGULAR_PIVOT = 1e-12


def make_stream(master_seed: int, *key: int) -> np.random.Generator:
    """
    Independent PCG64 stream for (master_seed, *key).

    SeedSequence hashes the whole key, so make_stream(s, i) and
    make_stream(s, j) are unrelated for i != j on every platform.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(master_seed), *map(int, key)])))


def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density(
    dim: int,
    rank: int,
    rng: np.random.Generator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> DensityOperator:
    """rho = A A^dagger / Tr(A A^dagger) with A a dim x rank complex Gaussian matrix."""
    if not 1 <= rank <= dim:
        raise ValueError(f"Need 1 <= rank <= dim, got rank={rank} dim={dim}")

    a = complex_gaussian(rng, (dim, rank))
    gram = a @ a.conj().T
    return validate_density(gram / np.trace(gram).real, tol)


def random_unitary(
    dim: int,
    rng: np.random.Generator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> UnitaryOperator:
    """
    QR of a complex Gaussian matrix with the R diagonal made real positive,
    which gives the invariant (Haar) distribution.
    """
    if dim < 1:
        raise ValueError(f"Need dim >= 1, got {dim}")

    for attempt in range(1, _MAX_UNITARY_ATTEMPTS + 1):
        z = complex_gaussian(rng, (dim, dim))
        q, r = scipy.linalg.qr(z)
        pivots = np.diagonal(r)
        if float(np.min(np.abs(pivots))) < _SINGULAR_PIVOT:
            logger.debug(f"Singular Gaussian draw for dim={dim} (attempt {attempt})")
            continue
        return validate_unitary(q * (pivots / np.abs(pivots)), tol)

    raise DegenerateDraw(f"Gaussian draw singular {_MAX_UNITARY_ATTEMPTS} times for dim={dim}")


def random_hermitian(
    dim: int,
    rng: np.random.Generator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> HermitianOperator:
    """Gaussian unitary ensemble draw, (Z + Z^dagger) / 2."""
    z = complex_gaussian(rng, (dim, dim))
    return validate_hermitian((z + z.conj().T) / 2, tol)
