from __future__ import annotations

import logging
import math

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from entroflow.core.config import DEFAULT_TOLERANCES, K_B_NATURAL, ToleranceSet
from entroflow.core.types import (
    DensityOperator,
    HermitianOperator,
    Spectrum,
    UnitaryOperator,
)
from entroflow.lib.errors import (
    ConvergenceFailure,
    DimMismatch,
    NotHermitian,
    NotPositive,
    NotUnitary,
    TraceNotOne,
)

logger = logging.getLogger(__name__)


def _as_square(m) -> np.ndarray:
    matrix = np.asarray(m, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise DimMismatch(f"Expected a non-empty square matrix, got shape {matrix.shape}")
    return matrix


def hermiticity_error(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def unitarity_error(matrix: np.ndarray) -> float:
    gram = matrix.conj().T @ matrix
    return float(np.max(np.abs(gram - np.eye(matrix.shape[0]))))


def _eigvalsh(matrix: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.eigvalsh(matrix, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"Eigensolver failed: {exc}") from None


def validate_density(m, tol: ToleranceSet = DEFAULT_TOLERANCES) -> DensityOperator:
    matrix = _as_square(m)

    herm_err = hermiticity_error(matrix)
    if herm_err > tol.herm:
        raise NotHermitian(herm_err, tol.herm)

    trace_err = abs(complex(np.trace(matrix)) - 1.0)
    if trace_err > tol.trace:
        raise TraceNotOne(trace_err, tol.trace, detail=f"trace={complex(np.trace(matrix)).real:.12g}")

    # store the exact Hermitian part so later eigensolves see symmetric input
    matrix = (matrix + matrix.conj().T) / 2
    smallest = float(_eigvalsh(matrix)[0])
    if smallest < -tol.psd:
        raise NotPositive(-smallest, tol.psd, detail=f"smallest eigenvalue={smallest:.3e}")

    return DensityOperator(matrix=matrix)


def validate_unitary(m, tol: ToleranceSet = DEFAULT_TOLERANCES) -> UnitaryOperator:
    matrix = _as_square(m)
    err = unitarity_error(matrix)
    if err > tol.unitary:
        raise NotUnitary(err, tol.unitary)
    return UnitaryOperator(matrix=matrix)


def validate_hermitian(m, tol: ToleranceSet = DEFAULT_TOLERANCES) -> HermitianOperator:
    matrix = _as_square(m)
    err = hermiticity_error(matrix)
    if err > tol.herm:
        raise NotHermitian(err, tol.herm)
    return HermitianOperator(matrix=(matrix + matrix.conj().T) / 2)


def _canonical_phases(vectors: np.ndarray) -> np.ndarray:
    vectors = np.array(vectors, dtype=complex, copy=True)
    for k in range(vectors.shape[1]):
        column = vectors[:, k]
        nonzero = np.flatnonzero(np.abs(column) > 1e-12)
        if nonzero.size == 0:
            continue
        pivot = column[nonzero[0]]
        vectors[:, k] = column * (abs(pivot) / pivot)
    return vectors


def spectral_decompose(h, tol: ToleranceSet = DEFAULT_TOLERANCES) -> Spectrum:
    """
    Eigen-decomposition of a Hermitian operator (natural representation when h is a state).

    Eigenvalues ascending (LAPACK order for ties), eigenvector phases canonicalised.
    """
    matrix = h.matrix if hasattr(h, "matrix") else _as_square(h)
    err = hermiticity_error(matrix)
    if err > tol.herm:
        raise NotHermitian(err, tol.herm)

    try:
        values, vectors = scipy.linalg.eigh((matrix + matrix.conj().T) / 2)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"Eigensolver failed: {exc}") from None

    return Spectrum(eigenvalues=values, eigenvectors=_canonical_phases(vectors))


def clipped_probabilities(values: np.ndarray, tol: ToleranceSet = DEFAULT_TOLERANCES) -> np.ndarray:
    """Clip drift in [-tol.psd, 0) to zero; anything more negative is an error."""
    values = np.asarray(values, dtype=float)
    if values.size and float(values.min()) < -tol.psd:
        smallest = float(values.min())
        raise NotPositive(-smallest, tol.psd, detail=f"smallest eigenvalue={smallest:.3e}")
    return np.clip(values, 0.0, None)


def sum_xlogx(values: np.ndarray) -> float:
    """Sum of x ln x with 0 ln 0 = 0, exactly rounded (order independent)."""
    return math.fsum(xlogy(values, values).ravel().tolist())


def information(rho: DensityOperator, tol: ToleranceSet = DEFAULT_TOLERANCES) -> float:
    """Tr(rho ln rho) from eigenvalues only; never positive."""
    if rho.dim == 1:
        return 0.0
    eigenvalues = clipped_probabilities(_eigvalsh(rho.matrix), tol)
    return min(sum_xlogx(eigenvalues), 0.0)


def entropy(
    rho: DensityOperator,
    k_B: float = K_B_NATURAL,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    if not k_B > 0.0:
        raise ValueError(f"k_B must be positive, got {k_B}")
    return -k_B * information(rho, tol)


def evolve(
    rho: DensityOperator,
    u: UnitaryOperator,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> DensityOperator:
    """rho(t) = U rho(t0) U^dagger."""
    if rho.dim != u.dim:
        raise DimMismatch(f"State dim {rho.dim} does not match unitary dim {u.dim}")

    # one-dimensional states and the identity are left untouched bit for bit
    if rho.dim == 1 or np.array_equal(u.matrix, np.eye(u.dim)):
        return rho

    out = u.matrix @ rho.matrix @ u.matrix.conj().T
    return validate_density(out, tol)


def hamiltonian_unitary(
    h: HermitianOperator,
    t: float,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> UnitaryOperator:
    """U(t, 0) = exp(-i H t) built from the spectrum of H."""
    if t == 0:
        return UnitaryOperator(matrix=np.eye(h.dim, dtype=complex))

    spectrum = spectral_decompose(h, tol)
    phases = np.exp(-1j * spectrum.eigenvalues * t)
    vectors = spectrum.eigenvectors
    return validate_unitary((vectors * phases) @ vectors.conj().T, tol)
