from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _frozen_matrix(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class _SquareOperator:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_matrix(self.matrix))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class DensityOperator(_SquareOperator):
    """
    Hermitian, trace-one, positive semidefinite matrix.

    Build through core.operations.validate_density; the constructor itself
    does not check the invariants. Reduced operators of parts use this type too.
    """


@dataclass(frozen=True, eq=False)
class UnitaryOperator(_SquareOperator):
    """Time displacement U with U^dagger U = 1. Build through validate_unitary."""


@dataclass(frozen=True, eq=False)
class HermitianOperator(_SquareOperator):
    """Hamiltonian generators and observables (their eigenbases define measured variables)."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigen-decomposition of a Hermitian matrix.

    - eigenvalues: ascending reals
    - eigenvectors: column k pairs with eigenvalue k; each column's first
      nonzero component is real positive
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.eigenvalues, dtype=float, copy=True)
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenvectors", _frozen_matrix(self.eigenvectors))

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T
