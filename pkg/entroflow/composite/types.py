from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Tuple

import numpy as np

from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import unitarity_error
from entroflow.lib.errors import BadFactorIndex, DimMismatch, NotUnitary


@dataclass(frozen=True)
class Partition:
    """
    Tensor factorisation (d_1, ..., d_k) of a state space.

    Composite index n = sum_i n_i * prod_{j>i} d_j: the first factor is the
    most significant digit, the same order numpy.kron produces.
    """

    dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("Partition needs at least one factor")
        if any(d < 1 for d in dims):
            raise ValueError(f"Partition dims must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, *dims: int) -> "Partition":
        return cls(dims=tuple(dims))

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def check_dim(self, dim: int) -> None:
        if dim != self.total_dim:
            raise DimMismatch(f"Operator dim {dim} does not match partition {self} (total {self.total_dim})")

    def check_factor(self, index: int) -> None:
        if not 0 <= index < self.k:
            raise BadFactorIndex(f"Factor index {index} out of range for {self.k} factors")

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """Per-factor orthonormal bases; column j of factors[i] is local state |j> of part i."""

    factors: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        frozen = []
        for factor in self.factors:
            matrix = np.array(factor, dtype=complex, copy=True)
            matrix.setflags(write=False)
            frozen.append(matrix)
        object.__setattr__(self, "factors", tuple(frozen))

    @classmethod
    def from_factors(cls, factors: Sequence[np.ndarray], tol: ToleranceSet = DEFAULT_TOLERANCES) -> "ProductBasis":
        for index, factor in enumerate(factors):
            factor = np.asarray(factor, dtype=complex)
            if factor.ndim != 2 or factor.shape[0] != factor.shape[1]:
                raise DimMismatch(f"Basis factor {index} must be square, got shape {factor.shape}")
            err = unitarity_error(factor)
            if err > tol.unitary:
                raise NotUnitary(err, tol.unitary, detail=f"basis factor {index}")
        return cls(factors=tuple(factors))

    @classmethod
    def standard(cls, partition: Partition) -> "ProductBasis":
        return cls(factors=tuple(np.eye(d, dtype=complex) for d in partition.dims))

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(int(f.shape[0]) for f in self.factors)

    def matrix(self) -> np.ndarray:
        """Columns are the product states |n_1 ... n_k> in composite index order."""
        return reduce(np.kron, self.factors)
