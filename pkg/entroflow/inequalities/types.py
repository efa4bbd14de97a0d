from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import clipped_probabilities
from entroflow.lib.errors import DimMismatch, NotDoublyStochastic, NotNormalized


def _frozen(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def _normalized(values, tol: ToleranceSet) -> np.ndarray:
    entries = clipped_probabilities(np.asarray(values, dtype=float), tol)
    total = float(entries.sum())
    if abs(total - 1.0) > tol.trace:
        raise NotNormalized(abs(total - 1.0), tol.trace, detail=f"sum={total:.12g}")
    return entries


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Non-negative entries summing to one ([W_i] and [x_i] of the lemmas)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))

    @classmethod
    def from_values(cls, values, tol: ToleranceSet = DEFAULT_TOLERANCES) -> "ProbabilityVector":
        entries = _normalized(values, tol)
        if entries.ndim != 1:
            raise DimMismatch(f"Probability vector must be 1-D, got shape {entries.shape}")
        return cls(entries=entries)

    @classmethod
    def uniform(cls, n: int) -> "ProbabilityVector":
        return cls(entries=np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class DoublyStochasticMatrix:
    """Non-negative square matrix whose rows and columns all sum to one."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))

    @classmethod
    def from_values(cls, values, tol: ToleranceSet = DEFAULT_TOLERANCES) -> "DoublyStochasticMatrix":
        entries = np.asarray(values, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimMismatch(f"Doubly stochastic matrix must be square, got shape {entries.shape}")
        if float(entries.min()) < 0.0:
            raise NotDoublyStochastic(-float(entries.min()), detail="negative entry")

        row_err = float(np.max(np.abs(entries.sum(axis=1) - 1.0)))
        col_err = float(np.max(np.abs(entries.sum(axis=0) - 1.0)))
        worst = max(row_err, col_err)
        if worst > tol.trace:
            raise NotDoublyStochastic(worst, tol.trace, detail=f"row error={row_err:.3e}, column error={col_err:.3e}")
        return cls(entries=entries)

    @classmethod
    def from_overlaps(cls, basis_from: np.ndarray, basis_to: np.ndarray) -> "DoublyStochasticMatrix":
        """T_nm = |<n|m>|^2 for two orthonormal bases given as matrix columns."""
        overlaps = np.asarray(basis_from).conj().T @ np.asarray(basis_to)
        return cls(entries=np.abs(overlaps) ** 2)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """
    Joint probabilities over k labelled parts, one array axis per part.

    Axis order follows the partition; entries.ravel() is the composite index order.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))

    @classmethod
    def from_values(cls, values, tol: ToleranceSet = DEFAULT_TOLERANCES) -> "JointDistribution":
        entries = _normalized(values, tol)
        if entries.ndim < 1:
            raise DimMismatch("Joint distribution needs at least one axis")
        return cls(entries=entries)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self.entries.shape)

    def marginal(self, axis: int) -> ProbabilityVector:
        others = tuple(i for i in range(self.entries.ndim) if i != axis)
        return ProbabilityVector(entries=self.entries.sum(axis=others))

    def marginals(self) -> list[ProbabilityVector]:
        return [self.marginal(axis) for axis in range(self.entries.ndim)]
