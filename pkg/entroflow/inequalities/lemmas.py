"""
Classical information inequalities as margins.

Every *_margin function returns (satisfied side - bounding side), which is
non-negative whenever the inequality holds. 0 ln 0 is taken as 0 throughout.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import clipped_probabilities, sum_xlogx
from entroflow.inequalities.types import (
    DoublyStochasticMatrix,
    JointDistribution,
    ProbabilityVector,
)
from entroflow.lib.errors import DimMismatch, LengthMismatch, NegativeInput


def shannon_information(p) -> float:
    """Sum p ln p (non-positive for a distribution)."""
    entries = p.entries if hasattr(p, "entries") else np.asarray(p, dtype=float)
    return sum_xlogx(entries)


def lemma1_margin(x: float) -> float:
    """x ln x - (x - 1); zero only at x = 1."""
    if x < 0:
        raise NegativeInput(f"lemma 1 needs x >= 0, got {x}")
    return float(xlogy(x, x)) - (x - 1.0)


def lemma2_margin(w, x: ProbabilityVector) -> float:
    """sum x_i w_i ln w_i - w_bar ln w_bar, with w_bar = sum x_i w_i."""
    weights = np.asarray(w, dtype=float)
    if weights.ndim != 1 or weights.shape[0] != len(x):
        raise LengthMismatch(f"w has shape {weights.shape}, x has length {len(x)}")
    if weights.size and float(weights.min()) < 0.0:
        raise NegativeInput(f"lemma 2 needs w_i >= 0, got min {float(weights.min())}")

    w_bar = math.fsum((x.entries * weights).tolist())
    lhs = math.fsum((x.entries * xlogy(weights, weights)).tolist())
    return lhs - float(xlogy(w_bar, w_bar))


def doubly_stochastic_apply(
    w: ProbabilityVector,
    t: DoublyStochasticMatrix,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> ProbabilityVector:
    """W'_j = sum_i W_i T_ij."""
    if len(w) != t.n:
        raise DimMismatch(f"Vector length {len(w)} does not match matrix size {t.n}")
    return ProbabilityVector.from_values(w.entries @ t.entries, tol)


def lemma3_margin(
    w: ProbabilityVector,
    t: DoublyStochasticMatrix,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    """sum W ln W - sum W' ln W' for W' = W T."""
    w_prime = doubly_stochastic_apply(w, t, tol)
    return shannon_information(w) - shannon_information(w_prime)


def lemma4_margin(w: JointDistribution) -> float:
    """
    sum W_ij ln W_ij - sum W_i ln W_i - sum W'_j ln W'_j.

    Zero exactly when W_ij = W_i W'_j. Zero entries use the continuity
    convention, so the statement is extended from positive to non-negative W.
    """
    if w.entries.ndim != 2:
        raise DimMismatch(f"lemma 4 needs a two-part joint distribution, got {w.entries.ndim} axes")
    rows, cols = w.marginals()
    return shannon_information(w) - shannon_information(rows) - shannon_information(cols)


def factorization_error(w: JointDistribution) -> float:
    """max |W_ij - W_i W'_j|; small exactly when lemma4_margin is small."""
    rows, cols = w.marginals()
    return float(np.max(np.abs(w.entries - np.outer(rows.entries, cols.entries))))


def outer_product(*parts: ProbabilityVector) -> JointDistribution:
    entries = parts[0].entries
    for part in parts[1:]:
        entries = np.multiply.outer(entries, part.entries)
    return JointDistribution(entries=clipped_probabilities(entries))
