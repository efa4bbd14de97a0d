from __future__ import annotations

from dataclasses import dataclass

from entroflow.composite.operations import (
    joint_distribution,
    natural_product_basis,
    partial_trace,
    product_basis_information,
)
from entroflow.composite.types import Partition
from entroflow.core.config import DEFAULT_TOLERANCES, ToleranceSet
from entroflow.core.operations import information
from entroflow.core.types import DensityOperator
from entroflow.inequalities.lemmas import lemma4_margin
from entroflow.lib.errors import PartitionNotBipartite


@dataclass(frozen=True)
class SubadditivityBreakdown:
    """
    margin = classical + quantum_remainder.

    - classical: lemma 4 margin of the joint distribution measured in the
      marginals' own eigenbases
    - quantum_remainder: information(rho) minus the information of that joint
      distribution (coherences the local measurement cannot see)
    """

    margin: float
    classical: float
    quantum_remainder: float


def _require_bipartite(p: Partition) -> None:
    if p.k != 2:
        raise PartitionNotBipartite(f"Expected a bipartition, got {p.k} factors ({p})")


def quantum_subadditivity_margin(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> float:
    """Tr rho ln rho - Tr rho_a ln rho_a - Tr rho_b ln rho_b; zero only for product states."""
    _require_bipartite(p)
    p.check_dim(rho.dim)
    rho_a = partial_trace(rho, p, 0, tol)
    rho_b = partial_trace(rho, p, 1, tol)
    return information(rho, tol) - information(rho_a, tol) - information(rho_b, tol)


def subadditivity_breakdown(
    rho: DensityOperator,
    p: Partition,
    tol: ToleranceSet = DEFAULT_TOLERANCES,
) -> SubadditivityBreakdown:
    _require_bipartite(p)
    basis = natural_product_basis(rho, p, tol)
    joint = joint_distribution(rho, p, basis, tol)
    return SubadditivityBreakdown(
        margin=quantum_subadditivity_margin(rho, p, tol),
        classical=lemma4_margin(joint),
        quantum_remainder=information(rho, tol) - product_basis_information(rho, p, basis, tol),
    )
