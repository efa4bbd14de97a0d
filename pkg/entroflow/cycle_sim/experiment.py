from __future__ import annotations

import logging
import math
from typing import List, Optional

from entroflow.composite.operations import reduced_operators, tensor_product
from entroflow.core.operations import evolve, hamiltonian_unitary, information
from entroflow.core.random import make_stream, random_density
from entroflow.core.types import DensityOperator
from entroflow.cycle_sim.hamiltonian import build_interacting_hamiltonian
from entroflow.cycle_sim.types import CycleConfig, CycleRecord, InitialState
from entroflow.lib.errors import ConservationViolation

logger = logging.getLogger(__name__)


def initial_state(cfg: CycleConfig) -> DensityOperator:
    if cfg.initial_state is InitialState.GIVEN:
        assert cfg.initial_operator is not None
        return cfg.initial_operator

    rng = make_stream(cfg.initial_seed, 1)
    factors = [random_density(dim, cfg.initial_rank, rng, cfg.tolerances) for dim in cfg.partition.dims]
    return tensor_product(factors, cfg.tolerances)


def _measure(
    cfg: CycleConfig,
    cycle_index: int,
    state: DensityOperator,
    previous: Optional[CycleRecord],
) -> tuple[CycleRecord, DensityOperator]:
    """Measure every part: record the entropies and return the collapsed state."""
    tol = cfg.tolerances
    info_total = information(state, tol)
    parts = reduced_operators(state, cfg.partition, tol)
    part_info = [information(part, tol) for part in parts]

    entropy_sum = -cfg.k_B * sum(part_info)
    record = CycleRecord(
        cycle_index=cycle_index,
        info_total=info_total,
        entropy_sum=entropy_sum,
        correlation_info_before_collapse=info_total - sum(part_info),
        delta_entropy=0.0 if previous is None else entropy_sum - previous.entropy_sum,
    )
    return record, tensor_product(parts, tol)


def run_cycle_experiment(cfg: CycleConfig) -> List[CycleRecord]:
    """
    Record 0 is the measurement at t0 on the initial state. Every later record
    evolves the collapsed state for `evolution_time` and measures again.
    """
    cfg.validate()
    tol = cfg.tolerances

    hamiltonian = build_interacting_hamiltonian(
        cfg.partition,
        cfg.coupling_strength,
        make_stream(cfg.hamiltonian_seed, 0),
        tol,
    )
    unitary = hamiltonian_unitary(hamiltonian, cfg.evolution_time, tol)

    record, state = _measure(cfg, 0, initial_state(cfg), previous=None)
    records = [record]
    logger.debug(f"cycle 0: entropy_sum={record.entropy_sum:.12g}")

    for cycle_index in range(1, cfg.n_cycles + 1):
        info_before = information(state, tol)
        evolved = evolve(state, unitary, tol)

        record, state = _measure(cfg, cycle_index, evolved, previous=records[-1])
        drift = abs(record.info_total - info_before)
        if drift > tol.conserve:
            raise ConservationViolation(
                f"cycle {cycle_index}: information changed by {drift:.3e} under unitary evolution"
            )

        records.append(record)
        logger.debug(
            f"cycle {cycle_index}: entropy_sum={record.entropy_sum:.12g} "
            f"correlation={record.correlation_info_before_collapse:.3e}"
        )

    return records


def entropy_ceiling(cfg: CycleConfig) -> float:
    """k_B ln(total_dim): no measured entropy can exceed it."""
    return cfg.k_B * math.log(cfg.partition.total_dim)
