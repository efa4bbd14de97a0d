from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from entroflow.core.random import make_stream
from entroflow.cycle_sim.types import (
    ChainConfig,
    ChainStep,
    ClassicalCycleConfig,
    CycleRecord,
    InitialDistribution,
    TransitionKind,
)
from entroflow.inequalities.lemmas import (
    doubly_stochastic_apply,
    lemma3_margin,
    outer_product,
    shannon_information,
)
from entroflow.inequalities.random import random_doubly_stochastic, random_joint
from entroflow.inequalities.types import (
    DoublyStochasticMatrix,
    JointDistribution,
    ProbabilityVector,
)

logger = logging.getLogger(__name__)


def chain_transition(cfg: ChainConfig) -> DoublyStochasticMatrix:
    if cfg.transition is TransitionKind.FIXED:
        assert cfg.transition_matrix is not None
        return cfg.transition_matrix
    return random_doubly_stochastic(cfg.n_states, cfg.k_terms, make_stream(cfg.transition_seed, 0))


def chain_initial(cfg: ChainConfig) -> ProbabilityVector:
    n = cfg.n_states
    if cfg.initial is InitialDistribution.UNIFORM:
        return ProbabilityVector.uniform(n)
    if cfg.initial is InitialDistribution.RANDOM:
        return ProbabilityVector(entries=make_stream(cfg.initial_seed, 1).dirichlet(np.ones(n)))
    if cfg.initial is InitialDistribution.GIVEN:
        return ProbabilityVector.from_values(cfg.initial_values, cfg.tolerances)

    point = np.zeros(n)
    point[0] = 1.0
    return ProbabilityVector(entries=point)


def run_classical_chain(cfg: ChainConfig) -> List[ChainStep]:
    """
    W(k+1) = W(k) T for a doubly stochastic T.

    Step 0 is the initial distribution (margin 0). The margin of step k is the
    lemma 3 margin of the transition that produced it, so sum W ln W never
    rises by more than tol.entropy from one step to the next.
    """
    cfg.validate()
    tol = cfg.tolerances
    transition = chain_transition(cfg)
    current = chain_initial(cfg)

    steps = [ChainStep(0, tuple(current.entries.tolist()), shannon_information(current), 0.0)]
    for step in range(1, cfg.n_steps + 1):
        margin = lemma3_margin(current, transition, tol)
        current = doubly_stochastic_apply(current, transition, tol)
        steps.append(ChainStep(step, tuple(current.entries.tolist()), shannon_information(current), margin))

    logger.debug(f"chain n={cfg.n_states}: final info={steps[-1].shannon_info:.12g}")
    return steps


def steps_to_uniform(steps: Sequence[ChainStep], atol: float = 1e-6) -> Optional[int]:
    """First step whose entries are all within atol of 1/n, or None."""
    for chain_step in steps:
        entries = np.asarray(chain_step.entries)
        if np.max(np.abs(entries - 1.0 / entries.size)) <= atol:
            return chain_step.step
    return None


def _permute_joint(joint: JointDistribution, permutation: np.ndarray) -> JointDistribution:
    flat = joint.entries.ravel()
    moved = np.empty_like(flat)
    moved[permutation] = flat
    return JointDistribution(entries=moved.reshape(joint.shape))


def _classical_measure(
    cfg: ClassicalCycleConfig,
    cycle_index: int,
    joint: JointDistribution,
    previous: Optional[CycleRecord],
) -> tuple[CycleRecord, JointDistribution]:
    info_total = shannon_information(joint)
    marginals = joint.marginals()
    part_info = [shannon_information(m) for m in marginals]
    entropy_sum = -cfg.k_B * sum(part_info)
    record = CycleRecord(
        cycle_index=cycle_index,
        info_total=info_total,
        entropy_sum=entropy_sum,
        correlation_info_before_collapse=info_total - sum(part_info),
        delta_entropy=0.0 if previous is None else entropy_sum - previous.entropy_sum,
    )
    return record, outer_product(*marginals)


def run_classical_cycle_experiment(cfg: ClassicalCycleConfig) -> List[CycleRecord]:
    """
    Same protocol as run_cycle_experiment with a classical joint distribution:
    a bijection of joint states conserves sum W ln W exactly, the product of
    marginals plays the role of the collapse.
    """
    cfg.validate()
    shape = cfg.partition.dims

    permutation = make_stream(cfg.permutation_seed, 0).permutation(cfg.partition.total_dim)
    init_rng = make_stream(cfg.initial_seed, 1)
    parts = [random_joint((dim,), init_rng).marginal(0) for dim in shape]

    record, joint = _classical_measure(cfg, 0, outer_product(*parts), previous=None)
    records = [record]
    for cycle_index in range(1, cfg.n_cycles + 1):
        evolved = _permute_joint(joint, permutation)
        record, joint = _classical_measure(cfg, cycle_index, evolved, previous=records[-1])
        records.append(record)

    return records
