from __future__ import annotations

import math

import numpy as np
import pytest

from entroflow.composite.types import Partition
from entroflow.cycle_sim.chain import run_classical_chain, run_classical_cycle_experiment, steps_to_uniform
from entroflow.cycle_sim.types import (
    ChainConfig,
    ClassicalCycleConfig,
    InitialDistribution,
    TransitionKind,
)
from entroflow.inequalities.types import DoublyStochasticMatrix
from entroflow.lib.errors import ConfigInvalid


def _fixed(matrix, **kwargs) -> ChainConfig:
    t = DoublyStochasticMatrix.from_values(matrix)
    return ChainConfig(
        n_states=t.n,
        n_steps=kwargs.pop("n_steps", 10),
        transition=TransitionKind.FIXED,
        transition_matrix=t,
        **kwargs,
    )


def test_random_chain_information_never_rises():
    for seed in range(20):
        steps = run_classical_chain(ChainConfig(n_states=8, n_steps=100, transition_seed=seed))

        assert len(steps) == 101
        assert steps[0].margin == 0.0
        assert steps[0].shannon_info == 0.0
        assert min(s.margin for s in steps) >= -1e-12
        for previous, step in zip(steps, steps[1:]):
            assert step.shannon_info <= previous.shannon_info + 1e-9
            assert step.margin == pytest.approx(previous.shannon_info - step.shannon_info, abs=1e-12)


def test_uniform_transition_reaches_uniform_in_one_step():
    steps = run_classical_chain(_fixed(np.full((4, 4), 0.25)))

    assert [s.shannon_info for s in steps[1:]] == pytest.approx([-math.log(4)] * 10, abs=1e-12)
    assert steps_to_uniform(steps) == 1


def test_identity_transition_gives_zero_margins():
    steps = run_classical_chain(
        _fixed(np.eye(4), initial=InitialDistribution.GIVEN, initial_values=(0.1, 0.2, 0.3, 0.4))
    )
    assert all(s.margin == 0.0 for s in steps)
    assert steps_to_uniform(steps) is None


def test_initial_distributions():
    uniform = run_classical_chain(ChainConfig(n_states=5, n_steps=0, initial=InitialDistribution.UNIFORM))
    assert uniform[0].shannon_info == pytest.approx(-math.log(5))

    random_a = run_classical_chain(ChainConfig(n_states=5, n_steps=3, initial=InitialDistribution.RANDOM, initial_seed=2))
    random_b = run_classical_chain(ChainConfig(n_states=5, n_steps=3, initial=InitialDistribution.RANDOM, initial_seed=2))
    assert random_a == random_b
    assert sum(random_a[0].entries) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "cfg",
    [
        ChainConfig(n_states=0, n_steps=1),
        ChainConfig(n_states=3, n_steps=-1),
        ChainConfig(n_states=3, n_steps=1, transition=TransitionKind.FIXED),
        ChainConfig(n_states=3, n_steps=1, k_terms=0),
        ChainConfig(n_states=3, n_steps=1, initial=InitialDistribution.GIVEN, initial_values=(0.5, 0.5)),
        ChainConfig(n_states=2, n_steps=1, initial=InitialDistribution.GIVEN, initial_values=(0.7, 0.7)),
        ChainConfig(n_states=2, n_steps=1, initial=InitialDistribution.GIVEN, initial_values=(1.5, -0.5)),
    ],
)
def test_invalid_chain_configs(cfg):
    with pytest.raises(ConfigInvalid):
        run_classical_chain(cfg)


def test_fixed_transition_must_match_size():
    cfg = ChainConfig(
        n_states=3,
        n_steps=1,
        transition=TransitionKind.FIXED,
        transition_matrix=DoublyStochasticMatrix.from_values(np.eye(2)),
    )
    with pytest.raises(ConfigInvalid):
        run_classical_chain(cfg)


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 3, 2)])
def test_classical_cycle_entropy_never_decreases(dims):
    for seed in range(30):
        cfg = ClassicalCycleConfig(
            partition=Partition(dims=dims),
            n_cycles=15,
            permutation_seed=seed,
            initial_seed=seed,
        )
        records = run_classical_cycle_experiment(cfg)

        assert len(records) == 16
        for previous, record in zip(records, records[1:]):
            assert record.delta_entropy >= -1e-9
            assert record.delta_entropy == pytest.approx(record.correlation_info_before_collapse, abs=1e-9)
            assert record.info_total == pytest.approx(-previous.entropy_sum, abs=1e-12)
        assert records[-1].entropy_sum <= math.log(cfg.partition.total_dim) + 1e-9


def test_classical_cycle_rejects_large_partition():
    with pytest.raises(ConfigInvalid):
        run_classical_cycle_experiment(ClassicalCycleConfig(partition=Partition.of(8, 16), n_cycles=1))
