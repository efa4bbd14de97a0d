from __future__ import annotations

import math

import numpy as np
import pytest

import entroflow.cycle_sim.experiment as experiment_mod
from entroflow.composite.types import Partition
from entroflow.core.operations import spectral_decompose, validate_density
from entroflow.core.random import make_stream
from entroflow.cycle_sim.experiment import entropy_ceiling, initial_state, run_cycle_experiment
from entroflow.cycle_sim.hamiltonian import build_interacting_hamiltonian, embed_local, unit_scale
from entroflow.cycle_sim.types import CycleConfig, InitialState
from entroflow.lib.errors import ConfigInvalid, ConservationViolation

TOL_ENTROPY = 1e-9


def _config(dims, coupling=1.0, seed=0, n_cycles=10, **kwargs) -> CycleConfig:
    return CycleConfig(
        partition=Partition(dims=tuple(dims)),
        n_cycles=n_cycles,
        hamiltonian_seed=seed,
        coupling_strength=coupling,
        evolution_time=1.0,
        initial_seed=seed,
        **kwargs,
    )


def test_embed_local_places_term_on_its_factor():
    term = np.array([[1.0, 2.0], [2.0, -1.0]])
    p = Partition.of(3, 2)
    np.testing.assert_array_equal(embed_local(term, p, 1), np.kron(np.eye(3), term))


def test_interaction_term_has_unit_scale():
    p = Partition.of(2, 2)
    h0 = build_interacting_hamiltonian(p, 0.0, make_stream(5, 0))
    h1 = build_interacting_hamiltonian(p, 1.0, make_stream(5, 0))

    radius = np.max(np.abs(np.linalg.eigvalsh(h1.matrix - h0.matrix)))
    assert radius == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(spectral_decompose(unit_scale(h1)).eigenvalues)) == pytest.approx(1.0)

    with pytest.raises(ValueError):
        build_interacting_hamiltonian(p, -1.0, make_stream(5, 0))


@pytest.mark.parametrize("dims", [(2, 2), (2, 4), (2, 2, 2), (3, 3)])
@pytest.mark.parametrize("coupling", [0.0, 0.3, 1.0])
def test_summed_entropy_never_decreases(dims, coupling):
    for seed in range(50):
        cfg = _config(dims, coupling=coupling, seed=seed)
        records = run_cycle_experiment(cfg)
        ceiling = entropy_ceiling(cfg)

        assert len(records) == cfg.n_cycles + 1
        for previous, record in zip(records, records[1:]):
            assert record.delta_entropy >= -TOL_ENTROPY
            assert record.delta_entropy == pytest.approx(
                record.entropy_sum - previous.entropy_sum, abs=1e-15
            )
            assert record.delta_entropy == pytest.approx(
                cfg.k_B * record.correlation_info_before_collapse, abs=TOL_ENTROPY
            )
            # the state entering this cycle was the product of the previous marginals
            assert record.info_total == pytest.approx(-previous.entropy_sum / cfg.k_B, abs=TOL_ENTROPY)
        assert max(r.entropy_sum for r in records) <= ceiling + TOL_ENTROPY


def test_uncoupled_parts_keep_entropy_constant():
    records = run_cycle_experiment(_config((2, 2), coupling=0.0, seed=3, n_cycles=20))
    assert max(abs(r.delta_entropy) for r in records) <= 1e-12


def test_first_record_is_the_initial_measurement():
    cfg = _config((2, 2), n_cycles=0)
    records = run_cycle_experiment(cfg)

    assert len(records) == 1
    assert records[0].cycle_index == 0
    assert records[0].delta_entropy == 0.0
    # pure product start: every part is pure
    assert records[0].entropy_sum == pytest.approx(0.0, abs=1e-12)
    assert records[0].correlation_info_before_collapse == pytest.approx(0.0, abs=1e-12)


def test_runs_are_deterministic():
    a = run_cycle_experiment(_config((2, 3), seed=12))
    b = run_cycle_experiment(_config((2, 3), seed=12))
    assert a == b


def test_k_b_scales_entropy():
    natural = run_cycle_experiment(_config((2, 2), seed=4))
    scaled = run_cycle_experiment(_config((2, 2), seed=4, k_B=2.0))
    for r1, r2 in zip(natural, scaled):
        assert r2.entropy_sum == pytest.approx(2.0 * r1.entropy_sum, abs=1e-12)


def test_given_bell_state_without_evolution():
    bell = validate_density(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2)
    cfg = CycleConfig(
        partition=Partition.of(2, 2),
        n_cycles=3,
        hamiltonian_seed=0,
        coupling_strength=1.0,
        evolution_time=0.0,
        initial_state=InitialState.GIVEN,
        initial_operator=bell,
    )
    assert initial_state(cfg) is bell

    records = run_cycle_experiment(cfg)
    assert records[0].entropy_sum == pytest.approx(2 * math.log(2), abs=1e-12)
    assert records[0].correlation_info_before_collapse == pytest.approx(2 * math.log(2), abs=1e-12)
    assert [r.delta_entropy for r in records[1:]] == pytest.approx([0.0] * 3, abs=1e-12)


def test_broken_evolution_raises_conservation_violation(monkeypatch):
    def dephasing(rho, u, tol):
        return validate_density(np.eye(rho.dim) / rho.dim)

    monkeypatch.setattr(experiment_mod, "evolve", dephasing)
    with pytest.raises(ConservationViolation, match="cycle 1"):
        run_cycle_experiment(_config((2, 2)))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"dims": (8, 16)},
        {"dims": (2, 2), "coupling": -0.1},
        {"dims": (2, 2), "n_cycles": -1},
        {"dims": (2, 3), "initial_rank": 3},
        {"dims": (2, 2), "initial_state": InitialState.GIVEN},
    ],
)
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigInvalid):
        run_cycle_experiment(_config(**kwargs))
