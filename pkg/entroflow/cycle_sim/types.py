from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from entroflow.composite.types import Partition
from entroflow.core.config import DEFAULT_MAX_DIM, DEFAULT_TOLERANCES, K_B_NATURAL, ToleranceSet
from entroflow.core.types import DensityOperator
from entroflow.inequalities.types import DoublyStochasticMatrix, ProbabilityVector
from entroflow.lib.errors import ConfigInvalid, InvariantError


class InitialState(str, Enum):
    RANDOM_PRODUCT = "random_product"
    GIVEN = "given"


class TransitionKind(str, Enum):
    FIXED = "fixed"
    RANDOM = "random"


class InitialDistribution(str, Enum):
    UNIFORM = "uniform"
    POINT = "point"
    RANDOM = "random"
    GIVEN = "given"


def _check_total_dim(partition: Partition, max_dim: int) -> None:
    if partition.total_dim > max_dim:
        raise ConfigInvalid(f"Total dimension {partition.total_dim} of {partition} exceeds max_dim={max_dim}")


@dataclass(frozen=True)
class CycleConfig:
    """
    One evolve -> measure experiment.

    - initial_state: random_product draws one random_density of rank
      `initial_rank` per factor from `initial_seed`; given uses `initial_operator`
    - evolution_time: t - t0 between two measurements (0 means no evolution)
    """

    partition: Partition
    n_cycles: int
    hamiltonian_seed: int
    coupling_strength: float
    evolution_time: float
    initial_state: InitialState = InitialState.RANDOM_PRODUCT
    initial_seed: int = 0
    initial_rank: int = 1
    initial_operator: Optional[DensityOperator] = None
    k_B: float = K_B_NATURAL
    tolerances: ToleranceSet = DEFAULT_TOLERANCES
    max_dim: int = DEFAULT_MAX_DIM

    def validate(self) -> None:
        _check_total_dim(self.partition, self.max_dim)
        if self.n_cycles < 0:
            raise ConfigInvalid(f"n_cycles must be >= 0, got {self.n_cycles}")
        if self.coupling_strength < 0.0:
            raise ConfigInvalid(f"coupling_strength must be >= 0, got {self.coupling_strength}")
        if self.evolution_time < 0.0:
            raise ConfigInvalid(f"evolution_time must be >= 0, got {self.evolution_time}")
        if not self.k_B > 0.0:
            raise ConfigInvalid(f"k_B must be positive, got {self.k_B}")
        if self.initial_state is InitialState.GIVEN:
            if self.initial_operator is None:
                raise ConfigInvalid("initial_state=given needs an initial operator")
            if self.initial_operator.dim != self.partition.total_dim:
                raise ConfigInvalid(
                    f"Initial operator dim {self.initial_operator.dim} does not match partition {self.partition}"
                )
        elif not all(1 <= self.initial_rank <= d for d in self.partition.dims):
            raise ConfigInvalid(f"initial_rank={self.initial_rank} must fit every factor of {self.partition}")


@dataclass(frozen=True)
class CycleRecord:
    """
    One measurement.

    - info_total: information of the whole state just before collapse (nats)
    - entropy_sum: -k_B * sum_i Tr(rho_i ln rho_i) over the parts
    - correlation_info_before_collapse: information lost by this measurement
    - delta_entropy: entropy_sum minus the previous record's (0 for the first)
    """

    cycle_index: int
    info_total: float
    entropy_sum: float
    correlation_info_before_collapse: float
    delta_entropy: float


@dataclass(frozen=True)
class ChainConfig:
    n_states: int
    n_steps: int
    transition: TransitionKind = TransitionKind.RANDOM
    transition_matrix: Optional[DoublyStochasticMatrix] = None
    k_terms: int = 5
    transition_seed: int = 0
    initial: InitialDistribution = InitialDistribution.POINT
    initial_values: Tuple[float, ...] = field(default_factory=tuple)
    initial_seed: int = 0
    tolerances: ToleranceSet = DEFAULT_TOLERANCES

    def validate(self) -> None:
        if self.n_states < 1:
            raise ConfigInvalid(f"n_states must be >= 1, got {self.n_states}")
        if self.n_steps < 0:
            raise ConfigInvalid(f"n_steps must be >= 0, got {self.n_steps}")
        if self.transition is TransitionKind.FIXED:
            if self.transition_matrix is None:
                raise ConfigInvalid("transition=fixed needs a transition matrix")
            if self.transition_matrix.n != self.n_states:
                raise ConfigInvalid(
                    f"Transition matrix size {self.transition_matrix.n} does not match n_states={self.n_states}"
                )
        elif self.k_terms < 1:
            raise ConfigInvalid(f"k_terms must be >= 1, got {self.k_terms}")
        if self.initial is InitialDistribution.GIVEN and len(self.initial_values) != self.n_states:
            raise ConfigInvalid(f"Initial distribution has {len(self.initial_values)} entries, expected {self.n_states}")
        if self.initial is InitialDistribution.GIVEN:
            try:
                ProbabilityVector.from_values(self.initial_values, self.tolerances)
            except InvariantError as exc:
                raise ConfigInvalid(f"Initial distribution {list(self.initial_values)}: {exc}") from None


@dataclass(frozen=True)
class ChainStep:
    step: int
    entries: Tuple[float, ...]
    shannon_info: float
    margin: float


@dataclass(frozen=True)
class ClassicalCycleConfig:
    """
    Classical realisation of the measured-cycle protocol.

    The joint distribution over the partition is moved by one fixed random
    permutation of joint states (drawn from `permutation_seed`) and then
    replaced by the product of its marginals.
    """

    partition: Partition
    n_cycles: int
    permutation_seed: int = 0
    initial_seed: int = 0
    k_B: float = K_B_NATURAL
    tolerances: ToleranceSet = DEFAULT_TOLERANCES
    max_dim: int = DEFAULT_MAX_DIM

    def validate(self) -> None:
        _check_total_dim(self.partition, self.max_dim)
        if self.n_cycles < 0:
            raise ConfigInvalid(f"n_cycles must be >= 0, got {self.n_cycles}")
        if not self.k_B > 0.0:
            raise ConfigInvalid(f"k_B must be positive, got {self.k_B}")
