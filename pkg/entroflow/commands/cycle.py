from __future__ import annotations

import logging
from typing import Any, Dict, List, Sequence

from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.composite.types import Partition
from entroflow.core.config import ToleranceSet
from entroflow.core.operations import validate_density
from entroflow.core.serialization import load_matrix
from entroflow.cycle_sim.experiment import entropy_ceiling, run_cycle_experiment
from entroflow.cycle_sim.types import CycleConfig, CycleRecord, InitialState
from entroflow.lib.args import Template
from entroflow.lib.errors import ConfigInvalid, InvariantError, MatrixFileError
from entroflow.lib.report import write_csv, write_json

logger = logging.getLogger(__name__)

CYCLE_CSV_HEADER = ["cycle", "info_total", "entropy_sum", "correlation_info", "delta_entropy"]


def parse_partition(dims: Sequence[int]) -> Partition:
    try:
        return Partition(dims=tuple(dims))
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from None


def write_cycle_records(path: str, records: Sequence[CycleRecord]) -> str:
    """Rows for cycles 1..n; the t0 measurement is reported in the summary."""
    return write_csv(
        path,
        CYCLE_CSV_HEADER,
        (
            [
                r.cycle_index,
                r.info_total,
                r.entropy_sum,
                r.correlation_info_before_collapse,
                r.delta_entropy,
            ]
            for r in records[1:]
        ),
    )


def cycle_summary(
    records: Sequence[CycleRecord],
    tol: ToleranceSet,
    ceiling: float,
    k_B: float,
) -> Dict[str, Any]:
    """
    Monotonicity and ceiling checks of a cycle run.

    Entropies are in k_B units and are divided by k_B before being compared
    with tol.entropy, which is in nats. increment_identity_error is in nats.
    """
    later = records[1:]
    max_violation = max((max(0.0, -r.delta_entropy) for r in later), default=0.0)
    identity_error = max(
        (abs(r.delta_entropy / k_B - r.correlation_info_before_collapse) for r in later),
        default=0.0,
    )
    overshoot = max((r.entropy_sum - ceiling for r in records), default=0.0)
    return {
        "cycles": len(later),
        "monotone": max_violation / k_B <= tol.entropy,
        "max_violation": max_violation,
        "initial_entropy": records[0].entropy_sum,
        "final_entropy": records[-1].entropy_sum,
        "ceiling": ceiling,
        "below_ceiling": overshoot / k_B <= tol.entropy,
        "increment_identity_error": identity_error,
    }


def summary_result(summary: Dict[str, Any], outputs: List[str]) -> CommandResult:
    if summary["monotone"] and summary["below_ceiling"]:
        return CommandResult(EXIT_OK, outputs, worst_margin=-summary["max_violation"])
    return CommandResult(
        EXIT_VIOLATION,
        outputs,
        worst_margin=-summary["max_violation"],
        message=(
            f"entropy decreased by {summary['max_violation']:.3e}"
            if not summary["monotone"]
            else f"entropy above ceiling {summary['ceiling']:.6g}"
        ),
    )


class Cycle(AbstractCommand):
    name: str = "cycle"
    description: str = "Evolve -> measure cycles on a partitioned quantum system."

    template: Template = [
        ("--cycle-partition", int, [2, 2], "Factor dimensions. Example: --cycle-partition 2 2 2"),
        ("--cycle-n-cycles", int, 20, "Number of evolve/measure cycles after the t0 measurement."),
        (
            "--cycle-hamiltonian-seed",
            int,
            None,
            "Seed of the random Hamiltonian. Default: the run's master seed.",
        ),
        ("--cycle-coupling", float, 1.0, "Weight of the global (entangling) Hamiltonian term."),
        ("--cycle-evolution-time", float, 1.0, "Time between two measurements. 0 disables evolution."),
        (
            "--cycle-initial-state",
            str,
            InitialState.RANDOM_PRODUCT.value,
            "random_product (random factor states) or given (read --cycle-initial-file).",
        ),
        ("--cycle-initial-seed", int, None, "Seed of the initial factor states. Default: master seed."),
        ("--cycle-initial-rank", int, 1, "Rank of every random initial factor state (1 = pure)."),
        ("--cycle-initial-file", str, None, "Matrix file holding the initial density operator."),
        ("--cycle-k-b", float, 1.0, "Boltzmann constant in the chosen units (1 = nats)."),
    ]

    def build_config(self, ctx: Context) -> CycleConfig:
        config = ctx.config
        try:
            initial_kind = InitialState(config["cycle_initial_state"])
        except ValueError:
            raise ConfigInvalid(f"Unknown --cycle-initial-state {config['cycle_initial_state']!r}") from None

        initial_operator = None
        if initial_kind is InitialState.GIVEN:
            path = config["cycle_initial_file"]
            if not path:
                raise ConfigInvalid("--cycle-initial-state given needs --cycle-initial-file")
            matrix = load_matrix(path)
            try:
                initial_operator = validate_density(matrix, ctx.tolerances)
            except (InvariantError, ValueError) as exc:
                raise MatrixFileError(path, str(exc)) from None

        def seed_or_master(key: str) -> int:
            value = config[key]
            return ctx.master_seed if value is None else int(value)

        return CycleConfig(
            partition=parse_partition(config["cycle_partition"]),
            n_cycles=int(config["cycle_n_cycles"]),
            hamiltonian_seed=seed_or_master("cycle_hamiltonian_seed"),
            coupling_strength=float(config["cycle_coupling"]),
            evolution_time=float(config["cycle_evolution_time"]),
            initial_state=initial_kind,
            initial_seed=seed_or_master("cycle_initial_seed"),
            initial_rank=int(config["cycle_initial_rank"]),
            initial_operator=initial_operator,
            k_B=float(config["cycle_k_b"]),
            tolerances=ctx.tolerances,
            max_dim=ctx.max_dim,
        )

    def run(self, ctx: Context) -> CommandResult:
        cfg = self.build_config(ctx)
        cfg.validate()
        logger.info(
            f"partition {cfg.partition}, coupling {cfg.coupling_strength}, "
            f"{cfg.n_cycles} cycles, hamiltonian seed {cfg.hamiltonian_seed}"
        )

        records = run_cycle_experiment(cfg)
        summary = cycle_summary(records, ctx.tolerances, entropy_ceiling(cfg), cfg.k_B)
        logger.info(f"final entropy {summary['final_entropy']:.12g}, monotone={summary['monotone']}")

        outputs = [
            write_cycle_records(ctx.out_path("cycles.csv"), records),
            write_json(ctx.out_path("summary.json"), summary),
        ]
        return summary_result(summary, outputs)
