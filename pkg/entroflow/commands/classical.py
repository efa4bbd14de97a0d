from __future__ import annotations

import logging
import math
from typing import List

import numpy as np

from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.commands.cycle import (
    cycle_summary,
    parse_partition,
    summary_result,
    write_cycle_records,
)
from entroflow.core.serialization import load_matrix
from entroflow.cycle_sim.chain import (
    run_classical_chain,
    run_classical_cycle_experiment,
    steps_to_uniform,
)
from entroflow.cycle_sim.types import (
    ChainConfig,
    ClassicalCycleConfig,
    InitialDistribution,
    TransitionKind,
)
from entroflow.inequalities.types import DoublyStochasticMatrix
from entroflow.lib.args import Template
from entroflow.lib.errors import ConfigInvalid, InvariantError, MatrixFileError
from entroflow.lib.report import write_csv, write_json

logger = logging.getLogger(__name__)

MODES = ("chain", "cycle")


class Classical(AbstractCommand):
    name: str = "classical"
    description: str = "Doubly stochastic chains and classical evolve -> marginalise cycles."

    template: Template = [
        ("--classical-mode", str, "chain", "chain (repeated doubly stochastic map) or cycle (permute -> marginalise)."),
        ("--classical-n-states", int, 8, "Chain: number of states n."),
        ("--classical-n-steps", int, 100, "Chain: number of transitions applied."),
        ("--classical-transition", str, TransitionKind.RANDOM.value, "Chain: random or fixed (read --classical-transition-file)."),
        ("--classical-transition-file", str, None, "Chain: matrix file with a doubly stochastic T."),
        ("--classical-k-terms", int, 5, "Chain: permutations mixed into a random T."),
        ("--classical-transition-seed", int, None, "Chain: seed of the random T. Default: master seed."),
        (
            "--classical-initial",
            str,
            InitialDistribution.POINT.value,
            "Chain: uniform, point (all mass on state 0), random or given (--classical-initial-values).",
        ),
        ("--classical-initial-values", float, [], "Chain: initial probabilities for --classical-initial given."),
        ("--classical-uniform-atol", float, 1e-6, "Chain: distance to uniform reported as converged."),
        ("--classical-partition", int, [2, 2], "Cycle: part sizes of the joint distribution."),
        ("--classical-n-cycles", int, 20, "Cycle: number of permute/marginalise cycles."),
        ("--classical-k-b", float, 1.0, "Cycle: Boltzmann constant in the chosen units."),
    ]

    def _load_transition(self, ctx: Context) -> DoublyStochasticMatrix:
        path = ctx.config["classical_transition_file"]
        if not path:
            raise ConfigInvalid("--classical-transition fixed needs --classical-transition-file")
        matrix = load_matrix(path)
        if np.max(np.abs(matrix.imag)) > 0.0:
            raise MatrixFileError(path, "transition matrix must be real")
        try:
            return DoublyStochasticMatrix.from_values(matrix.real, ctx.tolerances)
        except (InvariantError, ValueError) as exc:
            raise MatrixFileError(path, str(exc)) from None

    def build_chain_config(self, ctx: Context) -> ChainConfig:
        config = ctx.config
        try:
            transition = TransitionKind(config["classical_transition"])
            initial = InitialDistribution(config["classical_initial"])
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

        seed = config["classical_transition_seed"]
        return ChainConfig(
            n_states=int(config["classical_n_states"]),
            n_steps=int(config["classical_n_steps"]),
            transition=transition,
            transition_matrix=self._load_transition(ctx) if transition is TransitionKind.FIXED else None,
            k_terms=int(config["classical_k_terms"]),
            transition_seed=ctx.master_seed if seed is None else int(seed),
            initial=initial,
            initial_values=tuple(config["classical_initial_values"]),
            initial_seed=ctx.master_seed,
            tolerances=ctx.tolerances,
        )

    def _run_chain(self, ctx: Context) -> CommandResult:
        cfg = self.build_chain_config(ctx)
        steps = run_classical_chain(cfg)

        header = ["step"] + [f"w{i}" for i in range(cfg.n_states)] + ["shannon_info", "margin"]
        rows = ([s.step, *s.entries, s.shannon_info, s.margin] for s in steps)
        min_margin = min(s.margin for s in steps)
        converged_at = steps_to_uniform(steps, ctx.config["classical_uniform_atol"])

        summary = {
            "n_states": cfg.n_states,
            "steps": cfg.n_steps,
            "min_margin": min_margin,
            "final_info": steps[-1].shannon_info,
            "uniform_info": -math.log(cfg.n_states),
            "steps_to_uniform": converged_at,
        }
        logger.info(f"chain n={cfg.n_states}: min margin {min_margin:.3e}, uniform after {converged_at}")

        outputs = [
            write_csv(ctx.out_path("chain.csv"), header, rows),
            write_json(ctx.out_path("summary.json"), summary),
        ]
        if min_margin < -ctx.tolerances.entropy:
            return CommandResult(EXIT_VIOLATION, outputs, worst_margin=min_margin, message="lemma 3 margin negative")
        return CommandResult(EXIT_OK, outputs, worst_margin=min_margin)

    def _run_cycle(self, ctx: Context) -> CommandResult:
        config = ctx.config
        cfg = ClassicalCycleConfig(
            partition=parse_partition(config["classical_partition"]),
            n_cycles=int(config["classical_n_cycles"]),
            permutation_seed=ctx.master_seed,
            initial_seed=ctx.master_seed,
            k_B=float(config["classical_k_b"]),
            tolerances=ctx.tolerances,
            max_dim=ctx.max_dim,
        )
        records = run_classical_cycle_experiment(cfg)
        ceiling = cfg.k_B * math.log(cfg.partition.total_dim)
        summary = cycle_summary(records, ctx.tolerances, ceiling, cfg.k_B)

        outputs: List[str] = [
            write_cycle_records(ctx.out_path("cycles.csv"), records),
            write_json(ctx.out_path("summary.json"), summary),
        ]
        return summary_result(summary, outputs)

    def run(self, ctx: Context) -> CommandResult:
        mode = ctx.config["classical_mode"]
        if mode not in MODES:
            raise ConfigInvalid(f"Unknown --classical-mode {mode!r}, expected one of {MODES}")
        if mode == "chain":
            return self._run_chain(ctx)
        return self._run_cycle(ctx)
