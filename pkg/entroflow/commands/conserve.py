from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.core.operations import evolve, information
from entroflow.core.random import make_stream, random_density, random_unitary
from entroflow.core.types import UnitaryOperator
from entroflow.lib.args import Template
from entroflow.lib.errors import ConfigInvalid
from entroflow.lib.pool import ordered_map
from entroflow.lib.report import write_csv, write_json

logger = logging.getLogger(__name__)

CONSERVE_CSV_HEADER = ["dim", "trial", "delta_info"]


@dataclass(frozen=True)
class ConserveTrial:
    dim: int
    trial: int
    delta_info: float


class Conserve(AbstractCommand):
    name: str = "conserve"
    description: str = "Check that unitary evolution leaves Tr(rho ln rho) unchanged."

    template: Template = [
        ("--conserve-dims", int, [2, 4, 8, 16], "Hilbert-space dimensions to test. Example: --conserve-dims 2 4"),
        ("--conserve-trials", int, 100, "Random (rho, U) pairs per dimension."),
        ("--conserve-rank", int, 0, "Rank of every random rho. 0 draws the rank uniformly from 1..dim."),
        ("--conserve-identity", bool, False, "Use U = I instead of a random unitary."),
    ]

    def _trial(self, ctx: Context, dim: int, trial: int) -> ConserveTrial:
        rng = make_stream(ctx.master_seed, dim, trial)
        rank = int(ctx.config["conserve_rank"])
        if rank == 0:
            rank = int(rng.integers(1, dim + 1))
        if rank > dim:
            raise ConfigInvalid(f"--conserve-rank {rank} exceeds dimension {dim}")

        rho = random_density(dim, rank, rng, ctx.tolerances)
        if ctx.config["conserve_identity"]:
            u = UnitaryOperator(matrix=np.eye(dim, dtype=complex))
        else:
            u = random_unitary(dim, rng, ctx.tolerances)

        delta = abs(information(evolve(rho, u, ctx.tolerances), ctx.tolerances) - information(rho, ctx.tolerances))
        logger.debug(f"dim {dim} trial {trial}: rank {rank}, |dI| = {delta:.3e}")
        return ConserveTrial(dim, trial, delta)

    def run(self, ctx: Context) -> CommandResult:
        dims = [int(d) for d in ctx.config["conserve_dims"]]
        for dim in dims:
            if not 1 <= dim <= ctx.max_dim:
                raise ConfigInvalid(f"--conserve-dims {dim} outside 1..{ctx.max_dim}")
        if int(ctx.config["conserve_rank"]) < 0:
            raise ConfigInvalid("--conserve-rank must be >= 0")
        trials = max(0, int(ctx.config["conserve_trials"]))

        jobs = [(dim, trial) for dim in dims for trial in range(trials)]
        results: List[ConserveTrial] = ordered_map(lambda job: self._trial(ctx, *job), jobs, ctx.workers)

        per_dim = {}
        for dim in dims:
            deltas = [r.delta_info for r in results if r.dim == dim]
            per_dim[str(dim)] = {"trials": len(deltas), "max_delta": max(deltas, default=0.0)}
            logger.info(f"dim {dim}: {len(deltas)} trials, max |dI| = {per_dim[str(dim)]['max_delta']:.3e}")

        max_delta = max((r.delta_info for r in results), default=0.0)
        summary = {
            "dims": per_dim,
            "max_delta": max_delta,
            "tolerance": ctx.tolerances.conserve,
            "conserved": max_delta <= ctx.tolerances.conserve,
        }

        outputs = [
            write_csv(
                ctx.out_path("conserve.csv"),
                CONSERVE_CSV_HEADER,
                ([r.dim, r.trial, r.delta_info] for r in results),
            ),
            write_json(ctx.out_path("summary.json"), summary),
        ]
        if max_delta > ctx.tolerances.conserve:
            for r in results:
                if r.delta_info > ctx.tolerances.conserve:
                    logger.warning(f"dim {r.dim} trial {r.trial}: |dI| = {r.delta_info:.3e}")
            return CommandResult(
                EXIT_VIOLATION,
                outputs,
                worst_margin=ctx.tolerances.conserve - max_delta,
                message=f"information changed by {max_delta:.3e} under evolution",
            )
        return CommandResult(EXIT_OK, outputs, worst_margin=ctx.tolerances.conserve - max_delta)
