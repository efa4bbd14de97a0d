from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.core.random import make_stream
from entroflow.core.serialization import load_matrix
from entroflow.inequalities.lemmas import (
    lemma1_margin,
    lemma2_margin,
    lemma3_margin,
    lemma4_margin,
)
from entroflow.inequalities.random import (
    random_doubly_stochastic,
    random_joint,
    random_probability_vector,
)
from entroflow.inequalities.types import DoublyStochasticMatrix
from entroflow.lib.args import Template
from entroflow.lib.errors import InvariantError, MatrixFileError
from entroflow.lib.pool import ordered_map
from entroflow.lib.report import write_csv, write_json

logger = logging.getLogger(__name__)

LEMMA_CSV_HEADER = ["lemma", "instance", "n", "margin", "seed"]


@dataclass(frozen=True)
class LemmaSample:
    lemma: int
    instance: int
    n: int
    margin: float


class Lemmas(AbstractCommand):
    name: str = "lemmas"
    description: str = "Randomised sweeps of the four classical information inequalities."

    template: Template = [
        ("--lemmas-lemma1-instances", int, 10000, "Random instances for lemma 1 (x ln x >= x - 1)."),
        ("--lemmas-lemma2-instances", int, 10000, "Random instances for lemma 2 (weighted averages)."),
        ("--lemmas-lemma3-instances", int, 10000, "Random instances for lemma 3 (doubly stochastic maps)."),
        ("--lemmas-lemma4-instances", int, 10000, "Random instances for lemma 4 (joint vs marginals)."),
        ("--lemmas-max-n", int, 16, "Largest vector length / matrix side drawn. Default: 16"),
        ("--lemmas-k-terms", int, 4, "Permutations mixed into each random doubly stochastic matrix."),
        (
            "--lemmas-zero-fraction",
            float,
            0.2,
            "Probability that a lemma 2 weight is drawn as exactly 0 (exercises the 0 ln 0 limit).",
        ),
        (
            "--lemmas-transition-file",
            str,
            None,
            "Optional matrix file with a fixed doubly stochastic T used by every lemma 3 instance.",
        ),
        ("--lemmas-max-x", float, 4.0, "Lemma 1 draws x uniformly from [0, max-x)."),
    ]

    def _load_transition(self, ctx: Context) -> Optional[DoublyStochasticMatrix]:
        path = ctx.config["lemmas_transition_file"]
        if not path:
            return None
        matrix = load_matrix(path)
        if np.max(np.abs(matrix.imag)) > 0.0:
            raise MatrixFileError(path, "transition matrix must be real")
        try:
            return DoublyStochasticMatrix.from_values(matrix.real, ctx.tolerances)
        except (InvariantError, ValueError) as exc:
            raise MatrixFileError(path, str(exc)) from None

    def _samplers(self, ctx: Context, fixed_t: Optional[DoublyStochasticMatrix]) -> Dict[int, Callable[[int], LemmaSample]]:
        config = ctx.config
        seed = ctx.master_seed
        max_n = max(1, int(config["lemmas_max_n"]))

        def lemma1(i: int) -> LemmaSample:
            rng = make_stream(seed, 1, i)
            x = float(rng.uniform(0.0, config["lemmas_max_x"]))
            return LemmaSample(1, i, 1, lemma1_margin(x))

        def lemma2(i: int) -> LemmaSample:
            rng = make_stream(seed, 2, i)
            n = int(rng.integers(1, max_n + 1))
            w = rng.exponential(size=n)
            w[rng.random(n) < config["lemmas_zero_fraction"]] = 0.0
            x = random_probability_vector(n, rng)
            return LemmaSample(2, i, n, lemma2_margin(w, x))

        def lemma3(i: int) -> LemmaSample:
            rng = make_stream(seed, 3, i)
            if fixed_t is None:
                n = int(rng.integers(1, max_n + 1))
                t = random_doubly_stochastic(n, config["lemmas_k_terms"], rng)
            else:
                n, t = fixed_t.n, fixed_t
            w = random_probability_vector(n, rng)
            return LemmaSample(3, i, n, lemma3_margin(w, t, ctx.tolerances))

        def lemma4(i: int) -> LemmaSample:
            rng = make_stream(seed, 4, i)
            rows, cols = (int(v) for v in rng.integers(1, max_n + 1, size=2))
            return LemmaSample(4, i, rows * cols, lemma4_margin(random_joint((rows, cols), rng)))

        return {1: lemma1, 2: lemma2, 3: lemma3, 4: lemma4}

    def run(self, ctx: Context) -> CommandResult:
        fixed_t = self._load_transition(ctx)
        samplers = self._samplers(ctx, fixed_t)

        outputs: List[str] = []
        summary: Dict[str, dict] = {}
        worst: Optional[float] = None
        violations = 0

        for lemma, sampler in samplers.items():
            count = max(0, int(ctx.config[f"lemmas_lemma{lemma}_instances"]))
            samples = ordered_map(sampler, range(count), ctx.workers)

            outputs.append(
                write_csv(
                    ctx.out_path(f"lemma{lemma}.csv"),
                    LEMMA_CSV_HEADER,
                    ([s.lemma, s.instance, s.n, s.margin, ctx.master_seed] for s in samples),
                )
            )

            bad = [s for s in samples if s.margin < -ctx.tolerances.entropy]
            for sample in bad:
                logger.warning(f"lemma {lemma} instance {sample.instance}: margin {sample.margin:.3e} < 0")
            violations += len(bad)

            min_margin = min((s.margin for s in samples), default=None)
            if min_margin is not None:
                worst = min_margin if worst is None else min(worst, min_margin)
            summary[f"lemma{lemma}"] = {
                "instances": count,
                "min_margin": min_margin,
                "violations": len(bad),
            }
            logger.info(f"lemma {lemma}: {count} instances, min margin {min_margin}")

        outputs.append(write_json(ctx.out_path("summary.json"), summary))

        if violations:
            return CommandResult(
                EXIT_VIOLATION,
                outputs,
                worst_margin=worst,
                message=f"{violations} lemma margins below -{ctx.tolerances.entropy:g}",
            )
        return CommandResult(EXIT_OK, outputs, worst_margin=worst)
