from __future__ import annotations

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

from entroflow.core.config import ToleranceSet
from entroflow.lib.args import Template

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class Context:
    """
    Command input for one run.

    - config: resolved flags (template defaults < config file < command line)
    - tolerances: ToleranceSet built from the --tol-* flags
    - master_seed: root of every RNG stream of the run
    - out_dir: existing directory for this run's files
    - workers: thread count for independent trials
    - max_dim: cap on the total Hilbert-space dimension
    """

    config: dict
    tolerances: ToleranceSet
    master_seed: int
    out_dir: str
    workers: int = 1
    max_dim: int = 64

    def out_path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)


@dataclass
class CommandResult:
    """
    - exit_code: EXIT_OK, or EXIT_VIOLATION when a checked property failed
    - outputs: files written (manifest excluded)
    - worst_margin: most negative slack seen, for the failure report
    """

    exit_code: int
    outputs: List[str] = field(default_factory=list)
    worst_margin: Optional[float] = None
    message: str = ""


class AbstractCommand(ABC):
    """
    Base interface for every CLI command.

    - 'name': sub-command word and config section name
    - 'template': flags this command adds on top of the global ones

    Example template:
        [
            ("--cycle-n-cycles", int, 20, "Number of cycles"),
            ("--cycle-partition", int, [2, 2], "Multi-value argument"),
        ]
    """

    name: str
    description: str = ""
    template: Template = []

    @abstractmethod
    def run(self, ctx: Context) -> CommandResult:
        raise NotImplementedError
