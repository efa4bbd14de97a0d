from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Any, Dict

from entroflow.lib.args import Template
from entroflow.lib.errors import ConfigInvalid

K_B_NATURAL: float = 1.0
K_B_SI: float = 1.380649e-23  # J/K

DEFAULT_MAX_DIM: int = 64


@dataclass(frozen=True)
class ToleranceSet:
    """
    Numerical tolerances for double precision and dim <= 64.

    These are engineering choices, not physical constants.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    unitary: float = 1e-10
    psd: float = 1e-9
    spec: float = 1e-9
    conserve: float = 1e-9
    entropy: float = 1e-9

    def __post_init__(self) -> None:
        for tol_field in fields(self):
            value = getattr(self, tol_field.name)
            if not value > 0.0:
                raise ConfigInvalid(f"Tolerance {tol_field.name} must be positive, got {value}")

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "ToleranceSet":
        return cls(**{f.name: float(config[f"tol_{f.name}"]) for f in fields(cls)})


DEFAULT_TOLERANCES = ToleranceSet()

TOLERANCE_TEMPLATE: Template = [
    (
        f"--tol-{tol_field.name}",
        float,
        tol_field.default,
        f"Tolerance '{tol_field.name}'. Default: {tol_field.default:g}",
    )
    for tol_field in fields(ToleranceSet)
]
