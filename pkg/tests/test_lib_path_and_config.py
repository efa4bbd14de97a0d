from __future__ import annotations

from pathlib import Path

import pytest

from entroflow.core.config import TOLERANCE_TEMPLATE, ToleranceSet
from entroflow.lib.args import template_defaults
from entroflow.lib.errors import ConfigInvalid
from entroflow.lib.path import abs_expand_path, ensure_dir


def test_abs_expand_path_resolves_relative(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    assert abs_expand_path("out") == str(tmp_path / "out")


def test_ensure_dir_creates_parents(tmp_path: Path) -> None:
    target = tmp_path / "a" / "b"
    assert ensure_dir(str(target)) == str(target)
    assert target.is_dir()
    ensure_dir(str(target))


def test_tolerance_template_round_trips_defaults() -> None:
    assert ToleranceSet.from_config(template_defaults(TOLERANCE_TEMPLATE)) == ToleranceSet()
    flags = [flag for flag, *_rest in TOLERANCE_TEMPLATE]
    assert "--tol-conserve" in flags and "--tol-entropy" in flags


def test_tolerance_set_rejects_non_positive() -> None:
    with pytest.raises(ConfigInvalid, match="psd"):
        ToleranceSet(psd=0.0)
