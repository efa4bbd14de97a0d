from __future__ import annotations

import json
from pathlib import Path

import pytest

import entroflow.command_manager as command_manager_mod
from entroflow.command_manager import CommandManager, man_lines, resolve_max_dim
from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.lib.errors import ConfigInvalid, ConvergenceFailure


class _Ok(AbstractCommand):
    name = "ok"
    template = [("--ok-count", int, 1, "How many.")]

    def __init__(self):
        self.contexts: list[Context] = []

    def run(self, ctx: Context) -> CommandResult:
        self.contexts.append(ctx)
        path = ctx.out_path("ok.txt")
        Path(path).write_text(str(ctx.config["ok_count"]), encoding="utf-8")
        return CommandResult(EXIT_OK, [path])


class _Violating(AbstractCommand):
    name = "bad"

    def run(self, ctx: Context) -> CommandResult:
        return CommandResult(EXIT_VIOLATION, worst_margin=-0.5, message="margin negative")


class _Crashing(AbstractCommand):
    name = "crash"

    def run(self, ctx: Context) -> CommandResult:
        raise ConvergenceFailure("eigensolver gave up")


def _manifest(out: Path) -> dict:
    return json.loads((out / "manifest.json").read_text(encoding="utf-8"))


def test_run_builds_context_and_writes_manifest(tmp_path: Path):
    ok = _Ok()
    out = tmp_path / "ok"

    code = CommandManager([ok]).run(["ok", "--out", str(out), "--seed", "4", "--ok-count", "3", "--tol-entropy", "1e-7"])

    assert code == 0
    ctx = ok.contexts[0]
    assert ctx.master_seed == 4
    assert ctx.tolerances.entropy == 1e-7
    assert ctx.max_dim == 64
    assert (out / "ok.txt").read_text(encoding="utf-8") == "3"

    manifest = _manifest(out)
    assert manifest["command"] == "ok"
    assert manifest["master_seed"] == 4
    assert manifest["exit_code"] == 0
    assert manifest["outputs"] == [str(out / "ok.txt")]
    assert manifest["started_at"] <= manifest["finished_at"]


def test_config_sections_apply_to_their_command(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("--seed 9\n[ok]\n--ok-count 7\n[other]\n--other-flag 1\n", encoding="utf-8")
    ok = _Ok()

    assert CommandManager([ok]).run(["ok", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert ok.contexts[0].master_seed == 9
    assert ok.contexts[0].config["ok_count"] == 7


def test_unknown_config_key_exits_2(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[ok]\n--ok-cuont 7\n", encoding="utf-8")
    out = tmp_path / "o"

    assert CommandManager([_Ok()]).run(["ok", "--config", str(cfg), "--out", str(out)]) == 2
    assert _manifest(out)["exit_code"] == 2


def test_usage_errors():
    manager = CommandManager([_Ok()])
    assert manager.run([]) == 2
    assert manager.run(["nope"]) == 2
    assert manager.run(["--help"]) == 0


def test_violation_exits_1_and_notifies(tmp_path: Path, monkeypatch):
    calls: list[tuple[str, str]] = []
    monkeypatch.setattr(command_manager_mod, "safe_notify", lambda name, message: calls.append((name, message)))
    manager = CommandManager([_Violating()])

    assert manager.run(["bad", "--out", str(tmp_path / "a")]) == 1
    assert calls == []

    assert manager.run(["bad", "--out", str(tmp_path / "b"), "--sys-notify"]) == 1
    assert calls[0][0] == "bad"
    assert "margin negative" in calls[0][1]


def test_numeric_failure_exits_1_with_manifest(tmp_path: Path):
    out = tmp_path / "crash"
    assert CommandManager([_Crashing()]).run(["crash", "--out", str(out)]) == 1
    assert _manifest(out)["exit_code"] == 1


def test_bad_workers_and_tolerances_exit_2(tmp_path: Path):
    manager = CommandManager([_Ok()])
    assert manager.run(["ok", "--out", str(tmp_path / "a"), "--sys-workers", "0"]) == 2
    assert manager.run(["ok", "--out", str(tmp_path / "b"), "--tol-psd", "-1"]) == 2


def test_man_prints_flags(capsys):
    manager = CommandManager([_Ok()])
    assert manager.run(["ok", "--man", "ok-count"]) == 0
    assert "--ok-count: How many." in capsys.readouterr().out


def test_man_lines_modes():
    template = [("--a-b", int, 1, "First."), ("--c", str, None, "Second.")]
    assert man_lines(template, ["list"]) == ["* --a-b type=int default=1", "* --c type=str default=None"]
    assert len(man_lines(template, ["full"])) == 2
    assert man_lines(template, ["a_b"]) == ["* --a-b: First. (type=int, default=1)"]
    assert man_lines(template, ["zzz"]) == ["* (unknown arg: zzz)"]


def test_resolve_max_dim(monkeypatch):
    monkeypatch.delenv("ENTROFLOW_MAX_DIM", raising=False)
    assert resolve_max_dim(None) == 64
    assert resolve_max_dim(16) == 16

    monkeypatch.setenv("ENTROFLOW_MAX_DIM", "32")
    assert resolve_max_dim(None) == 32

    with pytest.raises(ConfigInvalid):
        resolve_max_dim(0)
