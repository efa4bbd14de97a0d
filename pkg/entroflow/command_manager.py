from __future__ import annotations

import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from entroflow import __version__
from entroflow.commands.abstract_command import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATION,
    AbstractCommand,
    CommandResult,
    Context,
)
from entroflow.commands.classical import Classical
from entroflow.commands.conserve import Conserve
from entroflow.commands.cycle import Cycle
from entroflow.commands.lemmas import Lemmas
from entroflow.core.config import DEFAULT_MAX_DIM, TOLERANCE_TEMPLATE, ToleranceSet
from entroflow.lib import safe_notify
from entroflow.lib.args import Template, parse_args, setup_config_and_cli_args
from entroflow.lib.errors import ConfigInvalid, EntroflowError
from entroflow.lib.path import ensure_dir
from entroflow.lib.report import RunManifest, write_manifest

logger = logging.getLogger(__name__)

MAX_DIM_ENV = "ENTROFLOW_MAX_DIM"
DEFAULT_OUT_ROOT = "entroflow-out"

SYS_TEMPLATE: Template = [
    ("--config", str, None, "Path to the config file. Lines under [<command>] apply to that command only."),
    ("--seed", int, 0, "Master seed; every random stream of the run derives from it. Default: 0"),
    ("--out", str, None, f"Output directory. Default: ./{DEFAULT_OUT_ROOT}/<command>"),
    ("--sys-debug", bool, False, "Enable debug logging (DEBUG level). Default: false"),
    (
        "--sys-logging-format",
        str,
        "%(asctime)s [%(levelname)s] %(filename)s:%(lineno)d: %(message)s",
        "Python logging format string. Default includes time, level, file, line, message.",
    ),
    ("--sys-workers", int, 1, "Threads for independent trials. Output order never depends on it."),
    ("--sys-notify", bool, False, "Send a desktop notification when a checked property fails."),
    ("--sys-max-dim", int, None, f"Cap on the total dimension. Default: ${MAX_DIM_ENV} or {DEFAULT_MAX_DIM}"),
    ("--man", str, [], "Flag manual. Use: --man list OR --man full OR --man <name> (example: --man cycle-coupling)."),
]


def resolve_max_dim(value: Optional[int]) -> int:
    if value is None:
        raw = os.environ.get(MAX_DIM_ENV)
        if raw is None or not raw.strip():
            return DEFAULT_MAX_DIM
        try:
            value = int(raw)
        except ValueError:
            raise ConfigInvalid(f"${MAX_DIM_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigInvalid(f"Maximum dimension must be >= 1, got {value}")
    return int(value)


def _type_name(type_value: Any) -> str:
    return getattr(type_value, "__name__", str(type_value))


def man_lines(template: Template, requests: List[str]) -> List[str]:
    requested = [item.strip().lstrip("-").lower() for item in requests if item.strip()]
    if not requested:
        return ["* (missing man mode: list/full/name)"]

    if requested[0] == "list":
        return [f"* {flag} type={_type_name(typ)} default={default}" for flag, typ, default, _desc in template]

    full = requested[0] == "full"
    lines: List[str] = []
    for flag, typ, default, desc in template:
        name = flag.lstrip("-").lower()
        if full or name in requested or name.replace("-", "_") in requested:
            lines.append(f"* {flag}: {desc.strip()} (type={_type_name(typ)}, default={default})")
    return lines or [f"* (unknown arg: {', '.join(requested)})"]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class CommandManager:
    def __init__(self, commands: List[AbstractCommand]):
        self.commands: Dict[str, AbstractCommand] = {command.name: command for command in commands}

    def template_for(self, command: AbstractCommand) -> Template:
        return SYS_TEMPLATE + TOLERANCE_TEMPLATE + command.template

    def usage(self) -> str:
        lines = ["usage: entroflow <command> [--config PATH] [--seed N] [--out DIR] [flags]", "", "commands:"]
        for command in self.commands.values():
            lines.append(f"  {command.name:<10} {command.description}")
        lines.append("")
        lines.append("Flag manual: entroflow <command> --man full")
        return "\n".join(lines)

    def _fallback_out_dir(self, command: AbstractCommand, argv: List[str]) -> str:
        try:
            known, _unknown = parse_args(argv, [("--out", str, None, "")])
        except ConfigInvalid:
            known = {}
        return known.get("out") or os.path.join(DEFAULT_OUT_ROOT, command.name)

    def _configure_logging(self, config: Dict[str, Any]) -> None:
        logging.basicConfig(
            level=logging.DEBUG if config["sys_debug"] else logging.INFO,
            format=config["sys_logging_format"],
            datefmt="%Y-%m-%d %H:%M:%S",
            force=True,
        )

    def _build_context(self, command: AbstractCommand, config: Dict[str, Any]) -> Context:
        workers = int(config["sys_workers"])
        if workers < 1:
            raise ConfigInvalid(f"--sys-workers must be >= 1, got {workers}")
        out_dir = ensure_dir(config["out"] or os.path.join(DEFAULT_OUT_ROOT, command.name))
        return Context(
            config=config,
            tolerances=ToleranceSet.from_config(config),
            master_seed=int(config["seed"]),
            out_dir=out_dir,
            workers=workers,
            max_dim=resolve_max_dim(config["sys_max_dim"]),
        )

    def run(self, argv: List[str]) -> int:
        if not argv or argv[0] in ("-h", "--help", "help"):
            print(self.usage())
            return EXIT_OK if argv else EXIT_USAGE

        command = self.commands.get(argv[0])
        if command is None:
            print(f"Unknown command {argv[0]!r}\n\n{self.usage()}", file=sys.stderr)
            return EXIT_USAGE

        template = self.template_for(command)
        manifest = RunManifest(
            command=command.name,
            config_path=None,
            master_seed=0,
            tool_version=__version__,
            started_at=_now(),
        )
        out_dir: Optional[str] = None
        result = CommandResult(EXIT_USAGE)

        try:
            config = setup_config_and_cli_args(template=template, argv=argv[1:], section=command.name)
            self._configure_logging(config)

            if config["man"]:
                print("\n".join(man_lines(template, config["man"])))
                return EXIT_OK

            manifest.config_path = config["config"]
            manifest.master_seed = int(config["seed"])
            ctx = self._build_context(command, config)
            out_dir = ctx.out_dir

            logger.info(f"STARTING: {command.name} (seed {ctx.master_seed}, out {ctx.out_dir})")
            result = command.run(ctx)
            logger.info(f"END: {command.name} exit={result.exit_code}")

            if result.exit_code == EXIT_VIOLATION:
                logger.warning(f"{command.name}: {result.message} (worst margin {result.worst_margin})")
                if config["sys_notify"]:
                    safe_notify(
                        command.name,
                        f"{command.name}: {result.message or 'property violated'} "
                        f"(worst margin {result.worst_margin})",
                    )
        except ConfigInvalid as exc:
            logger.error(f"{command.name}: {exc}")
            result = CommandResult(EXIT_USAGE, message=str(exc))
        except OSError as exc:
            logger.error(f"{command.name}: I/O error: {exc}")
            result = CommandResult(EXIT_USAGE, message=str(exc))
        except EntroflowError as exc:
            logger.error(f"{command.name}: {type(exc).__name__}: {exc}")
            result = CommandResult(EXIT_VIOLATION, message=str(exc))
        except ValueError as exc:
            # plain ValueError only comes from out-of-range command arguments
            logger.error(f"{command.name}: invalid argument: {exc}")
            result = CommandResult(EXIT_USAGE, message=str(exc))
        finally:
            manifest.finished_at = _now()
            manifest.exit_code = result.exit_code
            manifest.outputs = list(result.outputs)

        try:
            target = out_dir or ensure_dir(self._fallback_out_dir(command, argv[1:]))
            write_manifest(target, manifest)
        except OSError as exc:
            logger.error(f"Cannot write manifest: {exc}")
            return EXIT_USAGE

        return result.exit_code


COMMANDS: List[AbstractCommand] = [
    Lemmas(),
    Cycle(),
    Classical(),
    Conserve(),
]


def main(argv: Optional[List[str]] = None) -> int:
    return CommandManager(COMMANDS).run(list(sys.argv[1:] if argv is None else argv))
