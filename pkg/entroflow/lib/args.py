import argparse
import logging
import shlex
from typing import Any, Dict, List, Optional, Tuple

from entroflow.lib.errors import ConfigInvalid

logger = logging.getLogger(__name__)


# (flag, type, default, description). Example:
#     [
#         ("--cycle-n-cycles", int, 20, "Number of evolve/measure cycles"),
#         ("--cycle-coupling", float, 1.0, "Interaction strength"),
#         ("--cycle-partition", int, [2, 2], "Multi-value flag"),
#         ("--sys-debug", bool, False, "Switch"),
#     ]
Template = List[Tuple[str, type, Any, str]]


def flag_to_dest(flag: str) -> str:
    return flag.lstrip("-").replace("-", "_")


def template_defaults(template: Template) -> Dict[str, Any]:
    return {flag_to_dest(flag): default for flag, _typ, default, _desc in template}


def build_parser(template: Template) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False, exit_on_error=False)
    for flag, typ, default, _desc in template:
        options: Dict[str, Any] = {"dest": flag_to_dest(flag), "default": default}
        if typ is bool:
            options["action"] = "store_true"
        elif isinstance(default, list):
            options.update(type=typ, nargs="+", default=list(default))
        else:
            options["type"] = typ
        parser.add_argument(flag, **options)
    return parser


def parse_args(args: List[str], template: Template) -> Tuple[Dict[str, Any], List[str]]:
    """Parse `args` against `template`; returns (known values by dest, leftover tokens)."""
    try:
        namespace, leftover = build_parser(template).parse_known_args(args)
    except (argparse.ArgumentError, SystemExit) as exc:
        raise ConfigInvalid(f"Cannot parse arguments {args!r}: {exc}") from None
    return vars(namespace), leftover


def read_config_lines(path: str, section: Optional[str] = None) -> List[str]:
    """
    Flag tokens of a config file.

    Lines before the first "[name]" header are global. Lines under "[name]"
    are kept only when name == section.
    """
    tokens: List[str] = []
    current: Optional[str] = None

    with open(path, "r", encoding="utf-8") as file:
        for lineno, raw in enumerate(file, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if text.startswith("[") and text.endswith("]"):
                current = text[1:-1].strip()
                continue
            if current is not None and current != section:
                continue
            try:
                tokens.extend(shlex.split(text))
            except ValueError as exc:
                raise ConfigInvalid(f"{path}:{lineno}: {exc}") from None

    return tokens


def get_config_args(path: str, template: Template, section: Optional[str] = None) -> Dict[str, Any]:
    """Parse a config file with the command's template. Unknown flags are errors."""
    known, unknown = parse_args(template=template, args=read_config_lines(path, section))
    if unknown:
        raise ConfigInvalid(f"Unknown keys in {path}: {' '.join(unknown)}")
    return known


def merge_known_args(args: Dict[str, Any], overwrite_args: Dict[str, Any]) -> Dict[str, Any]:
    """
    `args` updated with every value of `overwrite_args` that was actually given.

    None and "" count as not given and leave `args` alone.
    """
    given = {key: value for key, value in overwrite_args.items() if value not in (None, "")}
    return {**args, **given}


def setup_config_and_cli_args(
    template: Template,
    argv: List[str],
    section: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Resolved flag values for one run: template default < config file < command line.

    The config file is the one named by --config; only global lines and lines
    under [section] are read. A command-line value equal to the template
    default does not override the file.
    """
    cli_args, unknown = parse_args(template=template, args=argv)
    if unknown:
        raise ConfigInvalid(f"Unknown arguments: {' '.join(unknown)}")

    config_path = cli_args.get("config")
    if not config_path:
        logger.info("No --config given, using template defaults and startup arguments")
        return cli_args

    try:
        file_args = get_config_args(path=config_path, template=template, section=section)
    except FileNotFoundError:
        raise ConfigInvalid(f"Config file {config_path} not found") from None
    except (UnicodeDecodeError, IsADirectoryError) as exc:
        raise ConfigInvalid(f"Config file {config_path} is unreadable: {exc}") from None

    defaults = template_defaults(template)
    overrides = {
        key: value
        for key, value in cli_args.items()
        if key not in defaults or value != defaults[key]
    }
    return merge_known_args(args=file_args, overwrite_args=overrides)
