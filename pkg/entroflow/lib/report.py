from __future__ import annotations

import csv
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, List, Sequence

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = ".17g"


@dataclass
class RunManifest:
    """
    Record of one command run, written next to its outputs.

    A run directory without manifest.json is treated as a failed run.
    """

    command: str
    config_path: str | None
    master_seed: int
    tool_version: str
    started_at: str
    finished_at: str = ""
    exit_code: int | None = None
    outputs: List[str] = field(default_factory=list)


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    if hasattr(value, "dtype") and getattr(value.dtype, "kind", "") == "f":
        return format(float(value), CSV_FLOAT_FORMAT)
    return str(value)


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as file:
            file.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    with open(path, "w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
            count += 1
    logger.debug(f"Wrote {count} rows to {path}")
    return path


def write_json(path: str, payload: Any) -> str:
    _atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_manifest(out_dir: str, manifest: RunManifest) -> str:
    path = os.path.join(out_dir, "manifest.json")
    write_json(path, asdict(manifest))
    logger.info(f"Manifest written: {path}")
    return path
