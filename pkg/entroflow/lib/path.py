from __future__ import annotations

import os


def abs_expand_path(path_value: str) -> str:
    return os.path.abspath(os.path.expanduser(path_value))


def ensure_dir(path_value: str) -> str:
    """Create `path_value` (and parents) when missing and return it absolute."""
    abs_path = abs_expand_path(path_value)
    os.makedirs(abs_path, exist_ok=True)
    return abs_path
