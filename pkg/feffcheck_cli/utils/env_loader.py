#!/usr/bin/env python3
"""
Environment lookups for feffcheck.

A key is looked up in the OS environment first, then in a `.env` file at
the project root, then falls back to the caller's default.
"""
import os
from pathlib import Path
from typing import Any, Dict, Optional

DEFAULT_VERSION = "0.3.0"
DEFAULT_THREADS = 1

_ROOT_MARKERS = (".env", "pyproject.toml")
_MAX_ROOT_DEPTH = 5


def get_project_root() -> Path:
    """Nearest ancestor of this package holding a `.env` or `pyproject.toml`."""
    here = Path(__file__).resolve().parent
    for candidate in [here, *here.parents][:_MAX_ROOT_DEPTH]:
        if any((candidate / marker).exists() for marker in _ROOT_MARKERS):
            return candidate
    return here.parent.parent


def _parse_env_line(line: str) -> Optional[tuple]:
    line = line.strip()
    if not line or line.startswith("#") or "=" not in line:
        return None
    if line.startswith("export "):
        line = line[len("export "):]
    key, _, value = line.partition("=")
    key = key.strip()
    if not key.replace("_", "").isalnum():
        return None
    return key, value.strip().strip("'\"")


def load_env_file(env_path: Optional[Path] = None) -> Dict[str, str]:
    """
    Read `KEY=value` pairs from a .env file.

    Blank lines, comments and malformed keys are skipped; a missing file
    gives an empty mapping.
    """
    path = env_path or get_project_root() / ".env"
    if not path.is_file():
        return {}
    pairs = (_parse_env_line(raw) for raw in path.read_text().splitlines())
    return dict(pair for pair in pairs if pair is not None)


_env_vars = load_env_file()


def get_env(key: str, default: Any = None) -> Any:
    value = os.environ.get(key)
    if value is None:
        value = _env_vars.get(key, default)
    return value


def get_version() -> str:
    return get_env("FEFFCHECK_VERSION", DEFAULT_VERSION)


def get_thread_cap() -> int:
    """Worker cap from HG_THREADS, never below 1."""
    try:
        return max(1, int(get_env("HG_THREADS", DEFAULT_THREADS)))
    except (TypeError, ValueError):
        return DEFAULT_THREADS
