#!/usr/bin/env python3
"""
UI display functionality for feffcheck.
"""
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pyfiglet


class Colors:
    """
    Color codes for terminal output.
    """
    _DEFAULTS = {
        'HEADER': '\033[95m',
        'BLUE': '\033[94m',
        'CYAN': '\033[96m',
        'GREEN': '\033[92m',
        'YELLOW': '\033[93m',
        'RED': '\033[91m',
        'BOLD': '\033[1m',
        'END': '\033[0m'
    }

    HEADER = _DEFAULTS['HEADER']
    BLUE = _DEFAULTS['BLUE']
    CYAN = _DEFAULTS['CYAN']
    GREEN = _DEFAULTS['GREEN']
    YELLOW = _DEFAULTS['YELLOW']
    RED = _DEFAULTS['RED']
    BOLD = _DEFAULTS['BOLD']
    END = _DEFAULTS['END']

    @classmethod
    def disable(cls):
        """Disable colors by setting all color codes to empty strings."""
        for color_name in cls._DEFAULTS:
            setattr(cls, color_name, '')

    @classmethod
    def reset_to_defaults(cls):
        """
        Reset all colors to their default values.
        """
        for color_name, color_value in cls._DEFAULTS.items():
            setattr(cls, color_name, color_value)


STATUS_COLORS = {
    "pass": "GREEN",
    "fail": "RED",
    "inconclusive": "YELLOW",
    "info": "CYAN",
}

# (label, value, status) where status is a key of STATUS_COLORS
SummaryLine = Tuple[str, Any, str]


def print_banner(font: str = "slant", stream=None) -> None:
    """
    Print the feffcheck banner with pyfiglet, falling back to plain text
    for unknown fonts.
    """
    stream = stream or sys.stderr
    try:
        art = pyfiglet.figlet_format("feffcheck", font=font)
    except pyfiglet.FontNotFound:
        art = "feffcheck\n"
    print(f"{Colors.CYAN}{art}{Colors.END}", file=stream)


def print_error(message: str) -> None:
    print(f"{Colors.RED}Error: {message}{Colors.END}", file=sys.stderr)


def print_warning(message: str) -> None:
    print(f"{Colors.YELLOW}Warning: {message}{Colors.END}", file=sys.stderr)


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def print_summary(title: str, lines: Sequence[SummaryLine], artifacts: Optional[List[str]] = None,
                  stream=None) -> None:
    """
    Print a human summary of one run.

    Args:
        title: Heading, usually the subcommand
        lines: (label, value, status) triples
        artifacts: Written file paths
        stream: Output stream (stdout by default)
    """
    stream = stream or sys.stdout
    print(f"\n{Colors.BOLD}{title}{Colors.END}", file=stream)
    print(f"{Colors.BLUE}{'─' * 60}{Colors.END}", file=stream)
    width = max((len(label) for label, _, _ in lines), default=0)
    for label, value, status in lines:
        color = getattr(Colors, STATUS_COLORS.get(status, "CYAN"))
        print(f"  {label.ljust(width)}  {color}{format_value(value)}{Colors.END}", file=stream)
    if artifacts:
        print(f"{Colors.BLUE}{'─' * 60}{Colors.END}", file=stream)
        for path in artifacts:
            print(f"  {Colors.HEADER}{path}{Colors.END}", file=stream)
    print("", file=stream)


def status(ok: Optional[bool], inconclusive: bool = False) -> str:
    """Map a check outcome to a summary status."""
    if inconclusive:
        return "inconclusive"
    if ok is None:
        return "info"
    return "pass" if ok else "fail"


def table_lines(rows: Sequence[Dict[str, Any]], label_key: str, value_key: str,
                ok_key: Optional[str] = None, label_format: str = "{}",
                inconclusive_value: Optional[Any] = None) -> List[SummaryLine]:
    """
    Summary lines for a list of row dictionaries.

    Rows whose value equals `inconclusive_value` are marked inconclusive
    regardless of `ok_key`.
    """
    out = []
    for row in rows:
        ok = row.get(ok_key) if ok_key else None
        flagged = inconclusive_value is not None and row[value_key] == inconclusive_value
        out.append((label_format.format(row[label_key]), row[value_key], status(ok, flagged)))
    return out
