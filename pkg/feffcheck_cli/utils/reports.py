"""
JSON reports and CSV curve tables.

Reports embed the resolved configuration and the tool version. Curves
use the columns (r, value, divergent_flag, error_estimate) with floats
written as '%.17g', so identical runs give byte-identical files.
"""
import csv
import json
import logging
import math
import os
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping

import numpy as np

from ..config.constants import CSV_COLUMNS, VERSION

logger = logging.getLogger(__name__)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def report_document(subcommand: str, report: Mapping[str, Any], config: Mapping[str, Any]) -> Dict[str, Any]:
    return {
        "tool": "feffcheck",
        "version": VERSION,
        "subcommand": subcommand,
        "config": config,
        "report": report,
    }


def write_report(out_dir: str, subcommand: str, report: Mapping[str, Any],
                 config: Mapping[str, Any]) -> str:
    """
    Write `<out_dir>/<subcommand>.json`.

    Returns:
        Path of the written file
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{subcommand}.json")
    with open(path, "w") as f:
        json.dump(report_document(subcommand, report, config), f, indent=2, sort_keys=True,
                  default=_json_default)
        f.write("\n")
    logger.info("wrote %s", path)
    return path


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if value is None:
        return "nan"
    number = float(value)
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return "%.17g" % number


def write_curve(out_dir: str, name: str, rows: Iterable[Mapping[str, Any]]) -> str:
    """
    Write one curve table `<out_dir>/<name>.csv`.

    Args:
        out_dir: Output directory
        name: Curve name (file stem)
        rows: Mappings with the keys of CSV_COLUMNS

    Returns:
        Path of the written file
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name}.csv")
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row.get(column)) for column in CSV_COLUMNS])
    return path


def write_curves(out_dir: str, curves: Mapping[str, List[Mapping[str, Any]]]) -> List[str]:
    """Write every curve in name order."""
    return [write_curve(out_dir, name, curves[name]) for name in sorted(curves)]
