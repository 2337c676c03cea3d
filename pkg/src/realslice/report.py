"""Versioned JSON report documents.

A report is a dict with sorted keys.  Every exact number is written as a
string (``"1/2"``) so it survives the round trip.  Wall-clock timings live
under ``"timings"`` and are the only part allowed to differ between two runs
with the same inputs and seed; :func:`payload` strips them.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import RealSliceError

SCHEMA = "realslice.report/1"


def new_report(command: str, inputs: dict[str, Any]) -> dict[str, Any]:
    return {"schema": SCHEMA, "command": command, "inputs": inputs, "timings": {}}


def attach_error(report: dict[str, Any], exc: RealSliceError) -> dict[str, Any]:
    report["error"] = exc.to_dict()
    report["exit_code"] = exc.exit_code
    return report


def payload(report: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in report.items() if k != "timings"}


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
