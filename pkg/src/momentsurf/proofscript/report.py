"""Text and JSON rendering of check reports."""

from __future__ import annotations

import json


def render_report(reports, format: str = "text") -> str:
    """One line per check in text form; a JSON array of report objects otherwise.

    Each JSON object has the keys id, status, residual, elapsed_ms and
    message.  An empty sequence renders as ``[]``.
    """
    reports = list(reports)
    if format == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    lines = []
    for r in reports:
        line = f"{r.status.upper():7s} {r.id:20s} {r.elapsed_ms:10.1f} ms  {r.message}"
        if r.residual:
            line += f"\n        residual: {r.residual}"
        lines.append(line)
    return "\n".join(lines)
