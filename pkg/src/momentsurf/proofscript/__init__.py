"""Replay of the stationarity proofs as ordered, data-driven symbolic checks."""

from .engine import CheckReport, explain_multiplier, run_check, run_script, run_theorem
from .mutation import mutate_literal, sample_mutations
from .report import render_report
from .schema import (
    MODES,
    PROCEDURES,
    THEOREMS,
    CheckSpec,
    ScriptError,
    TheoremScript,
    load_script,
    load_shipped,
    script_from_dict,
    shipped_path,
)

__all__ = [
    "CheckReport", "CheckSpec", "TheoremScript", "ScriptError",
    "MODES", "PROCEDURES", "THEOREMS",
    "run_check", "run_script", "run_theorem", "render_report", "explain_multiplier",
    "load_script", "load_shipped", "script_from_dict", "shipped_path",
    "mutate_literal", "sample_mutations",
]
