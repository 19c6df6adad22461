"""Check-script files: loading and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from ..derivation import ContextKind
from ..symkernel.poly import VAR_INDEX

SCHEMA_VERSION = 1

THEOREMS = ("t1-nonzero", "t1-zero", "t22", "t3")

PROCEDURES = (
    "derive_and_compare",
    "substitute_and_compare",
    "solve2x2_and_compare",
    "collect_and_compare",
    "equate_two_expressions",
    "solve_and_compare",
    "coefficients_and_compare",
    "record",
)

MODES = ("exact", "proportional", "equation", "polynomial")

_REQUIRED = {"id", "context", "procedure", "inputs", "expected", "notes"}
_OPTIONAL = {
    "keep",
    "direction",
    "substitute",
    "solve_for",
    "mode",
    "free_of",
    "nonzero",
    "var",
    "monomials",
    "outputs",
}


class ScriptError(ValueError):
    """A check script does not match the schema."""


@dataclass(frozen=True)
class CheckSpec:
    id: str
    context: ContextKind
    procedure: str
    inputs: Mapping[str, str]
    expected: Mapping[str, str]
    notes: str
    keep: tuple = ()
    direction: Any = None
    substitute: Mapping[str, str] = field(default_factory=dict)
    solve_for: Mapping[str, str] = field(default_factory=dict)
    mode: str = "exact"
    free_of: tuple = ()
    nonzero: tuple = ()
    var: str | None = None
    monomials: Mapping[str, str] = field(default_factory=dict)
    outputs: tuple = ()

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "context": self.context.value,
            "procedure": self.procedure,
            "inputs": dict(self.inputs),
            "expected": dict(self.expected),
            "notes": self.notes,
        }
        if self.keep:
            out["keep"] = list(self.keep)
        if self.direction is not None:
            out["direction"] = self.direction
        if self.substitute:
            out["substitute"] = dict(self.substitute)
        if self.solve_for:
            out["solve_for"] = dict(self.solve_for)
        if self.mode != "exact":
            out["mode"] = self.mode
        if self.free_of:
            out["free_of"] = list(self.free_of)
        if self.nonzero:
            out["nonzero"] = list(self.nonzero)
        if self.var is not None:
            out["var"] = self.var
        if self.monomials:
            out["monomials"] = dict(self.monomials)
        if self.outputs:
            out["outputs"] = list(self.outputs)
        return out


@dataclass(frozen=True)
class TheoremScript:
    name: str
    checks: tuple

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "checks": [c.to_dict() for c in self.checks],
        }


def _str_map(raw, what: str, cid: str) -> dict:
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise ScriptError(f"check {cid}: {what} must map names to DSL strings")
    return dict(raw)


def _check_from_dict(raw: Mapping) -> CheckSpec:
    if not isinstance(raw, dict):
        raise ScriptError("each check must be an object")
    cid = raw.get("id", "?")
    missing = _REQUIRED - set(raw)
    if missing:
        raise ScriptError(f"check {cid}: missing fields {sorted(missing)}")
    unknown = set(raw) - _REQUIRED - _OPTIONAL
    if unknown:
        raise ScriptError(f"check {cid}: unknown fields {sorted(unknown)}")
    if not isinstance(cid, str) or not cid:
        raise ScriptError("check id must be a non-empty string")
    try:
        context = ContextKind(raw["context"])
    except ValueError:
        raise ScriptError(f"check {cid}: unknown context {raw['context']!r}") from None
    procedure = raw["procedure"]
    if procedure not in PROCEDURES:
        raise ScriptError(f"check {cid}: unknown procedure {procedure!r}")
    mode = raw.get("mode", "polynomial" if procedure == "collect_and_compare" else "exact")
    if mode not in MODES:
        raise ScriptError(f"check {cid}: unknown mode {mode!r}")
    if mode == "polynomial" and not raw.get("var"):
        raise ScriptError(f"check {cid}: polynomial mode needs 'var'")
    if procedure == "solve2x2_and_compare":
        need = {"p1", "q1", "r1", "p2", "q2", "r2"}
        if set(raw["inputs"]) != need:
            raise ScriptError(f"check {cid}: solve2x2 inputs must be exactly {sorted(need)}")
        if len(raw.get("outputs", ())) != 2:
            raise ScriptError(f"check {cid}: solve2x2 needs two output names")
    if procedure == "coefficients_and_compare" and not raw.get("monomials"):
        raise ScriptError(f"check {cid}: coefficients_and_compare needs 'monomials'")
    if procedure == "equate_two_expressions":
        if set(raw["inputs"]) != {"lhs", "rhs"} or len(raw.get("outputs", ())) != 1:
            raise ScriptError(f"check {cid}: equate_two_expressions takes lhs, rhs and one output")
    if not isinstance(raw["notes"], str):
        raise ScriptError(f"check {cid}: notes must be text")
    if procedure in ("solve2x2_and_compare", "equate_two_expressions"):
        produced = list(raw.get("outputs", ()))
    elif procedure == "coefficients_and_compare":
        produced = list(raw["monomials"])
    else:
        produced = list(raw["inputs"])
    reserved = set(VAR_INDEX) | {"D1", "D2", "coeff", "gauss"}
    for name in produced:
        if not isinstance(name, str) or not name.isidentifier() or name in reserved:
            raise ScriptError(f"check {cid}: {name!r} cannot name an output")
    if procedure != "record" and not raw["expected"]:
        raise ScriptError(f"check {cid}: nothing to compare")
    direction = raw.get("direction")
    if direction is not None and not (
        direction in (1, 2)
        or (isinstance(direction, dict) and all(v in (1, 2) for v in direction.values()))
    ):
        raise ScriptError(f"check {cid}: direction must be 1, 2 or a map of them")
    return CheckSpec(
        id=cid,
        context=context,
        procedure=procedure,
        inputs=_str_map(raw["inputs"], "inputs", cid),
        expected=_str_map(raw["expected"], "expected", cid),
        notes=raw["notes"],
        keep=tuple(raw.get("keep", ())),
        direction=direction,
        substitute=_str_map(raw.get("substitute", {}), "substitute", cid),
        solve_for=_str_map(raw.get("solve_for", {}), "solve_for", cid),
        mode=mode,
        free_of=tuple(raw.get("free_of", ())),
        nonzero=tuple(raw.get("nonzero", ())),
        var=raw.get("var"),
        monomials=_str_map(raw.get("monomials", {}), "monomials", cid),
        outputs=tuple(raw.get("outputs", ())),
    )


def script_from_dict(raw: Mapping) -> TheoremScript:
    if not isinstance(raw, dict):
        raise ScriptError("script must be a JSON object")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ScriptError(f"unsupported schema version {raw.get('schema')!r}")
    name = raw.get("name")
    if name not in THEOREMS:
        raise ScriptError(f"unknown theorem name {name!r}")
    checks = raw.get("checks")
    if not isinstance(checks, list):
        raise ScriptError("'checks' must be a list")
    specs = tuple(_check_from_dict(c) for c in checks)
    ids = [c.id for c in specs]
    if len(set(ids)) != len(ids):
        raise ScriptError("check ids must be unique")
    return TheoremScript(name=name, checks=specs)


def load_script(path) -> TheoremScript:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScriptError(f"cannot read {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScriptError(f"{path}: invalid JSON ({exc})") from None
    return script_from_dict(raw)


def shipped_path(name: str) -> Path:
    if name not in THEOREMS:
        raise ScriptError(f"unknown theorem name {name!r}")
    return Path(str(resources.files(__package__).joinpath("scripts").joinpath(f"{name}.json")))


def load_shipped(name: str) -> TheoremScript:
    return load_script(shipped_path(name))
