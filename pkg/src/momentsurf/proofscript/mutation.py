"""Single-literal mutations of expected expressions (negative controls)."""

from __future__ import annotations

import random
from dataclasses import replace

from ..symkernel.dsl import int_literals
from .schema import TheoremScript


def mutate_literal(text: str, index: int) -> str:
    """Replace the index-th integer literal n in ``text`` by n + 1."""
    offset, length = int_literals(text)[index]
    value = int(text[offset:offset + length])
    return text[:offset] + str(value + 1) + text[offset + length:]


def literal_sites(script: TheoremScript, check_ids=None):
    """All (check id, expected name, literal index) triples."""
    sites = []
    for spec in script.checks:
        if check_ids is not None and spec.id not in check_ids:
            continue
        for name, text in spec.expected.items():
            for i in range(len(int_literals(text))):
                sites.append((spec.id, name, i))
    return sites


def apply_mutation(script: TheoremScript, site) -> TheoremScript:
    cid, name, index = site
    checks = []
    for spec in script.checks:
        if spec.id == cid:
            expected = dict(spec.expected)
            expected[name] = mutate_literal(expected[name], index)
            spec = replace(spec, expected=expected)
        checks.append(spec)
    return TheoremScript(name=script.name, checks=tuple(checks))


def sample_mutations(script: TheoremScript, n: int, seed: int = 0, check_ids=None):
    """Up to n distinct mutation sites drawn with a seeded generator."""
    sites = literal_sites(script, check_ids)
    rng = random.Random(seed)
    rng.shuffle(sites)
    return sites[:n]


def _equivalent(spec, original: str, mutated: str, bindings) -> bool:
    """Whether the two expected texts are interchangeable under the check's mode."""
    from ..derivation import make_context
    from .engine import _Evaluator, explain_multiplier

    ev = _Evaluator(spec, make_context(spec.context, spec.keep), bindings, ())
    try:
        x, y = ev.eval(original), ev.eval(mutated)
    except Exception:
        return False
    if x.equals(y):
        return True
    if spec.mode == "exact" or x.is_zero() or y.is_zero():
        return False
    lam = y / x
    if spec.mode == "proportional":
        if spec.free_of:
            return not any(lam.depends_on(v) for v in spec.free_of)
        return lam.is_constant()
    factors = [ev.eval(t) for t in spec.nonzero]
    return explain_multiplier(lam, factors)[0]


def classify_mutation(script: TheoremScript, site) -> str:
    """'killed' if the mutated check stops passing, 'equivalent' if the
    mutation does not change the check's meaning, 'survived' otherwise."""
    from .engine import produced_names, run_check

    cid, name, _ = site
    mutated = apply_mutation(script, site)
    bindings, unavailable = {}, set()
    for orig, spec in zip(script.checks, mutated.checks):
        rep = run_check(spec, bindings, unavailable)
        if spec.id == cid:
            if rep.status != "pass":
                return "killed"
            if _equivalent(spec, orig.expected[name], spec.expected[name], bindings):
                return "equivalent"
            return "survived"
        if rep.status in ("pass", "fail"):
            bindings.update(rep.outputs)
        else:
            unavailable.update(produced_names(spec))
    raise KeyError(cid)
