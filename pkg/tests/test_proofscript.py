"""Check scripts: schema, engine, comparison modes, reports, mutations."""

import json

import pytest

from momentsurf.proofscript import (
    CheckReport,
    ScriptError,
    THEOREMS,
    explain_multiplier,
    load_shipped,
    mutate_literal,
    render_report,
    run_check,
    run_script,
    run_theorem,
    sample_mutations,
    script_from_dict,
)
from momentsurf.proofscript.mutation import classify_mutation, literal_sites
from momentsurf.symkernel import parse_ratio

import sympy as sp

from oracles import same, to_sympy

R = parse_ratio


def check(**fields):
    base = {"id": "c", "context": "K_NONZERO_OPEN", "procedure": "substitute_and_compare",
            "inputs": {}, "expected": {}, "notes": "test"}
    base.update(fields)
    return base


def script(*checks, name="t3"):
    return script_from_dict({"schema": 1, "name": name, "checks": list(checks)})


def statuses(reports):
    return {r.id: r.status for r in reports}


# -- schema ----------------------------------------------------------------------------


def test_shipped_scripts_load():
    for name in THEOREMS:
        s = load_shipped(name)
        assert s.name == name and s.checks


@pytest.mark.parametrize("bad", [
    {"procedure": "guess"},
    {"context": "NOWHERE"},
    {"mode": "vibes"},
    {"expected": {}},
    {"inputs": {"k": "k"}, "expected": {"k": "k"}},
    {"inputs": {"x y": "k"}, "expected": {"x y": "k"}},
    {"surprise": 1},
])
def test_schema_rejects(bad):
    with pytest.raises(ScriptError):
        script(check(**{"inputs": {"x": "k"}, "expected": {"x": "k"}, **bad}))


def test_schema_requires_fields():
    raw = check(inputs={"x": "k"}, expected={"x": "k"})
    del raw["notes"]
    with pytest.raises(ScriptError):
        script(raw)


def test_solve2x2_schema():
    with pytest.raises(ScriptError):
        script(check(procedure="solve2x2_and_compare", inputs={"p1": "1"}, outputs=["x", "y"],
                     expected={"x": "1"}))


def test_schema_rejects_duplicate_ids_and_wrong_version():
    c = check(inputs={"x": "k"}, expected={"x": "k"})
    with pytest.raises(ScriptError):
        script(c, c)
    with pytest.raises(ScriptError):
        script_from_dict({"schema": 2, "name": "t3", "checks": [c]})


# -- engine: single checks -------------------------------------------------------------


def test_exact_pass_and_binding():
    rep = run_check(script_from_dict({"schema": 1, "name": "t3", "checks": [
        check(inputs={"gap": "k - kappa2"}, expected={"gap": "(k^2-K)/k"})]}).checks[0])
    assert rep.status == "pass" and rep.residual == ""
    assert rep.outputs["gap"].equals(R("(k^2-K)/k"))


def test_negative_control_perturbed_coefficient():
    good = script(check(inputs={"x": "3*kappa2*k"}, expected={"x": "3*K"}))
    bad = script(check(inputs={"x": "3*kappa2*k"}, expected={"x": "4*K"}))
    assert run_script(good)[0].status == "pass"
    rep = run_script(bad)[0]
    assert rep.status == "fail" and rep.residual


def test_unknown_reference_is_an_error():
    rep = run_script(script(check(inputs={"x": "later + k"}, expected={"x": "k"})))[0]
    assert rep.status == "error"


def test_dag_discipline_and_skips():
    s = script(
        check(id="first", inputs={"x": "later"}, expected={"x": "k"}),
        check(id="later_def", inputs={"later": "k"}, expected={"later": "k"}),
        check(id="uses_x", inputs={"y": "x*2"}, expected={"y": "2*k"}),
    )
    st = statuses(run_script(s))
    assert st == {"first": "error", "later_def": "pass", "uses_x": "skipped"}


def test_failed_checks_bind_computed_values():
    s = script(
        check(id="one", inputs={"x": "2*k"}, expected={"x": "3*k"}),
        check(id="two", inputs={"y": "x"}, expected={"y": "2*k"}),
    )
    assert statuses(run_script(s)) == {"one": "fail", "two": "pass"}


def test_proportional_mode():
    s = script(check(inputs={"x": "5*w*(k^2 - K)"}, expected={"x": "k^2 - K"}, mode="proportional",
                     free_of=["k"]))
    assert run_script(s)[0].status == "pass"
    s = script(check(inputs={"x": "5*k*(k^2 - K)"}, expected={"x": "k^2 - K"}, mode="proportional",
                     free_of=["k"]))
    assert run_script(s)[0].status == "fail"


def test_equation_mode_uses_declared_factors():
    s = script(check(inputs={"x": "(a+2)*w*(k - K)"}, expected={"x": "k - K"}, mode="equation",
                     nonzero=["a+2", "w"]))
    assert run_script(s)[0].status == "pass"
    s = script(check(inputs={"x": "(a+3)*w*(k - K)"}, expected={"x": "k - K"}, mode="equation",
                     nonzero=["a+2", "w"]))
    rep = run_script(s)[0]
    assert rep.status == "fail" and "a + 3" in rep.residual


def test_polynomial_mode_requires_constant_coefficient():
    ok = check(procedure="collect_and_compare", inputs={"x": "(k^2 + K)*w"}, expected={"x": "k^2 + K"},
               var="k", nonzero=["w"])
    assert run_script(script(ok))[0].status == "pass"
    # every coefficient involves w, which is not a constant symbol
    bad = check(procedure="collect_and_compare", inputs={"x": "k^2*w + w"}, expected={"x": "k^2*w + w"},
                var="k")
    assert run_script(script(bad))[0].status == "fail"


def test_solve_and_coefficients_procedures():
    s = script(
        check(id="sol", procedure="solve_and_compare", inputs={"x": "w*k - a"}, solve_for={"x": "w"},
              expected={"x": "a/k"}),
        check(id="co", procedure="coefficients_and_compare", inputs={"f": "3*p^2 + k*q^2 + K"},
              monomials={"A": "p^2", "B": "q^2", "C": "1"}, expected={"A": "3", "B": "k", "C": "K"}),
        check(id="s22", procedure="solve2x2_and_compare",
              inputs={"p1": "1", "q1": "1", "r1": "-2", "p2": "1", "q2": "-1", "r2": "0"},
              outputs=["X", "Y"], expected={"X": "1", "Y": "1"}),
        check(id="eq", procedure="equate_two_expressions", inputs={"lhs": "X + A", "rhs": "C"},
              outputs=["gap"], expected={"gap": "4 - K"}),
    )
    assert set(statuses(run_script(s)).values()) == {"pass"}


def test_explain_multiplier():
    ok, desc, rest = explain_multiplier(R("-3/(a*w*(k^2-K))"), [R("a"), R("w"), R("k^2-K")])
    assert ok and rest.is_constant()
    assert "(k^2 - K)^-1" in desc or "(k^2 - K)" in desc
    ok, _, rest = explain_multiplier(R("(k+1)/a"), [R("a")])
    assert not ok and rest.equals(R("k+1"))


# -- shipped theorems --------------------------------------------------------------------


def test_t1_zero_all_pass():
    reps = run_theorem("t1-zero")
    assert len(reps) == 5 and all(r.status == "pass" for r in reps)
    gap = [r for r in reps if r.id == "contradiction"][0]
    assert gap.outputs["flat_gap"].equals(R("-2*k/w"))


def test_t3_all_pass():
    reps = run_theorem("t3")
    assert [r.status for r in reps] == ["pass", "pass"]


def test_t22_fails_exactly_at_misprints():
    st = statuses(run_theorem("t22"))
    assert {i for i, s in st.items() if s != "pass"} == {"e2mu_structure", "am4_final", "deg2"}
    assert st["E3"] == "pass"


def test_t22_misprint_diagnostics():
    reps = {r.id: r for r in run_theorem("t22")}
    # the printed e2(mu) premise misses an overall factor c in the w term
    assert reps["e2mu_structure"].outputs["e2mu_rhs"].equals(R("1 + (k*c + c^2)*w/a"))
    # the alpha = -4 branch yields c(c-1) = 0, not kappa1 - c + 1 = 0
    assert "(c - 1)/((k - c + 1))" in reps["am4_final"].residual
    # the final relation is linear in kappa1
    assert "3*k*c*a + 8*k*c - 2*k - 2*c^2*a - 4*c^2 - c*a - 2*c" in reps["deg2"].residual


def test_t1_nonzero_fails_exactly_at_misprints():
    st = statuses(run_theorem("t1-nonzero"))
    assert {i for i, s in st.items() if s != "pass"} == {"pe2", "E2", "M2", "M3"}
    for cid in ("d7", "pe1", "det", "deg10", "deg8", "am4_final", "efinal", "w_coefficient"):
        assert st[cid] == "pass", cid


def test_t1_nonzero_misprint_diagnostics():
    reps = {r.id: r for r in run_theorem("t1-nonzero")}
    assert "computed/expected = (1)/(K)" in reps["E2"].message
    assert "computed/expected = (1)/(K)" in reps["M2"].message
    assert "not proportional" in reps["pe2"].message


def test_sign_flipped_p1_fails_at_pe1(tmp_path):
    raw = json.loads(json.dumps(load_shipped("t1-nonzero").to_dict()))
    for c in raw["checks"]:
        if c["id"] == "pe1":
            c["expected"]["P1"] = "-(" + c["expected"]["P1"] + ")"
    path = tmp_path / "flipped.json"
    path.write_text(json.dumps(raw))
    st = statuses(run_theorem("t1-nonzero", path))
    assert st["pe1"] == "fail"


def test_run_theorem_rejects_mismatched_script(tmp_path):
    path = tmp_path / "t3.json"
    path.write_text(json.dumps(load_shipped("t3").to_dict()))
    with pytest.raises(ScriptError):
        run_theorem("t22", path)


def test_determinant_identity_against_sympy():
    reps = {r.id: r for r in run_theorem("t1-nonzero")}
    b = {**reps["pe1"].outputs, **reps["pe2"].outputs}
    P1, Q1, P2, Q2 = (to_sympy(b[n]) for n in ("P1", "Q1", "P2", "Q2"))
    k, K, a = sp.symbols("k K a")
    want = 4 * a * (16 - a ** 2) * K ** 2 * (k ** 2 - K) ** 4 / (((a + 2) * k ** 2 + 2 * K) ** 2
                                                           * (2 * k ** 2 + (a + 2) * K) ** 2)
    assert same(P1 * Q2 - P2 * Q1, want)


def test_determinism_modulo_elapsed():
    def strip(reports):
        return [{k: v for k, v in r.to_dict().items() if k != "elapsed_ms"} for r in reports]

    assert strip(run_theorem("t22")) == strip(run_theorem("t22"))


# -- reports -----------------------------------------------------------------------------


def test_render_report_examples():
    assert json.loads(render_report([], "json")) == []
    one = json.loads(render_report([CheckReport("x", "pass", "", 1.0, "ok")], "json"))
    assert one == [{"id": "x", "status": "pass", "residual": "", "elapsed_ms": 1.0, "message": "ok"}]
    bad = json.loads(render_report([CheckReport("x", "fail", "k - 1", 1.0, "differs")], "json"))
    assert bad[0]["residual"] == "k - 1"
    text = render_report([CheckReport("x", "fail", "k - 1", 1.0, "differs")])
    assert text.startswith("FAIL") and "residual: k - 1" in text
    with pytest.raises(ValueError):
        render_report([], "xml")


# -- mutations ---------------------------------------------------------------------------


def test_mutate_literal():
    assert mutate_literal("3*k^2 - 12", 0) == "4*k^2 - 12"
    assert mutate_literal("3*k^2 - 12", 1) == "3*k^3 - 12"
    assert mutate_literal("3*k^2 - 12", 2) == "3*k^2 - 13"


def test_sample_mutations_is_seeded():
    s = load_shipped("t22")
    assert sample_mutations(s, 10, seed=3) == sample_mutations(s, 10, seed=3)
    assert len(set(sample_mutations(s, 10, seed=3))) == 10


@pytest.mark.parametrize("name", ["t1-zero", "t3", "t22"])
def test_every_literal_mutation_of_passing_checks_is_killed(name):
    s = load_shipped(name)
    passing = [r.id for r in run_script(s) if r.status == "pass"]
    for site in literal_sites(s, passing):
        assert classify_mutation(s, site) == "killed", site
