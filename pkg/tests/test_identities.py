import json

import pytest

from hermlab import hermitian as herm
from hermlab import identities as lab
from hermlab.forms import Form
from hermlab.models import catalog_model
from hermlab.scalars import gr

EXACT_CASES = ["I1", "I2", "I3", "I4", "I5", "I9", "I13", "I14", "I15", "I16", "I17", "I18", "I19", "I20", "I21"]


def run(case, model, metric="standard", trials=5, seed=0):
    m = catalog_model(model)
    return lab.run_case(case, m, herm.model_metric(m, metric), trials, seed)


@pytest.mark.parametrize("case", EXACT_CASES)
def test_exact_cases_have_zero_residual_on_iwasawa(case):
    rep = run(case, "iwasawa", "diag-1/2-3-5/3", trials=4)
    assert rep.status == "pass" and rep.exact and rep.max_residual == 0.0, rep.first_failure


@pytest.mark.parametrize("case", ["I7", "I8", "I23"])
def test_degenerate_cases_run_only_with_a_witness(case):
    assert run(case, "sl2c", "diag-1-2-3", trials=3).status == "pass"
    skipped = run(case, "iwasawa", trials=3)
    assert skipped.status == "skip" and "degenerate" in skipped.skip_reason


def test_torus_only_case_skips_on_lie_models():
    rep = run("I11", "iwasawa")
    assert rep.status == "skip" and "Fourier" in rep.skip_reason
    assert run("I11", "ftorus2", trials=3).status == "pass"


def test_lie_only_case_skips_on_fourier_torus():
    assert run("I15", "ftorus2").status == "skip"


def test_zero_trials_skip():
    rep = run("I1", "torus2", trials=0)
    assert rep.status == "skip" and rep.skip_reason == "no trials"


def test_unknown_case_and_model():
    with pytest.raises(lab.ConfigError):
        run("I99", "torus2")
    with pytest.raises(lab.ConfigError):
        lab.run_suite({"models": ["no-such-model"], "trials": 1})
    with pytest.raises(lab.ConfigError):
        lab.run_suite({"cases": ["I0"], "trials": 1})
    with pytest.raises(lab.ConfigError):
        lab.SuiteConfig.from_dict({"trails": 3})


def test_unknown_metric_is_a_config_error():
    with pytest.raises(lab.ConfigError):
        lab.run_suite({"models": ["torus2"], "metrics": {"torus2": ["nope"]}, "trials": 1, "cases": ["I1"]})


def test_suite_with_zero_trials_skips_everything():
    rep = lab.run_suite({"models": ["torus2", "sl2c"], "trials": 0})
    assert rep.passed
    assert {r.status for r in rep.reports} == {"skip"}
    assert {r.skip_reason for r in rep.reports} == {"no trials"}


def test_corrupted_manifest_fails_validation_before_cases(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "n": 3, "d": {"e1": [["1", "1,3|"]], "e3": [["1", "1,2|"]]}}))
    rep = lab.run_suite({"models": [str(path), "torus2"], "trials": 2, "cases": ["I1"]})
    assert not rep.passed
    assert rep.validation["bad"]["ok"] is False
    assert all(r.model != "bad" for r in rep.reports)
    assert rep.summary()["invalid_models"] == ["bad"]


def test_h_grid_contains_fixed_values_and_is_seeded():
    grid = lab.h_grid(0)
    assert grid[:5] == ["1", "-1", "0,1", "2", "1,1"]
    assert len(grid) == 8 and all(gr(h) != gr(0) for h in grid)
    assert lab.h_grid(0) == grid and lab.h_grid(1) != grid


def test_trial_rng_is_keyed():
    a = lab.trial_rng(0, "I1", "torus2", "standard", 3).random()
    assert a == lab.trial_rng(0, "I1", "torus2", "standard", 3).random()
    assert a != lab.trial_rng(0, "I1", "torus2", "standard", 4).random()


def test_same_seed_same_report_regardless_of_threads():
    cfg = {"models": ["torus2", "iwasawa", "ftorus2"], "trials": 3, "cases": ["I1", "I5", "I6", "I13", "I22"]}
    one = lab.run_suite(dict(cfg, threads=1)).to_json()
    four = lab.run_suite(dict(cfg, threads=4)).to_json()
    assert one == four
    assert lab.run_suite(dict(cfg, seed=1)).to_json() != one


def test_failures_are_recorded_with_a_witness():
    """A broken case body must surface as a failure carrying the offending form."""

    def broken(ctx, rng, trial):
        u = lab.random_form(ctx, rng, degree=1)
        ctx.check_equal("deliberate", ctx.model.d(u) + u, ctx.model.d(u))

    case = lab.IdentityCase("Ix", "mutation", run=broken)
    m = catalog_model("iwasawa")
    rep = lab.run_case(case, m, herm.model_metric(m, "standard"), 4)
    assert rep.status == "fail" and rep.failures > 0
    assert rep.first_failure["assertion"] == "deliberate"
    assert Form.parse(rep.first_failure["witness"], 3, "exact")


def test_report_json_is_sorted_and_stable():
    rep = lab.run_suite({"models": ["torus2"], "trials": 2, "cases": ["I1", "I2"]})
    text = rep.to_json()
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2)
    assert [r.case for r in rep.reports] == sorted((r.case for r in rep.reports), key=lambda c: int(c[1:]))
