from mixedgraded import mutations
from mixedgraded.generate import GenConfig
from mixedgraded.harness import PROPERTIES, SUITES, draw, evaluate, replay, run_suite, select

import pytest


def test_every_suite_has_properties():
    assert {p.suite for p in PROPERTIES} == set(SUITES)
    assert len({p.name for p in PROPERTIES}) == len(PROPERTIES)
    with pytest.raises(ValueError):
        select("everything")


def test_adjunction_suite_passes():
    r = run_suite("adjunction", GenConfig(trials=50))
    assert r.ok, r.counterexample


@pytest.mark.parametrize("suite", SUITES)
def test_suites_pass_small(suite):
    r = run_suite(suite, GenConfig(seed=1, trials=10))
    assert r.ok, r.counterexample


def test_zero_trials():
    r = run_suite("all", GenConfig(trials=0))
    assert r.ok and r.counterexample is None
    assert all(v == {"trials": 0, "passed": 0} for v in r.properties.values())


def test_determinism():
    cfg = GenConfig(seed=9, trials=4)
    assert run_suite("filtered-laws", cfg).to_json() == run_suite("filtered-laws", cfg).to_json()


def test_tensor_sign_mutation_is_caught_and_shrunk():
    cfg = GenConfig(seed=7, trials=20)
    with mutations.inject("tensor-eps-sign"):
        r = run_suite("mixed-laws", cfg)
        assert not r.ok
        cx = r.counterexample
        assert cx["property"] == "mixed.tensor-valid"
        # the shrunk objects still fail, and are no larger than the original draw
        assert replay(cx) is not None
        prop = next(p for p in PROPERTIES if p.name == cx["property"])
        original = draw(prop, cfg, cx["trial"])
        assert evaluate(prop, original) is not None
        sizes = [len(o["payload"]["weights"]) for o in cx["objects"]]
        assert sizes <= [len(o.weights()) for o in original]
    assert replay(cx) is None


@pytest.mark.parametrize("name", sorted(mutations.KNOWN))
def test_each_mutation_is_caught(name):
    with mutations.inject(name):
        r = run_suite("all", GenConfig(seed=7, trials=20))
        assert not r.ok
        assert replay(r.counterexample) is not None


def test_report_json_shape():
    j = run_suite("core", GenConfig(trials=2)).to_json()
    assert set(j) == {"suite", "seed", "trials", "ok", "properties", "counterexample"}
