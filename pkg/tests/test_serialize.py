import random

import pytest
import yaml

from algebroids import lie
from algebroids.forms import FormSpace, endo_values, kernel_values, scalar_values
from algebroids.sampling import rand_mixed
from algebroids.scenario import ScenarioError, corpus_paths, load_scenario, parse_scenario
from algebroids.serialize import (
    RecordError,
    form_from_records,
    form_to_record,
    lie_algebra_from_record,
    lie_algebra_to_record,
)

SL2 = lie.make_sl(2)


@pytest.mark.parametrize("alg", [SL2, lie.make_heisenberg(), lie.make_sl(3)], ids=["sl2", "heis", "sl3"])
def test_lie_algebra_round_trip(alg):
    rec = yaml.safe_load(yaml.safe_dump(lie_algebra_to_record(alg)))
    back = lie_algebra_from_record(rec)
    assert back.structure_constants == alg.structure_constants
    assert back.matrix_basis == alg.matrix_basis


def test_structure_constants_are_one_based():
    rec = lie_algebra_to_record(SL2)
    assert [1, 2, 2, "2/1"] in rec["structure_constants"]


@pytest.mark.parametrize("kind", ["scalar", "kernel", "endo"])
def test_form_round_trip(kind):
    values = {"scalar": scalar_values(SL2), "kernel": kernel_values(SL2), "endo": endo_values(lie.defining_rep(SL2))}
    sp = FormSpace(2, values[kind])
    rng = random.Random(kind)
    for deg in range(4):
        w = rand_mixed(rng, sp, deg)
        rec = yaml.safe_load(yaml.safe_dump(form_to_record(w)))
        assert form_from_records(sp, rec["components"], "w", degree=deg) == w


def test_record_errors_carry_paths():
    sp = FormSpace(2, kernel_values(SL2))
    with pytest.raises(RecordError, match=r"w\[0\]: leg index"):
        form_from_records(sp, [{"I": [3], "value": ["0", "0", "0"]}], "w")
    with pytest.raises(RecordError, match=r"w\[0\].value\[1\]"):
        form_from_records(sp, [{"I": [1], "value": ["0", "x9", "0"]}], "w")
    with pytest.raises(RecordError, match="dim"):
        lie_algebra_from_record({})


def test_every_corpus_scenario_parses():
    paths = corpus_paths()
    assert len(paths) >= 10
    for p in paths:
        sc = load_scenario(p)
        assert sc.checks


def test_scenario_errors():
    with pytest.raises(ScenarioError, match="unknown check"):
        parse_scenario({"checks": ["nope"]})
    with pytest.raises(ScenarioError, match="non-empty"):
        parse_scenario({"checks": []})
    with pytest.raises(ScenarioError, match="unknown algebra"):
        parse_scenario({"lie_algebra": "e8", "checks": ["jacobi"]})
    with pytest.raises(ScenarioError, match="only dx"):
        parse_scenario({"checks": ["jacobi"], "potential": [{"J": [1], "value": ["1", "0", "0"]}]})
    with pytest.raises(ScenarioError, match="malformed"):
        parse_scenario({"checks": ["jacobi"], "samples": "many"})


def test_yaml_error_reports_location(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("name: x\nchecks: [jacobi\n")
    with pytest.raises(ScenarioError, match=r"bad.yaml:\d+:\d+: YAML parse error"):
        load_scenario(p)
