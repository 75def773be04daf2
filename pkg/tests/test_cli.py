import json
from pathlib import Path

import pytest
import yaml

from algebroids.checks import REGISTRY
from algebroids.cli import main
from algebroids.scenario import corpus_dir, corpus_paths, load_scenario

FIXTURES = Path(__file__).parent / "fixtures"
SMALL = str(corpus_dir() / "sl2_basic.yaml")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_text_report(capsys):
    code, out, _ = run(capsys, "run", SMALL, "--samples", "3")
    assert code == 0
    rec = yaml.safe_load(out)
    assert rec["scenario"] == "sl2_basic"
    assert rec["status"] == "pass"
    assert [c["name"] for c in rec["checks"]][0] == "jacobi"
    assert all("elapsed_ms" not in c for c in rec["checks"])


def test_run_json_with_timings(capsys):
    code, out, _ = run(capsys, "run", SMALL, "--samples", "2", "--json", "--timings")
    assert code == 0
    rec = json.loads(out)
    assert all("elapsed_ms" in c for c in rec["checks"])


def test_same_seed_is_byte_identical(capsys):
    _, a, _ = run(capsys, "run", SMALL, "--samples", "3", "--seed", "7")
    _, b, _ = run(capsys, "run", SMALL, "--samples", "3", "--seed", "7", "--jobs", "3")
    assert a == b


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.yaml"
    assert main(["run", SMALL, "--samples", "2", "-o", str(target)]) == 0
    assert yaml.safe_load(target.read_text())["status"] == "pass"


def test_broken_jacobi_fixture_exits_2(capsys):
    code, _, err = run(capsys, "run", str(FIXTURES / "broken_jacobi.yaml"))
    assert code == 2
    assert "Jacobi identity fails on basis triple (1, 2, 3)" in err
    code, out, _ = run(capsys, "validate", str(FIXTURES / "broken_jacobi.yaml"))
    assert code == 2 and out.startswith("invalid:")


def test_degree_cap_violation_is_a_config_error(capsys):
    code, out, _ = run(capsys, "run", SMALL, "--samples", "2", "--degree-cap", "1")
    assert code == 2
    assert yaml.safe_load(out)["status"] == "config_error"


def test_failing_check_exits_1(tmp_path, capsys):
    # a perturbation of zero cannot be detected, so the cocycle check fails
    p = tmp_path / "undetectable.yaml"
    p.write_text(
        "name: undetectable\nbase: {dim: 2}\nlie_algebra: sl2\n"
        "atlas:\n  charts: ['1', '2']\n  transitions:\n    - {pair: ['1', '2'], shears: [[1, 2, x1]]}\n"
        "  perturb: {pair: ['1', '2'], direction: 1, value: ['0', '0', '0']}\n"
        "checks: [atlas_cocycle]\n"
    )
    code, out, _ = run(capsys, "run", str(p))
    assert code == 1
    rec = yaml.safe_load(out)
    assert rec["checks"][0]["status"] == "fail"


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "run")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "run", SMALL, "--degree-cap", "-3")[0] == 2
    assert run(capsys, "run", "/nonexistent.yaml")[0] == 2


def test_list_checks_anchors(capsys):
    code, out, _ = run(capsys, "list-checks", "--json")
    assert code == 0
    rows = {r["name"]: r for r in json.loads(out)}
    assert set(rows) == set(REGISTRY)
    assert rows["bianchi"]["anchor"] == "It satisfies the Bianchi identity"
    assert rows["theorem_three_spaces"]["anchor"] == "The following three spaces are isomorphic"
    assert rows["maurer_cartan_matrix"]["anchor"] == "d′(iθ) − (iθ)² = 0"
    code, out, _ = run(capsys, "list-checks")
    assert "bianchi" in out


def test_corpus_covers_every_check():
    used = set()
    for p in corpus_paths():
        used.update(load_scenario(p).checks)
    assert used == set(REGISTRY)


def test_validate_corpus(capsys):
    code, out, _ = run(capsys, "validate", "--corpus")
    assert code == 0
    assert out.count("ok:") == len(corpus_paths())


@pytest.mark.parametrize("path", corpus_paths(), ids=lambda p: p.stem)
def test_corpus_scenario_passes_with_few_samples(path, capsys):
    code, out, _ = run(capsys, "run", str(path), "--samples", "2")
    assert code == 0, out
