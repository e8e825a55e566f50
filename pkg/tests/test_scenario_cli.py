import json

import numpy as np
import pytest

from hardyops import cli, fileio, scenario
from hardyops.errors import ScenarioError

COLUMN = {"block": [[{"scale": [0.6, {"blaschke": 0.3}]}],
                    [{"scale": [0.8, {"blaschke": -0.5}]}]]}


def _scenario(checks, symbols=None, **extra):
    d = {"schema": "hardyops-scenario/1", "name": "t", "order": 32,
         "symbols": symbols or {"th": {"blaschke": 0.5}, "ph": {"blaschke": 0.3}},
         "checks": checks}
    d.update(extra)
    return json.dumps(d)


def test_bundled_suite_passes():
    rep = scenario.run(scenario.load_scenario(scenario.bundled("reference-suite")))
    assert rep.passed
    assert rep.summary()["total"] == len(rep.records) >= 12


def test_parse_errors_carry_location():
    with pytest.raises(ScenarioError, match=r"<string>:1:"):
        scenario.parse_scenario("{bad")
    with pytest.raises(ScenarioError, match="unknown check type"):
        scenario.parse_scenario(_scenario([{"type": "nope"}]))
    with pytest.raises(ScenarioError, match="unresolved symbol"):
        scenario.parse_scenario(_scenario([{"type": "defect", "rep": {"theta": "zz"}}]))
    with pytest.raises(ScenarioError, match="at least"):
        scenario.parse_scenario(_scenario([], order=4))
    with pytest.raises(ScenarioError, match="positive"):
        scenario.parse_scenario(_scenario([], tolerances={"rank": -1}))


def test_overrides():
    sc = scenario.parse_scenario(_scenario([]), overrides={"order": 48, "seed": 7,
                                                           "tolerances": {"rank": 1e-9}})
    assert (sc.order, sc.seed, sc.tol_rank) == (48, 7, 1e-9)


def test_expectation_mismatch_is_reported():
    sc = scenario.parse_scenario(_scenario(
        [{"name": "wrong", "type": "defect", "op": "shift", "rep": {"theta": "th"}, "expect": 2}]))
    rep = scenario.run(sc)
    assert not rep.passed


def test_construction_error_fails_every_check():
    sc = scenario.parse_scenario(_scenario(
        [{"type": "defect", "rep": {"theta": "th"}}, {"type": "nearly", "rep": {"theta": "th"}}],
        symbols={"th": {"blaschke": 1.5}}))
    rep = scenario.run(sc)
    assert [r.failure_class for r in rep.records] == ["construction_error"] * 2


def test_column_range_checks():
    sc = scenario.parse_scenario(_scenario(
        [{"type": "defect", "op": "backshift", "rep": {"theta": "th", "flavor": "range_of_inner"},
          "expect": 1},
         {"type": "nearly", "rep": {"theta": "th", "flavor": "range_of_inner"}, "expect": True}],
        symbols={"th": COLUMN}, order=40))
    assert scenario.run(sc).passed


def test_report_is_deterministic_without_timings():
    sc = scenario.load_scenario(scenario.bundled("reference-suite"))
    a = scenario.run(sc).to_json(timings=False)
    b = scenario.run(sc).to_json(timings=False)
    assert a == b
    assert scenario.run(sc).to_csv().startswith("name,type,passed")


def test_every_check_type_is_listed():
    assert set(scenario.list_checks()) == set(scenario.CHECKS)


# command line

def test_cli_run_exit_codes(tmp_path, capsys):
    assert cli.main(["run", "reference-suite", "--no-timings", "--report", str(tmp_path / "r.json")]) == 0
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["summary"]["all_passed"]
    bad = tmp_path / "bad.json"
    bad.write_text(_scenario([{"type": "defect", "op": "shift", "rep": {"theta": "th"},
                               "expect": 3}]))
    assert cli.main(["run", str(bad)]) == 1
    assert cli.main(["run", "reference-suite", "--order", "4"]) == 2


def test_cli_represent_and_defect(tmp_path, capsys):
    spec = json.dumps({"theta": {"blaschke": 0.5}})
    path = tmp_path / "m.hob"
    assert cli.main(["represent", spec, "--order", "32", "--export", str(path)]) == 0
    capsys.readouterr()
    assert cli.main(["defect", "shift", str(path), "--order", "32"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["defect"] == 1 and out["subspace_rank"] == 1


def test_cli_perturb_and_kernel(tmp_path, capsys):
    spec = json.dumps({"theta": {"blaschke": 0.5}, "phi": {"blaschke": 0.3}})
    assert cli.main(["perturb", "t2_reducing", spec, "--order", "48"]) == 0
    assert cli.main(["kernel-check", spec, "0.2+0.4j", "--order", "64"]) == 0
    assert cli.main(["kernel-check", spec, "0.99"]) == 2


def test_cli_probe_and_file_conversion(tmp_path, capsys):
    spec = json.dumps({"theta": {"monomial": 40}})
    assert cli.main(["probe-halfspace", spec, "32,48,64"]) == 0
    assert '"stabilizing"' in capsys.readouterr().out
    a, b = tmp_path / "a.csv", tmp_path / "a.hob"
    assert cli.main(["export", json.dumps({"theta": {"blaschke": 0.5}}), str(a),
                     "--order", "16"]) == 0
    assert cli.main(["import", str(a), "--to", str(b)]) == 0
    assert np.array_equal(fileio.load(a).basis, fileio.load(b).basis)


def test_cli_list_checks(capsys):
    assert cli.main(["list-checks"]) == 0
    assert "theorem_defect" in capsys.readouterr().out


def test_bundled_alias_resolves():
    assert scenario.bundled("paper-suite") == scenario.bundled("reference-suite")
