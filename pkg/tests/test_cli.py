import json
import subprocess
import sys

import pytest

from pglab import cli
from pglab.config import RunConfig
from pglab.errors import DomainError
from pglab.fixtures import build_fixtures

SMALL = {"cases": 6, "iota_cases": 3, "module_cases": 4}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_psi_command(capsys, tmp_path):
    code, out = run(capsys, "psi", "--input", write(tmp_path, "in.json", {"series": "(1+X)^3"}))
    assert code == 0
    assert out["result"]["expression"] == "1 + X"
    assert out["provenance"]["config"]["p"] == 3


def test_wronskian_command(capsys, tmp_path):
    data = {"H": "QQ(X)", "v": 1, "k": 2, "vectors": [["1"], ["X"], ["3+5*X"]]}
    code, out = run(capsys, "wronskian", "--input", write(tmp_path, "w.json", data))
    assert code == 0 and out["verified"]
    assert out["certificate"]["lambdas"] == ["3", "5", "-1"]


def test_wronskian_hypothesis_failure(capsys, tmp_path):
    data = {"H": "QQ(X)", "v": 1, "k": 2, "vectors": [["1"], ["X"], ["X^2"]]}
    code, out = run(capsys, "wronskian", "--input", write(tmp_path, "w.json", data))
    assert code == 1 and out["failed"] == ["h2"]


def test_g_criterion_command(capsys, tmp_path):
    data = {"weights": [0], "element": ["1/X"], "k": 0, "levels": [1]}
    code, out = run(capsys, "g-criterion", "--input", write(tmp_path, "g.json", data))
    assert code == 1
    assert out["result"]["verdict"] == "nonzero"
    assert out["result"]["cells"][0]["valuation"] == "-1/2"


def test_gamma_relation_command(capsys, tmp_path):
    data = {"weights": [-1], "element": [{"tpow": 1, "series": "1"}]}
    code, out = run(capsys, "gamma-relation", "--input", write(tmp_path, "r.json", data))
    assert code == 0 and out["result"]["display"] == "-1 + 1*gamma"
    data = {"weights": [0], "element": ["X"], "v_max": 3, "s_max": 4}
    code, out = run(capsys, "gamma-relation", "--input", write(tmp_path, "r.json", data))
    assert code == 1 and out["result"]["relation"] is False


def test_iota_command(capsys, tmp_path):
    code, out = run(capsys, "iota", "--input", write(tmp_path, "i.json", {"series": "X", "n": 1}))
    assert code == 0 and out["result"]["var"] == "t"
    assert out["provenance"]["digits_lost"] > 0


def test_module_check_command(capsys, tmp_path):
    data = {"p": 3, "weights": [2, 0, -1], "truncation": 32, "precision": 24}
    cfg = write(tmp_path, "c.json", SMALL)
    code, out = run(capsys, "module-check", "--input", write(tmp_path, "m.json", data),
                    "--config", cfg)
    assert code == 0 and out["passed"]


def test_norms_demo(capsys):
    code, out = run(capsys, "norms-demo")
    v = out["verdicts"]
    assert v["trivial summand, y = 1/X"]["levels"] == {"1": "FAIL", "2": "FAIL"}
    assert v["weight 1, y = 1"]["levels"] == {"1": "PASS", "2": "PASS"}
    assert v["weight 0, y = t*X"]["levels"] == {"1": "PASS", "2": "PASS"}
    assert len(out["table"]) == len(v)


def test_identities_small_config(capsys, tmp_path):
    code, out = run(capsys, "identities", "--config", write(tmp_path, "c.json", SMALL))
    assert code == 0 and out["passed"]
    names = [r["name"] for r in out["identities"]]
    assert names == sorted(names) and "psi_phi_identity" in names


def test_identities_p2_notes_restriction(capsys, tmp_path):
    code, out = run(capsys, "identities", "--config",
                    write(tmp_path, "c.json", dict(SMALL, p=2)))
    assert code == 0
    notes = {r["name"]: r.get("note") for r in out["identities"]}
    assert notes["gamma_composition"] == "a restricted to 1 + 4Z_2"


def test_fault_injection_names_psi_phi(capsys, tmp_path):
    code, out = run(capsys, "identities", "--config", write(tmp_path, "c.json", SMALL),
                    "--inject-fault", "psi")
    assert code == 1 and "psi_phi_identity" in out["failing"]


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "psi")[0] == 64
    assert run(capsys, "psi", "--input", write(tmp_path, "x.json", {"nope": 1}))[0] == 64
    assert run(capsys, "psi", "--input", write(tmp_path, "x.json", {"series": "1/"}))[0] == 64
    assert run(capsys, "identities", "--config", write(tmp_path, "c.json", {"p": 4}))[0] == 64
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 64


def test_fixtures_mode_reproduces_committed_file(capsys, tmp_path):
    target = tmp_path / "derived.json"
    code, out = run(capsys, "--fixtures", target)
    assert code == 0
    from conftest import FIXTURES
    assert json.loads(target.read_text()) == json.loads(FIXTURES.read_text())
    assert json.loads(FIXTURES.read_text()) == json.loads(json.dumps(build_fixtures()))


def test_config_rejects_unknown_keys():
    with pytest.raises(DomainError):
        RunConfig.from_dict({"prime": 3})


def test_console_script_deterministic(tmp_path):
    cfg = write(tmp_path, "c.json", SMALL)
    cmd = [sys.executable, "-m", "pglab.cli", "identities", "--seed", "3", "--config", str(cfg)]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["config"]["seed"] == 3
