import json
import os
import subprocess
import sys

SC_RUNNING = json.dumps({"A": [["1", "0", "1"], ["0", "1", "1"]],
                         "zeros": [1, 2]})


def run(*args, env_extra=None):
    env = dict(os.environ)
    env.update(env_extra or {})
    return subprocess.run([sys.executable, "-m", "multispec.cli", *args],
                          capture_output=True, text=True, env=env)


def test_pipeline_text_and_json():
    res = run("pipeline", SC_RUNNING)
    assert res.returncode == 0
    assert "Fq" in res.stdout and "t1*t2*t3^(-1)" in res.stdout
    res = run("--format", "json", "pipeline", SC_RUNNING)
    payload = json.loads(res.stdout)
    assert payload["q"] == 2
    assert {"exponents": {"tau:1": "1"}, "value": "0"} in payload["Fq"]


def test_env_var_format():
    res = run("pipeline", SC_RUNNING, env_extra={"MULTISPEC_FORMAT": "json"})
    json.loads(res.stdout)


def test_malformed_scenario_exits_2():
    res = run("pipeline", "{not json")
    assert res.returncode == 2
    assert "parse" in res.stderr


def test_levels_and_multicone():
    sc = json.dumps({"A": [["1", "1"], ["0", "1"]]})
    res = run("levels", sc)
    assert res.returncode == 0 and "strict: True" in res.stdout
    res = run("multicone", sc)
    assert "|z2| < eps*|z1|" in res.stdout
    res = run("--format", "latex", "multicone", sc)
    assert "\\epsilon" in res.stdout


def test_restrict_subcommand():
    sc = json.dumps({"A": [["1", "1", "0"], ["0", "1", "1"]], "zeros": [2]})
    res = run("restrict", "--matrix", sc, "--beta", "1,0,0")
    assert res.returncode == 0
    assert "holds: False" in res.stdout
    assert "t1^(-1)*t2" in res.stdout


def test_expand_and_classify_and_verify():
    sc = json.dumps({"A": [["3", "2"], ["1", "1"]]})
    res = run("expand", sc, "--N", "4,2")
    assert "3*|a1| + 2*|a2| < n1" in res.stdout
    res = run("classify2", "--matrix", "[[1, 2], [0, 1]]")
    assert "m=2,N=3" in res.stdout
    res = run("verify", sc, "--function", "z1*z2", "--N", "1,1",
              "--samples", "150")
    assert "PASS: True" in res.stdout


def test_probe_subcommand():
    sc = json.dumps({"A": [["1", "0", "1"], ["0", "1", "1"]],
                     "norms": {"3": "1"}})
    res = run("probe", sc, "--zset", "z3=z1*z2", "--samples", "800")
    assert res.returncode == 0 and "in-cone" in res.stdout
    res = run("probe", sc, "--zset", "z3=0", "--samples", "200")
    assert "not-in-cone" in res.stdout


def test_project_subcommand():
    sc = json.dumps({"A": [["1", "1"], ["0", "1"]]})
    res = run("project", sc, "--drop", "1")
    assert res.returncode == 0 and "|z2| < eps^2" in res.stdout


def test_map_check_subcommand(tmp_path):
    spec = {
        "source": {"A": [["1", "0"], ["0", "1"]]},
        "target": {"A": [["3", "2"], ["1", "1"]]},
        "components": ["z1^3*z2", "z1^2*z2"],
    }
    path = tmp_path / "map.json"
    path.write_text(json.dumps(spec))
    res = run("map-check", str(path))
    assert res.returncode == 0 and "z1^3*z2" in res.stdout


def test_analyze_deterministic():
    a = run("analyze", SC_RUNNING)
    b = run("analyze", SC_RUNNING)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert "classification: non-degenerate" in a.stdout


def test_fixture_runner():
    res = run("fixtures", "--filter", "pipeline-two-actions")
    assert res.returncode == 0
    assert "0 failures" in res.stdout
    res = run("fixtures", "--filter", "no-such-fixture-exists")
    assert res.returncode == 0 and "no fixtures" in res.stdout


def test_scenario_with_k_sets_and_blocks():
    sc = json.dumps({"A": [["1", "1"], ["0", "1"]], "blocks": [2, 1],
                     "K": [[1, 2], [2]]})
    res = run("analyze", sc, "--generalized")
    assert res.returncode == 0
    assert "classification: normal" in res.stdout
    bad = json.dumps({"A": [["1", "1"], ["0", "1"]], "K": [[1], [2]]})
    res = run("pipeline", bad)
    assert res.returncode == 2
