import json
import subprocess
import sys

import pytest

from seqspace.cli import main
from seqspace.serialize import loads_sequence


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def x4(tmp_path):
    p = tmp_path / "x4.json"
    p.write_text('{"kind": "finite", "values": ["1", "1/2", "1/3", "1/4"]}')
    return str(p)


def test_norm_exact(capsys, x4):
    code, out, _ = run(capsys, "norm", "--space", "lp:1", "--seq", x4)
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "seqspace/1" and doc["exact_value"] == "25/12"
    assert doc["seed"] == 0 and doc["precision"] == 50


def test_norm_garling_is_enclosure(capsys, x4):
    code, out, _ = run(capsys, "norm", "--space", "garling", "--seq", x4)
    doc = json.loads(out)
    assert code == 0 and doc["exact"] is False and doc["value"][0].startswith("1.67100348")


def test_divergent_norm_reports_non_member(capsys):
    code, out, _ = run(capsys, "norm", "--space", "lp:1", "--seq", "harmonic")
    doc = json.loads(out)
    assert code == 0 and doc["divergent"] and doc["membership"] == "non-member"


def test_sequence_round_trip_through_cli(capsys, tmp_path):
    src = '{"kind": "blocks", "blocks": [["-1/3", "100000000000000000000"], ["2", "3"]], "tail": "zero"}'
    code, out, _ = run(capsys, "rearrange", "--seq", src)
    assert code == 0
    y = loads_sequence(out)
    p = tmp_path / "y.json"
    p.write_text(out)
    code, out2, _ = run(capsys, "rearrange", "--seq", str(p))
    assert loads_sequence(out2) == y
    assert json.loads(out)["sequence"]["blocks"][1] == ["1/3", "100000000000000000000"]


@pytest.mark.parametrize("argv,prefix", [
    (["closeup", "--seq", '{"kind":"finite","values":["0","1","0","2"]}'], ["1", "2", "0"]),
    (["apply", "--seq", '{"kind":"finite","values":["1","2","3"]}', "--map", "shift:1"], ["2", "3", "0"]),
    (["apply", "--seq", '{"kind":"finite","values":["1","2","3"]}', "--map", '{"map":"permutation","values":[3,1,2]}'], ["3", "1", "2"]),
    (["apply", "--seq", '{"kind":"periodic","pattern":["1","2"]}', "--restrict", "odds"], ["1", "0", "1"]),
])
def test_operators(capsys, argv, prefix):
    code, out, _ = run(capsys, *argv, "--prefix", "3")
    assert code == 0 and json.loads(out)["prefix"] == prefix


def test_sums(capsys, x4):
    code, out, _ = run(capsys, "sums", "--seq", x4, "--n", "2")
    assert json.loads(out)["partial_sums"] == ["1", "1.5"]


def test_limit_and_gamma(capsys):
    code, out, _ = run(capsys, "limit", "--seq", '{"kind":"periodic","pattern":["1","0"]}', "--no-certificate")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "0.5" and doc["exact"] and not doc["certified"]
    code, out, _ = run(capsys, "gamma", "--seq", "harmonic", "--psi", "loge")
    assert code == 0 and json.loads(out)["interval"] == ["1", "1"]
    code, _, err = run(capsys, "gamma", "--seq", '{"kind":"blocks","blocks":[],"tail":["const","1"]}')
    assert code == 1 and "m_Psi" in err


def test_dilation_limit(capsys):
    code, out, _ = run(capsys, "limit", "--seq", '{"kind":"periodic","pattern":["1","0"]}', "--method", "dilation", "--stages", "3")
    doc = json.loads(out)
    assert code == 0 and doc["residual_bound"] == "0.5"


def test_ratio_csv(capsys):
    code, out, _ = run(capsys, "limit", "--seq", '{"kind":"finite","values":["1"]}', "--ratio", "log2", "--csv", "3")
    assert code == 0 and out.splitlines() == ["n,s_n,psi_n,ratio", "1,1,1,1", "2,1,1.5849625007211561814,0.63092975357145743709", "3,1,2,0.5"]


@pytest.mark.parametrize("which", ["wl1", "renorm"])
def test_witness_exit_zero(capsys, which):
    code, out, _ = run(capsys, "witness", which)
    assert code == 0 and json.loads(out)["assertions_hold"]


def test_witness_garling(capsys):
    code, out, _ = run(capsys, "witness", "garling", "--m", "4")
    doc = json.loads(out)
    assert code == 0 and doc["norm_x"][0].startswith("2.08333") and doc["differ"]


def test_witness_oscillate(capsys):
    code, out, _ = run(capsys, "witness", "oscillate", "--stages", "4")
    doc = json.loads(out)
    assert code == 0 and [s["N"] for s in doc["stages"]] == ["1", "14", "60", "33362100"]
    code, out, _ = run(capsys, "witness", "oscillate", "--stages", "4", "--csv")
    assert out.startswith("n,ratio\n1,")


def test_verify_exit_codes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "THM1-EQ", "--space", "lp:2", "--trials", "5", "--perms", "5", "--seed", "7")
    assert code == 0 and json.loads(out)["seed"] == 7 and "pass" in err
    code, _, err = run(capsys, "verify", "--suite", "SYMM-NORM", "--space", "garling", "--space", "lp:1")
    assert code == 1 and "mix" in err


def test_failed_assertions_exit_two(capsys, monkeypatch):
    import seqspace.verify as V
    import seqspace.witnesses as W

    def failing(trials, seed, **_):
        return V.VerificationReport("SANDWICH", trials, failures=[{"trial": 0}])

    monkeypatch.setitem(V.SUITES, "SANDWICH", failing)
    code, out, err = run(capsys, "verify", "--suite", "SANDWICH", "--trials", "1")
    assert code == 2 and json.loads(out)["passed"] is False and "FAIL" in err
    monkeypatch.setattr(W, "renorm_contradiction", lambda: {"inconsistent": False, "same_rearrangement": True})
    code, out, _ = run(capsys, "witness", "renorm")
    assert code == 2 and json.loads(out)["assertions_hold"] is False


def test_usage_and_input_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "finite", "entries": [[1, "1"], [2, "oops"]]}')
    code, out, err = run(capsys, "norm", "--space", "lp:2", "--seq", str(bad))
    assert code == 1 and out == "" and "$.entries[1][1]" in err
    code, _, err = run(capsys, "norm", "--space", "lp:2", "--seq", str(tmp_path / "missing.json"))
    assert code == 1
    code, _, err = run(capsys, "--precision", "5", "sums", "--seq", "harmonic", "--n", "1")
    assert code == 1 and "precision" in err


def test_precision_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("SEQSPACE_PRECISION", "25")
    code, out, _ = run(capsys, "norm", "--space", "lp:2", "--seq", "harmonic")
    assert json.loads(out)["precision"] == 25
    code, out, _ = run(capsys, "norm", "--space", "lp:2", "--seq", "harmonic", "--precision", "30")
    assert json.loads(out)["precision"] == 30


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("seed = 11\npsi = loge\nformat = table\n")
    code, out, _ = run(capsys, "--config", str(cfg), "psi-report", "--N", "4")
    assert code == 0 and "seed\t11" in out and "psi\tloge" in out


def test_byte_identical_output(capsys):
    argv = ["verify", "--suite", "REARR-PROPS", "--trials", "20", "--seed", "5"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b and "wall_time" not in a


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "seqspace.cli", "witness", "renorm"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["inconsistent"]
