import json
import subprocess
import sys

import pytest

from nuclear_ideals.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--quiet")
    doc = json.loads(out)
    assert doc["schema"] == "v1"
    return code, doc


def test_gens_minor(capsys):
    code, out, _ = run(capsys, "gens", "--shape", "2x2", "--p", "0")
    assert code == 0
    assert out.splitlines() == ["x[1,2]*x[2,1] - x[1,1]*x[2,2]"]


def test_gens_empty(capsys):
    code, out, _ = run(capsys, "gens", "--shape", "2", "--p", "0")
    assert code == 0 and out.strip() == ""
    code, doc = run_json(capsys, "gens", "--shape", "2", "--p", "0")
    assert doc["generators"] == [] and doc["count"] == 0


def test_gens_json_metadata(capsys):
    code, doc = run_json(capsys, "gens", "--shape", "2x2", "--p", "2")
    assert doc["count"] == 2 and doc["shape"] == "2x2" and doc["p"] == "2"
    assert doc["generators"][0] == "x[1,1]^2 + x[1,2]^2 + x[2,1]^2 + x[2,2]^2 - 1"


@pytest.mark.parametrize("argv", [
    ["gens", "--shape", "0x2", "--p", "2"],
    ["gens", "--shape", "2by2"],
    ["gens", "--shape", "2x2", "--p", "3"],
    ["prime", "--shape", "2x2", "--p", "1"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_invalid_shape_message(capsys):
    with pytest.raises(SystemExit):
        main(["gens", "--shape", "0x2", "--p", "2"])
    assert "invalid shape" in capsys.readouterr().err


def test_gb_verify(capsys):
    code, doc = run_json(capsys, "gb-verify", "--shape", "3x3", "--p", "2")
    assert code == 0
    assert doc["is_gb"] is True and doc["spairs_checked"] == 45 and doc["witness"] is None
    code, doc = run_json(capsys, "gb-verify", "--shape", "2x2", "--p", "inf")
    assert code == 1
    assert doc["is_gb"] is False and doc["witness"]["remainder"]


def test_radical_commands(capsys):
    code, doc = run_json(capsys, "radical", "--shape", "2x2", "--p", "1")
    assert code == 0 and doc["certificate"]["verdict"] == "radical"
    code, doc = run_json(capsys, "radical", "--shape", "3x3", "--p", "0")
    assert code == 0 and doc["certificate"]["method"] == "squarefree_LT"
    code, doc = run_json(capsys, "radical", "--shape", "2x2", "--p", "2")
    assert code == 1


def test_prime_and_smooth(capsys):
    code, doc = run_json(capsys, "prime", "--shape", "3x3", "--p", "2")
    assert code == 0
    cert = doc["certificate"]
    assert cert["verdict"] == "prime" and cert["dimension"] == 4
    assert cert["J"]["J"] == ["(1,1)", "(1,2)", "(2,1)", "(3,1)"]
    code, doc = run_json(capsys, "smooth", "--shape", "2x2x2")
    assert code == 0 and doc["certificate"]["jacobian_rank"] == 5


def test_prime_p4_flag(capsys):
    code, doc = run_json(capsys, "prime", "--shape", "2x2", "--p", "4")
    assert code == 1 and doc["certificate"]["verdict"] == "not_established"
    code, doc = run_json(capsys, "prime", "--shape", "2x2", "--p", "4", "--assume-primary")
    assert code == 0 and doc["certificate"]["primary_source"] == "assumed"


def test_numeric(capsys):
    code, doc = run_json(capsys, "numeric", "--shape", "2x2", "--samples", "500", "--seed", "42")
    s = doc["summary"]
    assert code == 0
    assert s["max_residual"] <= 1e-9 and s["nuclear_norm_max"] <= 1 + 1e-9
    assert s["rank_histogram"] == {"2": 500}


def test_report_3x3(capsys):
    code, out, _ = run(capsys, "report", "--shape", "3x3", "--p", "2", "--quiet", "--samples", "200")
    doc = json.loads(out)
    assert code == 0
    v = doc["verdicts"]
    assert (v["gb"], v["prime"], v["smooth"], v["dim"]) == (True, True, True, 4)


def test_report_2x2_p1(capsys):
    code, out, _ = run(capsys, "report", "--shape", "2x2", "--p", "1", "--quiet")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdicts"] == {"gb": True, "radical": True, "zero_dim": True}
    assert doc["radical"]["method"] == "seidenberg"


def test_report_p4_without_hypothesis(capsys):
    code, out, _ = run(capsys, "report", "--shape", "2x2", "--p", "4", "--quiet", "--samples", "100")
    assert code == 1
    assert json.loads(out)["verdicts"]["prime"] == "not_established"


def test_report_is_byte_deterministic(capsys):
    argv = ["report", "--shape", "2x2", "--p", "2", "--quiet", "--samples", "300", "--seed", "3"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_resource_cap_exit_code(capsys):
    code, _, err = run(capsys, "report", "--shape", "2x3", "--p", "inf", "--max-basis", "3", "--quiet")
    assert code == 3
    assert "resource limit" in err


def test_progress_goes_to_stderr(capsys):
    code, out, err = run(capsys, "prime", "--shape", "2x2")
    assert code == 0
    assert "primality pipeline" in err
    assert "primality pipeline" not in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nuclear_ideals", "gens", "--shape", "2x2", "--p", "0"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.strip() == "x[1,2]*x[2,1] - x[1,1]*x[2,2]"
