import json

import pytest

from chevtrunc.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_rootsys(capsys):
    code, doc = call(capsys, "rootsys", "--type", "G2")
    assert code == 0
    assert len(doc["positive_roots"]) == 6
    assert doc["cartan_matrix"] == [[2, -1], [-3, 2]] or doc["cartan_matrix"] == [[2, -3], [-1, 2]]


def test_trunc_cardinality(capsys):
    code, doc = call(capsys, "trunc", "--type", "A1", "--weight", "10", "-p", "5", "-r", "2")
    assert code == 0 and doc["cardinality_exponent"] == 3 and doc["s_invariance"] == "pass"


def test_cohomology_strings(capsys):
    code, doc = call(capsys, "cohomology", "-p", "5", "--k", "0")
    assert code == 0
    assert doc["hecke_charpoly"] == ["1", "-7", "11", "-5"]
    assert (doc["g"], doc["d"], doc["dim_h1"]) == (3, 5, 3)


def test_cohomology_truncated(capsys):
    code, doc = call(capsys, "cohomology", "-p", "5", "--k", "10", "--coeff", "trunc:2")
    assert code == 0 and (doc["h1_exponent"], doc["h0_exponent"]) == (8, 2)


def test_cohomology_shuffle_matches(capsys):
    _, a = call(capsys, "cohomology", "-p", "5", "--k", "3")
    _, b = call(capsys, "cohomology", "-p", "5", "--k", "3", "--shuffle", "7")
    assert a["hecke_charpoly"] == b["hecke_charpoly"]


def test_slopes_pass_and_reject(capsys):
    code, doc = call(capsys, "slopes", "-p", "5", "--k", "4", "--beta", "1", "-r", "3")
    assert code == 0 and doc["prop65"] == "pass" and doc["d_beta"] <= doc["trunc_exponent"]
    code, doc = call(capsys, "slopes", "-p", "5", "--k", "4", "--beta", "1", "-r", "2")
    assert code == 1 and doc["prop65"] == "rejected"


def test_constancy_rejects_without_force(capsys):
    code, doc = call(capsys, "constancy", "--type", "A2", "--weight", "3,3", "--weight2", "28,3",
                     "--moved", "a1", "-p", "5", "-r", "2")
    assert code == 1 and doc["hypotheses_failed"] == ["congruent"]


def test_constancy_positive(capsys):
    code, doc = call(capsys, "constancy", "--type", "A2", "--weight", "3,3", "--weight2", "128,3",
                     "--moved", "a1", "-p", "5", "-r", "2")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["hwmod", "--type", "A2", "--weight", "x"],
    ["rootsys", "--type", "Z9"],
    ["cohomology", "-p", "5", "--k", "1", "--coeff", "bogus"],
    ["bound", "-p", "5", "--beta", "1", "-r", "3", "--k-range", "9"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_missing_flag():
    with pytest.raises(SystemExit) as exc:
        run(["trunc", "--type", "A1"])
    assert exc.value.code == 2


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["hwmod", "--type", "B2", "--weight", "1,1"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first
    path = tmp_path / "out.json"
    assert run(["--output", str(path)] + argv) == 0
    assert path.read_text() == first
