import csv
import json
from fractions import Fraction

from forestrep.cli import main
from forestrep.thompson import family_kn, format_element_literal


REMARK = "(f3 f1 f1)/(f3 f1 f1)~[3,2,1,4]"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_phi_symbolic(capsys):
    code, out, _ = run(capsys, "phi", "--element", REMARK, "--symbolic")
    assert code == 0
    assert out.strip() == "2*alpha^6 - 2*alpha^4 + alpha^2"


def test_phi_rational(capsys):
    code, out, _ = run(capsys, "phi", "--element", REMARK, "--alpha", "1/2")
    assert code == 0
    assert out.strip() == "5/32"
    assert Fraction(out.strip()) == Fraction(10, 64)


def test_phi_float_flag(capsys):
    code, out, _ = run(capsys, "phi", "--element", REMARK, "--alpha", "1/2", "--float")
    assert code == 0
    assert abs(float(out.strip()) - 10 / 64) < 1e-15


def test_element_subcommands(capsys):
    code, out, _ = run(capsys, "element", "classify", REMARK)
    assert code == 0 and out.strip() == "V_only"
    code, out, _ = run(capsys, "element", "eval", "(f1 f1)/(f2 f1)", "--at", "1/2")
    assert code == 0 and out.strip() == "1/4"
    code, out, _ = run(capsys, "element", "eval", "f1/f1~[2,1]", "--at", "0")
    assert code == 0 and out.strip() == "1/2"
    code, out, _ = run(capsys, "element", "multiply", "g", "h", "g", "h")
    assert code == 0 and "/" in out
    code, out, _ = run(capsys, "element", "inverse", "(f1 f1)/(f2 f1)")
    assert code == 0 and out.strip() == "(f2 f1)/(f1 f1)"
    code, out, _ = run(capsys, "element", "reduce", "(f1 f1 f1)/(f1 f1 f1)")
    assert code == 0 and out.strip() == "./."


def test_exit_codes(capsys):
    code, _, err = run(capsys, "phi", "--element", "not a literal", "--symbolic")
    assert code == 2 and "parse error" in err
    code, _, err = run(capsys, "phi", "--element", "g", "--alpha", "3/2")
    assert code == 1 and "contract violation" in err


def test_scan_vanishing_csv(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    code, out, _ = run(
        capsys, "scan-vanishing", "--alpha", "1/2", "--max-leaves", "3", "--csv", str(target)
    )
    assert code == 0
    with open(target, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    for row in rows:
        n = int(row["n_leaves"])
        assert Fraction(int(row["phi_num"]), int(row["phi_den"])) == Fraction(1, 2) ** (2 * n - 2)
        assert (int(row["alpha_num"]), int(row["alpha_den"])) == (1, 2)
    assert "max_deviation=0/1" in out


def test_sweep_csv(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "--element", "(f1 f1)/(f2 f1)", "--alphas", "1/4,1/2,3/4",
        "--csv", str(target),
    )
    assert code == 0
    with open(target, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    for row in rows:
        alpha = Fraction(int(row["alpha_num"]), int(row["alpha_den"]))
        value = Fraction(int(row["phi_num"]), int(row["phi_den"]))
        assert value == alpha**4


def test_gram_files(tmp_path, capsys):
    lines = tmp_path / "elements.txt"
    lines.write_text("g\nh\n(f1 f1)/(f2 f1)\n")
    code, out, _ = run(capsys, "gram", "--elements", str(lines), "--alpha", "1/2")
    assert code == 0 and out.strip() == "PSD"
    blob = tmp_path / "elements.json"
    blob.write_text(json.dumps([
        {"domain": "f2 f1", "range": "f1 f1"},
        {"domain": "f1", "range": "f1", "perm": [2, 1]},
    ]))
    code, out, _ = run(capsys, "gram", "--elements", str(blob), "--alpha", "1/4")
    assert code == 0 and out.strip() == "PSD"


def test_farley(capsys):
    code, out, _ = run(capsys, "farley", "--element", REMARK, "--beta", "1/2")
    assert code == 0
    assert "norm_sq=6" in out
    assert "exponential-family=differs" in out
    assert "decay=exp(-1/2)^6" in out
    code, out, _ = run(capsys, "farley", "--element", "(f1 f1)/(f2 f1)")
    assert "exponential-family=matches" in out


def test_kazhdan_kn(capsys):
    code, out, _ = run(capsys, "kazhdan", "kn", "--n", "1", "--m", "1")
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert row[2] == "2480625/4194304"
    assert row[4] == "exact-match"


def test_kazhdan_almost_invariant(capsys):
    code, out, _ = run(
        capsys, "kazhdan", "almost-invariant", "--element", "(f1 f1)/(f2 f1)", "--m", "1"
    )
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert row[1] == "225/256"
    assert row[3] == "True"


def test_oracle_json(capsys):
    code, out, _ = run(capsys, "oracle", "parity", "--bound", "3")
    assert code == 0
    report = json.loads(out)
    assert report["check"] == "term-parity"
    assert report["violations"] == 0
    code, out, _ = run(capsys, "oracle", "reduction", "--bound", "30", "--seed", "11")
    assert code == 0
    assert json.loads(out)["violations"] == 0


def test_element_file_input(tmp_path, capsys):
    blob = tmp_path / "one.json"
    blob.write_text(json.dumps({"domain": "f2 f1", "range": "f1 f1"}))
    code, out, _ = run(capsys, "phi", "--element", str(blob), "--symbolic")
    assert code == 0 and out.strip() == "alpha^4"


def test_family_literals(capsys):
    code, out, _ = run(capsys, "element", "reduce", "k_1")
    assert code == 0
    assert out.strip() == format_element_literal(family_kn(1))
