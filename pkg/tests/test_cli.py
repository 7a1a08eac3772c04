import json
import re
from fractions import Fraction

import pytest

from covermip.cli import main
from covermip.instances import read_json

# cover encoding of a single-dimension knapsack instance whose optimum is 2:
# two fixed-contribution items and one free item carrying the continuous range
PAPER_COVER_DOC = """{
  "sense": "cover",
  "n": 3,
  "m": 1,
  "v": [[0], [0], [100]],
  "l": [[1], [1], [0]],
  "c": [[1], [1], [1]],
  "d": [1],
  "f": [2, 100, 0]
}
"""

INFEASIBLE_DOC = """{
  "sense": "cover",
  "n": 1,
  "m": 1,
  "v": [[1]],
  "l": [[0]],
  "c": [[1]],
  "d": [1],
  "f": [1]
}
""".replace('"d": [1]', '"d": [1]')


@pytest.fixture
def paper_file(tmp_path):
    path = tmp_path / "paper.json"
    path.write_text(PAPER_COVER_DOC)
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_deterministic(capsys):
    args = ["gen", "--n", "4", "--m", "2", "--seed", "11", "--coeff-max", "9"]
    code1, out1, _ = _run(capsys, args)
    code2, out2, _ = _run(capsys, args)
    assert code1 == code2 == 0
    assert out1 == out2
    inst = read_json(out1)
    assert inst.n == 4 and inst.m == 2


def test_gen_pack_sense(capsys):
    code, out, _ = _run(capsys, ["gen", "--n", "2", "--m", "1", "--seed", "3", "--sense", "pack"])
    assert code == 0
    assert read_json(out).sense == "pack"


def test_solve_exact_paper_value(capsys, paper_file):
    code, out, _ = _run(capsys, ["solve", "--input", paper_file, "--method", "exact"])
    assert code == 0
    report = json.loads(out)
    assert report["value"] == {"num": 2, "den": 1, "decimal": "2"}
    assert report["certified_ratio"] == {"num": 1, "den": 1, "decimal": "1"}


def test_solve_ptas_and_fptas_paper(capsys, paper_file):
    for method in ("ptas", "fptas"):
        code, out, _ = _run(
            capsys, ["solve", "--input", paper_file, "--method", method, "--epsilon", "1/2"]
        )
        assert code == 0
        report = json.loads(out)
        assert Fraction(report["value"]["num"], report["value"]["den"]) <= Fraction(3)


def test_solve_report_value_matches_solution(capsys, paper_file):
    code, out, _ = _run(capsys, ["solve", "--input", paper_file, "--method", "exact"])
    report = json.loads(out)
    inst = read_json(PAPER_COVER_DOC)
    x = [[Fraction(cell) for cell in row] for row in report["solution"]["x"]]
    y = report["solution"]["y"]
    value = sum(
        inst.v[i][j] * x[i][j] for i in range(inst.n) for j in range(inst.m)
    ) + sum(inst.f[i] for i in range(inst.n) if y[i])
    assert value == Fraction(report["value"]["num"], report["value"]["den"])


def test_solve_requires_epsilon(capsys, paper_file):
    code, _, err = _run(capsys, ["solve", "--input", paper_file, "--method", "ptas"])
    assert code == 1
    assert "epsilon" in err


def test_solve_epsilon_zero_usage_error(capsys, paper_file):
    code, _, err = _run(
        capsys, ["solve", "--input", paper_file, "--method", "ptas", "--epsilon", "0"]
    )
    assert code == 1
    assert "positive" in err


def test_solve_zero_optimum_shortcut(capsys, tmp_path):
    doc = json.dumps({
        "sense": "cover", "n": 1, "m": 1,
        "v": [[0]], "l": [[0]], "c": [[2]], "d": [2], "f": [0],
    })
    path = tmp_path / "zero.json"
    path.write_text(doc)
    code, out, _ = _run(capsys, ["solve", "--input", str(path), "--method", "ptas", "--epsilon", "1/2"])
    assert code == 0
    assert json.loads(out)["value"]["num"] == 0


def test_solve_infeasible_exit_two(capsys, tmp_path):
    path = tmp_path / "inf.json"
    path.write_text(json.dumps({
        "sense": "cover", "n": 2, "m": 1,
        "v": [[1], [1]], "l": [[0], [0]], "c": [[1], [1]], "d": [3], "f": [1, 1]
    }))
    code, _, err = _run(capsys, ["solve", "--input", str(path), "--method", "exact"])
    assert code == 2
    assert "infeasible" in err


def test_solve_fptas_rejects_multi_constraint(capsys, tmp_path):
    path = tmp_path / "m2.json"
    path.write_text(json.dumps({
        "sense": "cover", "n": 2, "m": 2,
        "v": [[1, 1], [1, 1]], "l": [[0, 0], [0, 0]],
        "c": [[2, 2], [2, 2]], "d": [2, 2], "f": [1, 1],
    }))
    code, _, err = _run(capsys, ["solve", "--input", str(path), "--method", "fptas", "--epsilon", "1/2"])
    assert code == 1
    assert "m = 1" in err


def test_solve_missing_file(capsys):
    code, _, err = _run(capsys, ["solve", "--input", "/nonexistent.json", "--method", "exact"])
    assert code == 1
    assert "cannot read" in err


def test_emit_hull_matches_golden(capsys, tmp_path):
    out_path = tmp_path / "hull.lp"
    code, out, _ = _run(capsys, [
        "emit", "--kind", "hull-y", "--delta", "5/2", "--sigma", "7/10", "--nu", "3",
        "--output", str(out_path),
    ])
    assert code == 0
    assert "hull-y model:" in out
    from pathlib import Path

    golden = Path(__file__).parent / "golden" / "hull_y.lp"
    assert out_path.read_text() == golden.read_text()


def test_emit_hull_hypothesis_violation(capsys, tmp_path):
    code, _, err = _run(capsys, [
        "emit", "--kind", "hull-y", "--delta", "9", "--sigma", "1/2", "--nu", "2",
        "--output", str(tmp_path / "x.lp"),
    ])
    assert code == 1
    assert "ceil" in err or "nu" in err


def test_emit_perfect_summary_and_size(capsys, tmp_path):
    inst_path = tmp_path / "uniform.json"
    inst_path.write_text(json.dumps({
        "sense": "cover", "n": 3, "m": 1,
        "v": [[4], [2], [1]], "l": [[1], [1], [1]],
        "c": [[3], [3], [3]], "d": [5], "f": [2, 5, 1],
    }))
    out_path = tmp_path / "perfect.lp"
    code, out, _ = _run(capsys, [
        "emit", "--kind", "perfect", "--input", str(inst_path), "--output", str(out_path),
    ])
    assert code == 0
    match = re.match(r"perfect model: (\d+) variables, (\d+) constraints", out)
    assert match
    n = 3
    assert int(match.group(1)) <= 2 * n + (n + 2) * n * n  # O(n^3) concrete cap
    assert out_path.exists()


def test_emit_approx_summary(capsys, tmp_path):
    inst_path = tmp_path / "mkc.json"
    inst_path.write_text(json.dumps({
        "sense": "cover", "eta": 4, "mu": 1,
        "fbar": [9, 7, 3, 2], "vbar": [2], "cbar": [2],
        "wbar": [[3], [4], [2], [1]], "dbar": [6],
    }))
    out_path = tmp_path / "approx.lp"
    code, out, _ = _run(capsys, [
        "emit", "--kind", "approx", "--epsilon", "9/10",
        "--input", str(inst_path), "--output", str(out_path),
    ])
    assert code == 0
    assert re.match(r"approx model: \d+ variables, \d+ constraints, \d+ polyhedra", out)


def test_check_passes(capsys, tmp_path):
    path = tmp_path / "inst.json"
    _, gen_out, _ = _run(capsys, ["gen", "--n", "4", "--m", "1", "--seed", "5", "--coeff-max", "7"])
    path.write_text(gen_out)
    code, out, _ = _run(capsys, ["check", "--input", str(path), "--epsilon", "1/2"])
    assert code == 0
    report = json.loads(out)
    assert report["all_ok"] is True
    assert set(report["methods"]) >= {"exact", "ptas"}


def test_check_epsilon_zero(capsys, paper_file):
    code, _, err = _run(capsys, ["check", "--input", paper_file, "--epsilon", "0"])
    assert code == 1
    assert "positive" in err


def test_unknown_command_usage_error(capsys):
    code, _, err = _run(capsys, ["frobnicate"])
    assert code == 1
