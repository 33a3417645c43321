import csv
import io

import pytest

from humbert.cli import build_parser, cmd_bounds, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, list(csv.DictReader(io.StringIO(out))), err


def test_eval_origin(capsys):
    code, rows, _ = run(["eval", "--a", "1", "--b", "0.5", "--c", "1/3", "--cp", "1/4", "--x", "0", "--y", "0"], capsys)
    assert code == 0
    assert float(rows[0]["re"]) == 1 and float(rows[0]["im"]) == 0
    assert set(rows[0]) == {"method", "re", "im", "err_estimate", "terms_used", "warnings"}


def test_eval_cross_method(capsys):
    code, rows, _ = run(["eval", "--x", "-10", "--y", "20", "--method", "all"], capsys)
    assert code == 0
    by = {r["method"]: float(r["re"]) for r in rows}
    assert abs(by["laplace"] / by["thm11_series"] - 1) < 1e-8
    assert "thm12" in by


def test_eval_outside_domain(capsys):
    code, rows, err = run(["eval", "--x", "1", "--y", "0"], capsys)
    assert code == 2
    assert "outside Psi_1 domain" in err


def test_eval_hypothesis_failure(capsys):
    code, _, err = run(["eval", "--b", "2", "--x", "-10", "--y", "1", "--method", "thm11"], capsys)
    assert code == 2
    assert "a - b" in err


def test_eval_convergence_failure(capsys):
    code, _, err = run(["eval", "--x", "0.5", "--y", "2", "--max-terms", "10", "--method", "double_series"], capsys)
    assert code == 3


def test_out_file(tmp_path, capsys):
    path = tmp_path / "v.csv"
    assert main(["eval", "--x", "0.25", "--y", "1", "--out", str(path)]) == 0
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n") and text.startswith("method,")


def test_parser_rejects_bad_scalar():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["eval", "--x", "1+", "--y", "0"])


def test_converge_slopes(capsys):
    code, rows, _ = run(["converge", "--ray=-1,2", "--t", "50,100,200,400", "--Ks", "1,3"], capsys)
    assert code == 0
    slopes = {int(r["K"]): float(r["slope"]) for r in rows if r["kind"] == "slope"}
    assert abs(slopes[1] + 1) <= 0.4
    assert slopes[3] < slopes[1]


def test_converge_a3_suppressed(capsys):
    code, rows, _ = run(["converge", "--ray=-1,-2", "--t", "400", "--Ks", "1"], capsys)
    assert code == 0
    point = [r for r in rows if r["kind"] == "point"][0]
    assert float(point["a3_share"]) < 1e-20


def test_bounds_deterministic(capsys):
    first = run(["bounds", "--lemma", "2.3", "--samples", "30", "--seed", "7"], capsys)
    second = run(["bounds", "--lemma", "2.3", "--samples", "30", "--seed", "7"], capsys)
    assert first == second
    assert "violations=" in first[2]


def test_bounds_skips_exclusion_zone():
    rows, violations, skipped = cmd_bounds("2.3", 200, 1)
    assert skipped > 0
    assert all(r[-1] == "skipped" for r in rows if r[4] == "")


def test_bounds_growth_lemmas():
    for lemma in ("2.1", "2.3"):
        _, violations, _ = cmd_bounds(lemma, 40, 3)
        assert violations == 0


def test_bounds_sample_count():
    with pytest.raises(ValueError):
        cmd_bounds("2.2", 0, 0)
