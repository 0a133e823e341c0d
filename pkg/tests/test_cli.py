import json

import pytest

from catalankit.cli import ReportDocument, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json_one_row(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "dim3", "--format", "json", "--no-timestamp")
    doc = json.loads(out)
    assert code == 0
    assert [r["case"] for r in doc["cases"]] == ["dim3"]
    assert doc["cases"][0]["pass"] is True
    assert doc["summary"] == {"total": 1, "passed": 1, "failed": 0}
    assert doc["reference_G"] == "0.915965594177219015054603514932"
    assert set(doc["cases"][0]) == {"case", "method", "value", "expected", "abs_error",
                                    "error_estimate", "evaluations", "seed", "pass"}


def test_verify_markdown_full(capsys):
    code, out, _ = run(capsys, "verify", "--format", "markdown", "--no-timestamp")
    assert code == 0
    total = out.count("| PASS |")
    assert f"passed {total}/{total}" in out
    assert "qmc_samples=1048576" in out


def test_verify_no_match(capsys):
    code, out, err = run(capsys, "verify", "--filter", "nomatch", "--format", "json", "--no-timestamp")
    assert code == 0
    assert json.loads(out)["summary"]["total"] == 0
    assert "warning" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from decimal import Decimal

    import catalankit.cli as cli
    from catalankit.representations import default_cases, with_expected

    def corrupted():
        return [with_expected(c, Decimal("0.5")) if c.name == "single_cauchy" else c
                for c in default_cases()]

    monkeypatch.setattr(cli, "default_cases", corrupted)
    code, out, err = run(capsys, "verify", "--filter", "single_*", "--format", "csv")
    assert code == 1
    assert "single_cauchy" in err


def test_verify_csv_precision(capsys):
    import csv
    import io

    code, out, _ = run(capsys, "verify", "--filter", "single_cauchy", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out), delimiter=","))
    rows = list(csv.DictReader(line for line in io.StringIO(out) if not line.startswith("#")))
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["value"]) == pytest.approx(0.915965594177219, abs=1e-9)
    assert len(rows[0]["expected"].replace("0.", "", 1)) >= 16


def test_report_deterministic_and_roundtrip(capsys):
    argv = ("verify", "--filter", "dim[345]", "--format", "json", "--no-timestamp", "--samples", "16384")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = ReportDocument.from_json(first)
    assert doc.to_json() == first.rstrip("\n")
    assert doc.summary["total"] == len(doc.cases) == 3
    assert doc.engine["qmc_samples"] == 16384


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(capsys, "verify", "--filter", "single_cauchy", "--format", "json")
    assert "timestamp" in json.loads(out)


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("CATALANKIT_THREADS", "0")
    code, out, _ = run(capsys, "verify", "--filter", "double_*", "--format", "json", "--no-timestamp")
    monkeypatch.setenv("CATALANKIT_THREADS", "1")
    code1, out1, _ = run(capsys, "verify", "--filter", "double_*", "--format", "json", "--no-timestamp")
    assert code == code1 == 0 and out == out1


def test_integrate_double(capsys):
    code, out, _ = run(capsys, "integrate", "--rep", "double", "--cdf1", "cauchy",
                       "--cdf2", "rademacher", "--a", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["abs_error_vs_G"] < 1e-8
    assert data["method"] == "tensor"


def test_integrate_single_text(capsys):
    code, out, _ = run(capsys, "integrate", "--rep", "single", "--cdf", "normal")
    assert code == 0
    assert "0.91596559417" in out and "evaluations" in out


def test_integrate_multi_param_cdf(capsys):
    code, out, _ = run(capsys, "integrate", "--rep", "multi", "--r", "3",
                       "--cdf", "u_quadratic:alpha=2", "--a", "2", "--a", "0.25", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["abs_error_vs_G"] < 1e-6


@pytest.mark.slow
def test_integrate_multi_r10(capsys):
    code, out, _ = run(capsys, "integrate", "--rep", "multi", "--r", "10",
                       "--samples", "4194304", "--seed", "42", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["seed"] == 42 and data["evaluations"] == 4194304
    assert data["abs_error_vs_G"] <= 4 * data["error_estimate"]


@pytest.mark.parametrize("argv", [
    ("integrate", "--rep", "single", "--cdf", "bogus"),
    ("integrate", "--rep", "multi", "--r", "3", "--cdf", "normal", "--cdf", "cauchy"),
    ("integrate", "--rep", "multi", "--r", "13"),
    ("integrate", "--rep", "double", "--a", "-1"),
    ("lerch", "--n", "33"),
    ("verify", "--format", "yaml"),
    ("verify", "--format", "text"),
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == 2


def test_lerch_latex(capsys):
    assert run(capsys, "lerch", "--n", "2", "--emit", "latex")[1].strip() == r"\frac{1-6z+z^2}{4(1+z)^3}"


def test_lerch_coeffs(capsys):
    assert run(capsys, "lerch", "--n", "0", "--emit", "coeffs")[1].strip() == "1 / 1·(1+z)^1"
    out = run(capsys, "lerch", "derive", "--n", "7", "--emit", "coeffs")[1]
    assert out.startswith("1, -2179, 60657, -259723, 259723, -60657, 2179, -1 /")


def test_lerch_json(capsys):
    data = json.loads(run(capsys, "lerch", "derive", "--n", "1", "--emit", "json")[1])
    assert data == {"n": 1, "scale": "2", "pole_order": 2, "numerator": ["1", "-1"]}
