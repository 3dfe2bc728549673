import csv
import io
import json

import pytest

from stratsum.cli import EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_OK, EXIT_USAGE, main, select_h
from stratsum.corpus import CORPUS
from stratsum.poly import analyze_form, parse_poly

RECORD_KEYS = ["p", "h", "h_mod_p", "S_re", "S_im", "S_abs", "equal_exact", "W_count", "bound", "j_min", "exponent", "pass"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_conic_p3_exhaustive(capsys):
    code, out, _ = run(capsys, "verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "3", "--h", "all", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert list(doc["run"]) == ["poly", "nvars", "p", "kmax", "seed"]
    assert len(doc["records"]) == 81
    assert all(r["equal_exact"] and r["pass"] for r in doc["records"])
    assert list(doc["records"][0]) == RECORD_KEYS


@pytest.mark.parametrize(
    "poly, n, p",
    [("x1^3+x2^3+x3^3", "3", "3"), ("x1^2+x2^2", "2", "2"), ("x1^2*x3 + x2^3", "3", "5")],
)
def test_hypothesis_failures_exit_2(capsys, poly, n, p):
    code, _, err = run(capsys, "verify", "--poly", poly, "--nvars", n, "--p", p, "--h", "0,0" if n == "2" else "0,0,0")
    assert code == EXIT_HYPOTHESIS
    assert "hypotheses fail" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--poly", "x1^2 + x3", "--nvars", "2", "--p", "5"],
        ["verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "5", "--h", "random:10"],
        ["strata", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "5,3"],
        ["strata", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "4"],
        ["verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "5", "--h", "1,2,3"],
        ["verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "5", "--format", "xml"],
        ["count", "--poly", "x1^2+x2^2", "--nvars", "2"],
    ],
)
def test_usage_errors_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == EXIT_USAGE


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "count", "--poly", "x1^2 + x3", "--nvars", "2", "--p", "5")
    assert code == EXIT_USAGE and "position 7" in err


def test_csv_mirrors_json(capsys):
    base = ["verify", "--poly", "x1^3+x2^3", "--nvars", "2", "--p", "5", "--h", "random:30", "--seed", "4"]
    _, js, _ = run(capsys, *base, "--format", "json")
    _, cs, _ = run(capsys, *base, "--format", "csv")
    recs = json.loads(js)["records"]
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert list(rows[0]) == RECORD_KEYS
    assert len(rows) == len(recs)
    for r, j in zip(rows, recs):
        assert r["h"] == " ".join(map(str, j["h"]))
        assert float(r["S_abs"]) == j["S_abs"]
        assert r["pass"] == str(j["pass"])


@pytest.mark.slow
def test_output_independent_of_thread_count(capsys, tmp_path):
    outs = []
    for threads in ("1", "3"):
        path = tmp_path / f"out{threads}.json"
        code = main(["verify", "--poly", "x1^2x2 + x2^2x3 + x3^2x1", "--nvars", "3", "--p", "5",
                     "--h", "random:300", "--seed", "9", "--threads", threads, "--format", "json", "--out", str(path)])
        assert code == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_thread_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("STRATSUM_THREADS", "2")
    code, out, _ = run(capsys, "verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "3", "--format", "csv")
    assert code == EXIT_OK and len(out.splitlines()) == 82
    monkeypatch.setenv("STRATSUM_THREADS", "zero")
    code, _, _ = run(capsys, "verify", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "3")
    assert code == EXIT_USAGE


def test_count_conic_p5(capsys):
    code, out, _ = run(capsys, "count", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "5", "--format", "json")
    assert code == EXIT_OK
    row = json.loads(out)["counts"][0]
    assert (row["N1"], row["N2_enum"], row["N2_formula"], row["agree"]) == (9, 65, 65, True)
    assert row["weil_deviation"] == pytest.approx(4 / 5**0.5, abs=1e-9)


def test_strata_single_prime_has_no_codim(capsys):
    code, out, _ = run(capsys, "strata", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "7", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["codim"] is None
    assert doc["tables"][0]["sizes"] == [49, 1, 0]


def test_strata_fermat_series(capsys):
    code, out, _ = run(capsys, "strata", "--poly", "x1^3+x2^3+x3^3", "--nvars", "3", "--p", "5,7", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["codim"]["pass"]


def test_strata_conic_series_with_split_prime_fails(capsys):
    # at p = 5 the conic splits into two rational lines and #G_1 jumps to 9
    code, out, _ = run(capsys, "strata", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "3,5,7,11", "--format", "json")
    doc = json.loads(out)
    assert [t["sizes"][1] for t in doc["tables"]] == [1, 9, 1, 1]
    assert code == EXIT_FAIL


def test_human_format_runs(capsys):
    code, out, _ = run(capsys, "strata", "--poly", "x1^2+x2^2", "--nvars", "2", "--p", "3,7")
    assert code == EXIT_OK and "codimension check: pass" in out


def test_corpus_listing(capsys):
    code, out, _ = run(capsys, "corpus", "--format", "json")
    forms = json.loads(out)["forms"]
    assert code == EXIT_OK and len(forms) >= 6
    assert {f["nvars"] for f in forms} >= {2, 3}


@pytest.mark.parametrize("form", CORPUS, ids=lambda c: c.name)
def test_corpus_primes_satisfy_hypotheses(form):
    F = parse_poly(form.text, form.nvars)
    for p in form.primes:
        assert analyze_form(F, p, 2).hypotheses_ok, (form.name, p)


def test_default_sampling_for_large_cases():
    hs, seed = select_h(None, 3, 7, None)
    assert seed == 0
    assert (0, 0, 0) in hs and (0, 48, 0) in hs
    assert hs == sorted(hs)
    assert len(select_h(None, 2, 7, None)[0]) == 49**2
    assert select_h("1,2;1,2;0,50", 2, 7, None)[0] == [(0, 1), (1, 2)]
