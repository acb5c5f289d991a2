import csv
import json
import math

import jsonschema
import pytest

from celdist.cli import DEFAULT_SEED, main
from celdist.report import ReportDocument, load_schema

VALIDATOR = jsonschema.Draft202012Validator(load_schema())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    VALIDATOR.validate(doc)
    assert doc["inputs"]["argv"] == list(argv)
    return doc


def test_fit_cel_fixture(capsys):
    doc = report(capsys, "fit", "fixtures/insulating_fluid_34kv.txt", "--dist", "cel")
    r = doc["results"]
    assert r["estimates"][0] == pytest.approx(7.0385, abs=5e-4)
    assert r["neg2ll"] == pytest.approx(137.976, abs=5e-3)
    assert r["ci_lower"] < r["estimates"][0] < r["ci_upper"]
    ds = doc["inputs"]["dataset"]
    assert ds["n"] == 19 and len(ds["checksum"]) == 16
    assert doc["inputs"]["flags"]["dist"] == "cel"


def test_fit_el_fixture(capsys):
    doc = report(capsys, "fit", "air_conditioning", "--dist", "el")
    b, p = doc["results"]["estimates"]
    assert b == pytest.approx(0.0111, abs=1e-4)
    assert p == pytest.approx(0.1932, abs=0.01)


def test_fit_writes_out_and_csv(capsys, tmp_path):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code, stdout, _ = run(capsys, "fit", "air_conditioning", "--out", str(out), "--csv", str(table))
    assert code == 0 and stdout == ""
    doc = ReportDocument.from_json(out.read_text())
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 1
    assert float(rows[0]["p1"]) == doc.results["estimates"][0]


def test_compare_subset_json_matches_csv(capsys, tmp_path):
    table = tmp_path / "c.csv"
    plots = tmp_path / "plots"
    doc = report(capsys, "compare", "air_conditioning", "--dist", "cel,gamma",
                 "--csv", str(table), "--plot-data", str(plots))
    rows = doc["results"]["rows"]
    assert {r["family"] for r in rows} == {"CEL", "GAMMA"}
    assert rows[0]["aic"] <= rows[1]["aic"]
    flat = list(csv.DictReader(table.open()))
    assert len(flat) == 2
    for js, cs in zip(rows, flat):
        for key in ("neg2ll", "aic", "bic", "aicc", "ks_stat", "ks_pvalue"):
            assert float(cs[key]) == pytest.approx(js[key], rel=1e-10)
        assert float(cs["p1"]) == pytest.approx(js["estimates"][0], rel=1e-10)
    files = sorted(p.name for p in plots.iterdir())
    assert "ecdf.csv" in files and len(files) == 1 + 4 * 2
    for f in plots.iterdir():
        lines = f.read_text().splitlines()
        assert len(lines) > 2
        assert len(lines[0].split(",")) == 2
        for line in lines[1:]:
            a, b = (float(v) for v in line.split(","))
            assert math.isfinite(a) and math.isfinite(b)


def test_compare_dataset_one_ranking(capsys):
    doc = report(capsys, "compare", "insulating_fluid_34kv")
    rows = doc["results"]["rows"]
    assert len(rows) == 6 and not any(r["failed"] for r in rows)
    aics = [r["aic"] for r in rows]
    assert aics == sorted(aics)
    cel = next(r for r in rows if r["family"] == "CEL")
    assert cel["ks_stat"] == pytest.approx(0.1131, abs=5e-5)
    assert cel["ks_pvalue"] == pytest.approx(0.9458, abs=5e-5)


def test_compare_bootstrap_is_seeded(capsys):
    a = report(capsys, "compare", "insulating_fluid_34kv", "--dist", "cel", "--bootstrap-ks", "20", "--seed", "4")
    b = report(capsys, "compare", "insulating_fluid_34kv", "--dist", "cel", "--bootstrap-ks", "20", "--seed", "4")
    pa = a["results"]["rows"][0]["bootstrap_pvalue"]
    assert pa == b["results"]["rows"][0]["bootstrap_pvalue"]
    assert 0.0 < pa <= 1.0


def test_simulate_is_deterministic(capsys):
    argv = ("simulate", "--theta", "2", "--sizes", "20,50", "--reps", "40", "--seed", "11")
    a = report(capsys, *argv)
    b = report(capsys, *argv)
    a.pop("generated_at"), b.pop("generated_at")
    assert a == b
    s = a["results"]["summaries"]
    assert [x["n"] for x in s] == [20, 50]
    assert all(x["replications"] == 40 for x in s)


def test_default_seed_and_env_override(capsys, monkeypatch):
    doc = report(capsys, "eval", "--fn", "sample", "--theta", "2", "--n", "3")
    assert doc["inputs"]["flags"]["seed"] == DEFAULT_SEED
    monkeypatch.setenv("CEL_SEED", "99")
    env = report(capsys, "eval", "--fn", "sample", "--theta", "2", "--n", "3")
    explicit = report(capsys, "eval", "--fn", "sample", "--theta", "2", "--n", "3", "--seed", "99")
    assert env["inputs"]["flags"]["seed"] == 99
    assert env["results"]["values"] == explicit["results"]["values"] != doc["results"]["values"]
    monkeypatch.setenv("CEL_SEED", "banana")
    assert run(capsys, "eval", "--fn", "median", "--theta", "2")[0] == 2


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("eval", "--fn", "median", "--theta", "2"), [1.4415184401]),
        (("eval", "--fn", "pdf", "--theta", "1", "--x", "0,1"), [1.5, 0.5 * 4 / 8]),
        (("eval", "--fn", "quantile", "--theta", "2", "--u", "0.5"), [1.4415184401]),
        (("eval", "--fn", "renyi", "--theta", "1", "--order", "2"), [0.62860866]),
        (("eval", "--fn", "tsallis", "--theta", "1", "--order", "2"), [-7 / 15]),
    ],
)
def test_eval_values(capsys, argv, expected):
    doc = report(capsys, *argv)
    assert doc["results"]["values"] == pytest.approx(expected, rel=1e-8)


def test_eval_order_statistic_and_moment(capsys):
    doc = report(capsys, "eval", "--fn", "order_cdf", "--theta", "2", "--r", "1", "--n", "1", "--x", "1.0")
    assert doc["results"]["values"][0] == pytest.approx(1 - 4 * 4 / (3 * 9))
    doc = report(capsys, "eval", "--fn", "moment", "--theta", "2", "--r", "0.5")
    assert doc["results"]["values"][0] > 0


@pytest.mark.parametrize(
    "argv, needle",
    [
        (("eval", "--fn", "moment", "--theta", "2", "--r", "1"), "does not exist"),
        (("eval", "--fn", "renyi", "--theta", "2", "--order", "0.5"), "1/2"),
        (("eval", "--fn", "pdf", "--theta", "-1", "--x", "1"), "theta"),
        (("eval", "--fn", "pdf", "--theta", "1"), "--x"),
        (("simulate", "--reps", "1"), "--reps"),
        (("fit", "no/such/file.txt"), "no/such/file.txt"),
        (("fit", "air_conditioning", "--dist", "lognormal"), "lognormal"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert needle in err


def test_bad_input_files_exit_2(capsys, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nabc\n")
    neg = tmp_path / "neg.txt"
    neg.write_text("1\n-1.0\n")
    assert run(capsys, "fit", str(empty))[0] == 2
    code, _, err = run(capsys, "fit", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "compare", str(neg))
    assert code == 2 and "-1.0" in err


def test_argparse_exits(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys)[0] == 2
    assert run(capsys, "simulate", "--seed", "-3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from celdist import cli
    from celdist.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "fit", boom)
    code, out, err = run(capsys, "fit", "air_conditioning")
    assert code == 3 and "forced" in err and out == ""


def test_unexpected_error_maps_to_3(capsys, monkeypatch):
    from celdist import cli

    monkeypatch.setattr(cli, "fit", lambda *a, **k: 1 / 0)
    assert run(capsys, "fit", "air_conditioning")[0] == 3
    monkeypatch.setattr(cli, "fit", lambda *a, **k: {}["missing"])
    assert run(capsys, "fit", "air_conditioning")[0] == 3


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "celdist", "eval", "--fn", "median", "--theta", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["results"]["values"][0] == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0, rel=1e-12)


def test_simulate_workers_flag(capsys):
    base = ("simulate", "--sizes", "15", "--reps", "30", "--seed", "2")
    one = report(capsys, *base, "--workers", "1")
    three = report(capsys, *base, "--workers", "3")
    assert one["results"] == three["results"]
    assert run(capsys, *base, "--workers", "0")[0] == 2
