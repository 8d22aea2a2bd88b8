"""Command-line interface: outputs, exit codes, determinism."""

import json

import pytest

from ramasum.cli import main, _parse_grid, _no_growth
import ramasum.cli as cli_mod


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# crn


@pytest.mark.parametrize("r,n,expected", [(6, 3, "-2"), (1, 0, "1"), (5, 5, "4")])
def test_crn_values(capsys, r, n, expected):
    code, out, _ = run(["crn", str(r), str(n)], capsys)
    assert code == 0
    assert out.strip() == expected


def test_crn_rejects_bad_modulus(capsys):
    code, _, err = run(["crn", "0", "3"], capsys)
    assert code == 2
    assert "r >= 1" in err


# ---------------------------------------------------------------------------
# parseval


def test_parseval_stdout_csv(capsys):
    code, out, _ = run(["parseval", "--pair", "sigma", "--s", "1", "--t", "1",
                        "--h", "2", "--grid", "1e3,2e3"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("N,h,s,t,actual")
    assert len(lines) == 3
    assert lines[1].startswith("1000,2,1,1,")


def test_parseval_out_file_and_summary(tmp_path, capsys):
    path = tmp_path / "report.csv"
    code, out, _ = run(["parseval", "--pair", "sigma", "--h", "2",
                        "--grid", "1e3,2e3", "--out", str(path)], capsys)
    assert code == 0
    assert path.exists()
    assert "rel_err" in out
    assert "crosscheck_constant" in out


def test_parseval_json_document(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, _, _ = run(["parseval", "--pair", "jordan", "--s", "1", "--t", "1",
                      "--h", "1", "--grid", "1e3", "--format", "json",
                      "--out", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == "1"
    assert "crosscheck_constant" in doc
    assert doc["crosscheck_diff"] <= 1e-6
    assert doc["experiment"]["pair"] == "jordan"


def test_parseval_empty_grid_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["parseval", "--grid", ""])
    assert exc.value.code == 2


def test_parseval_large_grid_needs_flag(capsys):
    code, _, err = run(["parseval", "--grid", "1e3,2e7"], capsys)
    assert code == 2
    assert "--allow-large" in err


def test_parseval_determinism_across_threads(tmp_path, capsys):
    paths = []
    for threads in ("1", "64"):
        p = tmp_path / f"t{threads}.csv"
        code, _, _ = run(["parseval", "--pair", "sigma", "--h", "2",
                          "--grid", "1e3,3e3", "--threads", threads,
                          "--out", str(p)], capsys)
        assert code == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_grid_parser():
    assert _parse_grid("1e4,1e5") == [10000, 100000]
    assert _parse_grid("7") == [7]
    with pytest.raises(Exception):
        _parse_grid("5,4")
    with pytest.raises(Exception):
        _parse_grid("2.5")
    with pytest.raises(Exception):
        _parse_grid("")


# ---------------------------------------------------------------------------
# verify


def test_verify_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2


def test_verify_lemma1_passes(capsys):
    code, out, _ = run(["verify", "lemma1"], capsys)
    assert code == 0
    assert "[PASS] lemma1 h=0" in out


def test_verify_mertens_with_csv(tmp_path, capsys):
    code, out, _ = run(["verify", "mertens", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "[PASS] mertens" in out
    assert (tmp_path / "mertens.csv").exists()


def test_verify_limit_guard(capsys):
    code, _, err = run(["verify", "phi", "--limit", "100"], capsys)
    assert code == 2
    assert "--limit" in err


def test_verify_all_aggregates_exit_codes(capsys, monkeypatch):
    calls = []

    def good(limit, outdir):
        calls.append("good")
        return True, ["fine"]

    def bad(limit, outdir):
        calls.append("bad")
        return False, ["broken"]

    monkeypatch.setattr(cli_mod, "_SUITE_FNS", {"a": good, "b": bad})
    code, out, _ = run(["verify", "all"], capsys)
    assert code == 1
    assert calls == ["good", "bad"]
    assert "[PASS] fine" in out and "[FAIL] broken" in out

    monkeypatch.setattr(cli_mod, "_SUITE_FNS", {"a": good})
    code, _, _ = run(["verify", "all"], capsys)
    assert code == 0


def test_no_growth_helper():
    assert _no_growth([5.0, 4.0, 3.0], 1.1)
    assert _no_growth([1.0, 1.05, 1.02], 1.1)
    assert not _no_growth([1.0, 2.0], 1.1)
    assert _no_growth([0.0, 0.0], 1.1)
    # decreases never count against stability
    assert _no_growth([1.0, 0.001, 0.9], 1.1)
