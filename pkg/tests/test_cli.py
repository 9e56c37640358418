import csv
import json

import pytest

from newtonreg.cli import main


def test_example1_writes_csv(tmp_path):
    out = tmp_path / "ex1.csv"
    rc = main(["example1", "--delta", "1e-2", "--seeds", "0,1", "--m", "40",
               "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2
    assert float(rows[0]["ratio"]) * (1e-2) ** 0.5 == pytest.approx(float(rows[0]["error"]),
                                                                    rel=1e-12)


def test_example1_json_stdout(capsys):
    rc = main(["example1", "--delta", "1e-2", "--seed", "0", "--m", "30",
               "--format", "json"])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["seed"] == 0


def test_example2_dump_solution(tmp_path):
    out = tmp_path / "ex2.csv"
    dump = tmp_path / "solution.csv"
    rc = main(["example2", "--delta", "1e-2", "--seed", "0", "--m", "30",
               "--out", str(out), "--dump-solution", str(dump)])
    assert rc == 0
    rows = list(csv.DictReader(dump.open()))
    assert len(rows) == 30
    assert set(rows[0]) == {"node", "c_true", "c_initial", "c_recovered"}


def test_verify_filters(capsys):
    rc = main(["verify-filters", "--n-max", "6"])
    assert rc == 0
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 4
    for entry in entries:
        assert entry["max_g1_violation"] <= 1e-12
        assert entry["cross_path_relative_gap"] <= 1e-8


def test_audit_schedule_geometric(capsys):
    rc = main(["audit-schedule", "--alpha0", "1", "--ratio-r", "0.5", "--n-max", "20"])
    assert rc == 0
    result = json.loads(capsys.readouterr().out)
    assert result["satisfies_60"] is True
    assert result["satisfies_geometric_bracket"] is True


def test_audit_schedule_explicit(capsys):
    rc = main(["audit-schedule", "--explicit", "1,1,1,1,1,1,1,1", "--n-max", "7"])
    assert rc == 0
    result = json.loads(capsys.readouterr().out)
    assert result["satisfies_60"] is True
    assert result["satisfies_geometric_bracket"] is False


def test_source_check_both_guesses(capsys):
    rc = main(["source-check", "--example", "1", "--m", "60"])
    assert rc == 0
    smooth = json.loads(capsys.readouterr().out)
    rc = main(["source-check", "--example", "2", "--m", "60"])
    assert rc == 0
    rough = json.loads(capsys.readouterr().out)
    assert rough["omega_norm_estimate"] > smooth["omega_norm_estimate"]


def test_bad_subcommand_exits_nonzero():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_solver_error_reports_json(capsys):
    rc = main(["example1", "--delta", "1e-2", "--seed", "0", "--m", "20",
               "--ratio-r", "1.5"])
    assert rc == 1
    err = json.loads(capsys.readouterr().err)
    assert "message" in err


def test_row_level_failures_are_recorded_not_fatal(capsys):
    # Landweber at alpha0 > 1 fails inside the solve; the sweep continues
    rc = main(["example1", "--delta", "1e-2", "--seed", "0", "--m", "20",
               "--alpha0", "4.0", "--format", "json"])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["n_delta"] == -1
