from qfano.cli import (
    EXIT_INTERNAL,
    EXIT_MISSING_INPUT,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_USAGE, EXIT_MISSING_INPUT, EXIT_INTERNAL}) == 4
    assert EXIT_OK == 0


def test_invalid_index_is_usage_error(capsys):
    assert main(["enumerate", "--q", "20"]) == EXIT_USAGE
    assert "invalid choice" in capsys.readouterr().err


def test_enumerate_requires_scope(capsys):
    assert main(["enumerate"]) == EXIT_USAGE
    capsys.readouterr()


def test_missing_database_file(capsys):
    assert main(["table", "--case", "q5", "--db", "/nonexistent/db.json"]) == (
        EXIT_MISSING_INPUT
    )
    assert "not found" in capsys.readouterr().err


def test_enumerate_single_index_table(capsys):
    assert main(["enumerate", "--q", "6", "--format", "table"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "q6-7.3-a2.7" in out
    assert "[7:3]" in out


def test_enumerate_writes_database_with_summary(tmp_path, capsys):
    db_file = tmp_path / "q6.json"
    assert main(["enumerate", "--q", "6", "--db", str(db_file)]) == EXIT_OK
    out = capsys.readouterr().out
    assert db_file.exists()
    # no --format requested: a summary line only, not a rendered table
    assert "11 candidates" in out
    assert "[7:3]" not in out


def test_table_from_stored_database(db_path, capsys):
    assert main(["table", "--case", "q5", "--db", str(db_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "index 5 survey" in out
    assert "(2)" in out  # orientation decorations are collapsed in surveys
    assert "(2,2,3,6)" in out
    assert "1/2" in out


def test_table_all_cases_render(db_path, capsys):
    for case in ("q3", "q4", "q6", "q7", "q8"):
        assert main(["table", "--case", case, "--db", str(db_path)]) == EXIT_OK
        assert capsys.readouterr().out.strip()


def test_facts_pass_on_stored_database(db_path, capsys):
    assert main(["facts", "--db", str(db_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 5
    assert "FAIL" not in out


def test_wps_check_finds_the_match(db_path, capsys):
    code = main(
        ["wps", "check", "--weights", "1,1,2,3", "--db", str(db_path)]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "P(1,1,2,3)" in out
    assert "fano index q = 7" in out
    assert "match: q7-2.1_3.1-a1.6" in out

    code = main(["wps", "check", "--weights", "1,1,1,2", "--db", str(db_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "fano index q = 5" in out
    assert "match: q5-2.1-a1.2" in out


def test_wps_check_hypersurface(db_path, capsys):
    code = main(
        [
            "wps", "check",
            "--weights", "1,2,3,4,5",
            "--degree", "6",
            "--db", str(db_path),
        ]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "X6 in P(1,2,3,4,5)" in out
    assert "match: q9-2.1_4.1_5.2-a1.20" in out


def test_wps_check_rejects_bad_weights(capsys):
    assert main(["wps", "check", "--weights", "1,zero,3"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["wps", "check", "--weights", "1,2,3,4", "--degree", "99"]) == (
        EXIT_USAGE
    )
    capsys.readouterr()


def test_link_solve_packaged_case(db_path, capsys):
    assert main(["link", "solve", "q9_4A.case", "--db", str(db_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "feasible qhat values: {5, 6, 7, 8}" in out


def test_link_solve_eliminated_case(db_path, capsys):
    assert main(["link", "solve", "q6_basket7.case", "--db", str(db_path)]) == (
        EXIT_OK
    )
    out = capsys.readouterr().out
    assert "none -- case eliminated" in out


def test_link_solve_missing_case_file(capsys):
    assert main(["link", "solve", "/nonexistent/foo.case"]) == EXIT_MISSING_INPUT
    capsys.readouterr()


def test_export_csv(db_path, tmp_path, capsys):
    out_file = tmp_path / "dump.csv"
    code = main(
        ["export", "--db", str(db_path), "--format", "csv", "--out", str(out_file)]
    )
    assert code == EXIT_OK
    capsys.readouterr()
    lines = out_file.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0].startswith("id,")
    assert len(lines) == 1 + 472


def test_diff_reports_filter_effects(capsys):
    assert main(["diff", "--q", "6", "--flag", "enforce_vanishing"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "enforce_vanishing" in out
    assert "removes" in out and "adds" in out
