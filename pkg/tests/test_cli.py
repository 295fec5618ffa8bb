import pytest

from tpspower.cli import load_config_file, main


def test_tables_command(tmp_path, capsys):
    rc = main(["tables", "--n-list", "16,32", "--mu-list", "1,3",
               "--out", str(tmp_path), "--deterministic"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "table1.csv" in out and "table3.csv" in out
    assert (tmp_path / "table1.csv").exists()


def test_failed_column_sets_exit_code(tmp_path, capsys):
    rc = main(["tables", "--n-list", "16", "--mu-list", "1,9/2",
               "--out", str(tmp_path)])
    assert rc == 1
    captured = capsys.readouterr()
    assert "column mu=9/2" in captured.err
    assert "table1.csv" in captured.out  # healthy column still emitted


def test_profile_command(tmp_path):
    rc = main(["profile", "--kind", "mixed3", "--n", "16", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "profile_mixed3_n16.csv").exists()


def test_interp_demo_command(tmp_path):
    rc = main(["interp-demo", "--target", "linear", "--n-list", "16,32",
               "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "interp_linear.csv").exists()


def test_peano_table_and_lebesgue_commands(tmp_path):
    assert main(["peano-table", "--n-list", "16,32", "--out", str(tmp_path)]) == 0
    assert main(["lebesgue", "--n-list", "16,32", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "table5.csv").exists()
    assert (tmp_path / "lebesgue.csv").exists()


def test_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["profile", "--kind", "wrong", "--n", "16", "--out", str(tmp_path)])
    assert err.value.code == 2
    with pytest.raises(SystemExit):
        main([])  # a subcommand is required


def test_invalid_n_list_reports_error(tmp_path, capsys):
    rc = main(["tables", "--n-list", "32,16", "--out", str(tmp_path)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# experiment settings\n"
        "n_list = 16,32\n"
        "mu_list = 1,3\n"
        "threads = 1\n"
        "deterministic = yes\n"
        "eval_density = 4\n"
        f"out = {tmp_path / 'from_config'}\n"
    )
    values = load_config_file(cfg)
    assert values["n_list"] == "16,32"
    rc = main(["tables", "--config", str(cfg)])
    assert rc == 0
    assert (tmp_path / "from_config" / "table1.csv").exists()


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"n_list = 16,32\nmu_list = 1\nout = {tmp_path / 'a'}\n")
    rc = main(["tables", "--config", str(cfg), "--out", str(tmp_path / "b")])
    assert rc == 0
    assert (tmp_path / "b" / "table1.csv").exists()
    assert not (tmp_path / "a").exists()


def test_bad_config_file_lines(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("not a setting\n")
    with pytest.raises(ValueError):
        load_config_file(cfg)
    cfg.write_text("mystery = 3\n")
    with pytest.raises(ValueError):
        load_config_file(cfg)
