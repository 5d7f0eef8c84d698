import pytest

from kaclab.cli import build_parser, main, parse_config


def test_minimal_flags():
    args = build_parser().parse_args(["slln", "--law", "gaussian", "--seed", "42", "--nmax", "4096"])
    slln, audit = parse_config(args)
    assert slln.law == "gaussian" and slln.master_seed == 42 and slln.n_max == 4096
    assert slln.trials == 1 and audit.trials == 1000


def test_trials_zero_is_config_error(tmp_path, capsys):
    assert main(["tail0", "--trials", "0", "--out", str(tmp_path)]) == 2
    assert "trials" in capsys.readouterr().err


def test_unknown_key_in_config(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[tail0]\nlaw = rademacher\nwobble = 1\n")
    assert main(["tail0", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "wobble" in capsys.readouterr().err


def test_outputs_and_manifest_rerun(tmp_path, monkeypatch):
    monkeypatch.setenv("KACLAB_OUT", str(tmp_path / "env"))
    code = main(["tail0", "--law", "three_point:q0=0.5", "--trials", "2000", "--nmax", "32"])
    out = tmp_path / "env"
    assert code == 0
    for name in ("records.csv", "summary.txt", "manifest.txt", "plots/tail0_survival.csv"):
        assert (out / name).exists()
    manifest = (out / "manifest.txt").read_text()
    assert "[manifest]" in manifest and "exit_status = 0" in manifest
    again = tmp_path / "again"
    assert main(["tail0", "--config", str(out / "manifest.txt"), "--workers", "2", "--out", str(again)]) == 0
    assert (again / "records.csv").read_bytes() == (out / "records.csv").read_bytes()


def test_failing_verdict_exit_code(tmp_path):
    # a slope band that cannot contain log 2
    cfg = tmp_path / "c.ini"
    cfg.write_text("[tail0]\nlaw = three_point:q0=0.5\ntrials = 2000\ndegrees = 32\nslope_lo = 5\nslope_hi = 6\n")
    assert main(["tail0", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert "kaclab" in capsys.readouterr().out
