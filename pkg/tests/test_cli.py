"""End-to-end command line runs: exit codes, overrides, determinism."""

import json

import pytest

from matgrouplab.cli import main


def run_cli(args):
    return main(list(args))


def test_no_subcommand_prints_help(capsys):
    assert run_cli([]) == 2
    assert "matgrouplab" in capsys.readouterr().out


def test_version_flag():
    with pytest.raises(SystemExit) as info:
        run_cli(["--version"])
    assert info.value.code == 0


def test_ball_run_writes_report(tmp_path, capsys):
    out = tmp_path / "ball"
    code = run_cli(
        ["ball", "--out", str(out), "--set", "radius=3", "--no-figures"]
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert payload["outputs"]["counts"] == [1, 5, 17, 53]
    assert (out / "growth.csv").exists()
    assert (out / "bundle.json").exists()
    text = capsys.readouterr().out
    assert "kind = ball" in text and "status = ok" in text


def test_quiet_prints_only_the_directory(tmp_path, capsys):
    out = tmp_path / "q"
    code = run_cli(
        ["ball", "--out", str(out), "--set", "radius=2", "--no-figures", "--quiet"]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == str(out)


def test_format_json_skips_csv(tmp_path):
    out = tmp_path / "j"
    code = run_cli(
        ["ball", "--out", str(out), "--set", "radius=2", "--format", "json", "--no-figures"]
    )
    assert code == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["bundle.json", "report.json"]


def test_figures_rendered_by_default(tmp_path):
    out = tmp_path / "fig"
    code = run_cli(["ball", "--out", str(out), "--set", "radius=3"])
    assert code == 0
    assert (out / "ball_growth.png").stat().st_size > 1000


def test_set_values_parse_as_json(tmp_path):
    out = tmp_path / "walk"
    code = run_cli(
        [
            "walk",
            "--out",
            str(out),
            "--set",
            "lengths=[4, 6]",
            "--set",
            "trials=10",
            "--set",
            "gens=sl2",
            "--no-figures",
            "--quiet",
        ]
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert payload["params"]["lengths"] == [4, 6]
    assert payload["outputs"]["total_trials"] == 20


def test_unknown_key_is_a_usage_error(tmp_path, capsys):
    code = run_cli(["ball", "--out", str(tmp_path), "--set", "radiu=3"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_set_is_a_usage_error(tmp_path, capsys):
    code = run_cli(["ball", "--out", str(tmp_path), "--set", "radius"])
    assert code == 2
    assert "--set" in capsys.readouterr().err


def test_manifest_kind_must_match_subcommand(tmp_path, capsys):
    man = tmp_path / "m.txt"
    man.write_text("kind = ball\nradius = 2\n")
    code = run_cli(
        ["expander", "--manifest", str(man), "--out", str(tmp_path / "x")]
    )
    assert code == 2
    assert "does not match" in capsys.readouterr().err


def test_manifest_file_drives_the_run(tmp_path):
    man = tmp_path / "m.json"
    man.write_text('{"kind": "ball", "radius": 2, "relations_max_len": 4}\n')
    out = tmp_path / "r"
    code = run_cli(
        ["ball", "--manifest", str(man), "--out", str(out), "--no-figures", "--quiet"]
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert payload["outputs"]["free_up_to"] == 4


def test_cap_exceeded_exit_code(tmp_path, capsys):
    code = run_cli(
        [
            "ball",
            "--out",
            str(tmp_path),
            "--set",
            "radius=8",
            "--cap-elements",
            "40",
            "--no-figures",
        ]
    )
    assert code == 3
    assert "cap" in capsys.readouterr().err


def test_partial_scan_exit_code(tmp_path, capsys):
    # SL2(7) has order 336: a cap of 50 turns that row into an error.
    out = tmp_path / "p"
    code = run_cli(
        [
            "expander",
            "--out",
            str(out),
            "--set",
            "q_min=7",
            "--set",
            "q_max=7",
            "--cap-elements",
            "50",
            "--no-figures",
        ]
    )
    assert code == 1
    payload = json.loads((out / "report.json").read_text())
    assert payload["status"] == "partial"
    assert payload["outputs"]["error_count"] == 1


def test_env_var_sets_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("MATGROUPLAB_OUT", str(tmp_path / "envroot"))
    code = run_cli(["ball", "--set", "radius=2", "--no-figures", "--quiet"])
    assert code == 0
    assert (tmp_path / "envroot" / "ball" / "report.json").exists()


def test_default_output_directory_is_under_cwd(tmp_path, monkeypatch):
    monkeypatch.delenv("MATGROUPLAB_OUT", raising=False)
    monkeypatch.chdir(tmp_path)
    code = run_cli(["ball", "--set", "radius=2", "--no-figures", "--quiet"])
    assert code == 0
    assert (tmp_path / "matgrouplab_out" / "ball" / "report.json").exists()


def test_reruns_and_thread_counts_are_byte_identical(tmp_path):
    base = [
        "expander",
        "--set",
        "q_min=3",
        "--set",
        "q_max=11",
        "--seed",
        "5",
        "--no-figures",
    ]
    dirs = []
    for name, threads in (("a", "1"), ("b", "1"), ("c", "2")):
        out = tmp_path / name
        code = run_cli(base + ["--threads", threads, "--out", str(out), "--quiet"])
        assert code == 0
        dirs.append(out)
    ref_report = (dirs[0] / "report.json").read_bytes()
    ref_csv = (dirs[0] / "spectra.csv").read_bytes()
    for d in dirs[1:]:
        assert (d / "report.json").read_bytes() == ref_report
        assert (d / "spectra.csv").read_bytes() == ref_csv
