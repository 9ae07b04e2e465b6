import json
import subprocess
import sys

import pytest

from conftest import MINI_CORPUS
from datause import cli

RUN_CONFIG = MINI_CORPUS / "run.toml"
CACHE = MINI_CORPUS / "cache"


def run_cli(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def replay_args(command, out_dir):
    return [command, "--config", str(RUN_CONFIG), "--replay", str(CACHE),
            "--out", str(out_dir)]


def test_compare_index_prints_containment_pair(tmp_path, capsys):
    (tmp_path / "a.json").write_text(json.dumps(["x", "y", "z", "w"]))
    (tmp_path / "b.json").write_text(json.dumps(["x", "y", "z"]))
    code, out, _ = run_cli(["compare-index", "--a", str(tmp_path / "a.json"),
                            "--b", str(tmp_path / "b.json")], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["a_in_b"] == 0.75
    assert report["b_in_a"] == 1.0


def test_compare_index_missing_file_is_stage_failure(tmp_path, capsys):
    code, _, err = run_cli(["compare-index", "--a", str(tmp_path / "nope.json"),
                            "--b", str(tmp_path / "nope.json")], capsys)
    assert code == 1
    assert json.loads(err)["stage"] == "compare-index"


def test_missing_config_is_usage_error(capsys):
    code, _, err = run_cli(["harvest"], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "ConfigMissing"


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["frobnicate"])
    assert excinfo.value.code == 2


def test_detect_without_stage_inputs(tmp_path, capsys):
    code, _, err = run_cli(replay_args("detect", tmp_path / "out"), capsys)
    assert code == 1
    summary = json.loads(err)
    assert summary["error"] == "StageInputMissing"
    assert "papers.json" in summary["detail"]


def test_all_equals_running_stages_in_order(tmp_path, capsys):
    out_all = tmp_path / "via_all"
    out_steps = tmp_path / "via_steps"
    code, _, _ = run_cli(replay_args("all", out_all), capsys)
    assert code == 0
    for stage in cli.STAGES:
        code, _, _ = run_cli(replay_args(stage, out_steps), capsys)
        assert code == 0, stage
    for name in ("presence.csv", "cumulative.csv", "detections.csv",
                 "manifest.json"):
        assert (out_all / name).read_bytes() == (out_steps / name).read_bytes()


def test_replay_outputs_match_all_goldens(tmp_path, capsys):
    from conftest import GOLDEN_DIR

    out = tmp_path / "out"
    code, _, _ = run_cli(replay_args("all", out), capsys)
    assert code == 0
    # tighter than the acceptance criterion: every final artifact is frozen
    for name in ("presence.csv", "cumulative.csv", "detections.csv",
                 "manifest.json"):
        assert (out / name).read_bytes() == (GOLDEN_DIR / name).read_bytes(), name


def test_stage_summaries_are_machine_readable(tmp_path, capsys):
    code, out, _ = run_cli(replay_args("harvest", tmp_path / "out"), capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["stage"] == "harvest"
    assert summary["papers"] == 30


def test_console_entry_point():
    result = subprocess.run([sys.executable, "-m", "datause", "--help"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    for subcommand in ("harvest", "detect", "serve", "compare-index", "all"):
        assert subcommand in result.stdout
