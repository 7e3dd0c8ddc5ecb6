import json

import pytest

from kzdyn.cli import build_config, main, read_config_file, _parser
from kzdyn.errors import ConfigError
from kzdyn.reports import FAIL, CheckReport, compare
from kzdyn.exact import RationalMatrix
from kzdyn.suites import SuiteConfig, SuiteResult, emit_report, format_markdown, report_records, run_suite


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sl2_suite_passes(capsys):
    code, out, _ = run_cli(["run", "--suite", "sl2", "--seed", "7"], capsys)
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records and all(r["status"] == "PASS" for r in records)


def test_g2_braid_skips_representation_checks(capsys):
    code, out, _ = run_cli(["run", "--suite", "braid", "--type", "G2"], capsys)
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    statuses = {r["check_name"]: r["status"] for r in records}
    assert statuses["braid_relations"] == "SKIP"
    assert statuses["a_tilde_useful"] == "PASS"
    assert statuses["example_sequence"] == "PASS"


@pytest.mark.parametrize(
    "args",
    [
        ["run", "--rank", "0"],
        ["run", "--type", "Q", "--rank", "2"],
        ["run", "--type", "A3", "--rank", "2"],
        ["run", "--modules", "1,3"],
        ["run", "--suite", "nope"],
        ["run", "--samples", "0"],
        ["run", "--kappa", "0"],
        ["run", "--kappa", "abc"],
        ["run", "--rank", "7", "--modules", "1,1,1"],
        ["run", "--suite", "det", "--weight", "5,-5,0"],
    ],
)
def test_config_errors_exit_two(args, capsys):
    code, _, err = run_cli(args, capsys)
    assert code == 2
    assert "config error" in err


def test_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert main(["run", "--suite", "kz", "--suite", "braid", "--seed", "11", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.jsonl"
    main(["run", "--suite", "kz", "--suite", "braid", "--seed", "12", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_env_seed_fallback(monkeypatch):
    args = _parser().parse_args(["run"])
    assert build_config(args, env={"KZDYN_SEED": "42"}).seed == 42
    args = _parser().parse_args(["run", "--seed", "3"])
    assert build_config(args, env={"KZDYN_SEED": "42"}).seed == 3
    assert build_config(_parser().parse_args(["run"]), env={}).seed == 0


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sl3 with a wedge factor\ntype = A\nrank = 2\nmodules = 1,2\nsuite = kz\nsuite = det\nkappa = 3/4\nseed = 5\n")
    raw = read_config_file(str(cfg))
    assert raw["suite"] == ["kz", "det"]
    config = build_config(_parser().parse_args(["run", "--config", str(cfg), "--seed", "9"]), env={})
    assert (config.modules, config.suites, config.seed, str(config.kappa)) == ((1, 2), ("kz", "det"), 9, "3/4")
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))


def test_markdown_output(tmp_path, capsys):
    out = tmp_path / "r.md"
    assert main(["run", "--suite", "kz", "--samples", "2", "--format", "markdown", "--out", str(out)]) == 0
    text = out.read_text()
    assert "| kz | kz_flatness | PASS | PASS |  |" in text


def test_empty_result_gives_header_only():
    config = SuiteConfig(suites=())
    text = format_markdown(config, SuiteResult())
    assert text.startswith("# kzdyn report")
    assert "| suite | check |" in text and "| kz" not in text
    assert emit_report(config, SuiteResult(), fmt="jsonlines") == ""


def test_failing_record_carries_witness():
    config = SuiteConfig()
    bad = compare("demo", RationalMatrix([[1, 2]]), RationalMatrix([[1, 3]]), lam=[1, -1])
    result = SuiteResult(records=[("demo", 0, bad)])
    (rec,) = report_records(config, result)
    assert rec["status"] == FAIL
    assert rec["failure_witness"] == {"entry": [0, 1], "lhs": "2", "rhs": "3"}
    for key in ("check_name", "type", "rank", "module_descriptor", "lam", "kappa", "z", "status"):
        assert key in rec
    assert not result.ok


def test_exit_one_on_failure(monkeypatch, capsys):
    import kzdyn.cli as cli

    def fake_run(config):
        return SuiteResult(records=[("demo", None, CheckReport("demo", FAIL, witness={"note": "x"}))])

    monkeypatch.setattr(cli, "run_suite", fake_run)
    assert cli.main(["run", "--suite", "sl2"]) == 1


def test_unwritable_output(capsys):
    assert main(["run", "--suite", "sl2", "--samples", "1", "--out", "/nonexistent/dir/x.jsonl"]) == 2


def test_run_suite_all_default():
    result = run_suite(SuiteConfig(rank=1, modules=(1, 1), samples=1))
    assert result.ok
    suites = {s for s, _, _ in result.records}
    assert suites == {"sl2", "braid", "fusion", "kz", "compat", "det"}
    assert result.timings and all(t >= 0 for _, _, t in result.timings)
