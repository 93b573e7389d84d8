import csv

import numpy as np
import pytest

from tauop import cli
from tauop import experiments as ex
from tauop.experiments import CHECKS, DEFAULT_TOLERANCES, ExperimentConfig, parse_weight
from tauop.spaces import INF, Weight

FAST = ["parseval", "inverse_roundtrip", "symplectic_lemma", "alpha_values", "conversion_semigroup"]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def body(path):
    # drop the timestamp line of summaries; CSVs carry no timestamp
    return [line for line in path.read_text().splitlines() if not line.startswith("timestamp=")]


def test_every_check_has_a_tolerance():
    assert set(CHECKS) <= set(DEFAULT_TOLERANCES)
    assert len(CHECKS) == len(set(CHECKS))


def test_config_defaults_and_overrides(tmp_path):
    cfg = ExperimentConfig()
    assert cfg.n == 256 and cfg.l == 16.0 and cfg.tau_list[0] == 0.0 and cfg.tau_list[-1] == 1.0
    p = tmp_path / "run.cfg"
    p.write_text("# comment\ngrid.n = 128\nspace.r2 = inf\nspace.weight = 1/radial_poly:2\ntol.moyal = 1e-3\n")
    c2 = ExperimentConfig.from_file(p)
    assert c2.n == 128 and c2.r2 == INF and c2.tolerances["moyal"] == 1e-3
    assert parse_weight(c2.weight) == Weight.radial_poly(2).reciprocal()
    assert c2.hash() != cfg.hash()
    assert ExperimentConfig.from_mapping({"grid.n": "128"}).n == 128


def test_config_hash_is_canonical():
    a = ExperimentConfig.from_mapping({"space.weight": "radial_poly:2"})
    b = ExperimentConfig.from_mapping({"space.weight": "radial_poly:2.0"})
    assert a.hash() == b.hash() and len(a.hash()) == 16
    assert ExperimentConfig().hash() == ExperimentConfig().hash()


@pytest.mark.parametrize(
    "items",
    [
        {"grid.n": "100"},
        {"bogus": "1"},
        {"tau_list": "0.5,1.2"},
        {"tol.nonexistent": "1"},
        {"symbol": "mystery"},
        {"space.weight": "exponential:3"},
        {"grid.shifted": "maybe"},
    ],
)
def test_config_rejects(items):
    with pytest.raises(ValueError):
        ExperimentConfig.from_mapping(items)


def test_config_file_syntax_error(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("grid.n 128\n")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        ExperimentConfig.from_file(p)


def test_format_value():
    assert ex.format_value(0.1) == "1.0000000000000001e-01"
    assert ex.format_value(3) == "3"
    assert ex.format_value(True) == "1"
    assert ex.format_value("phi,h1") == "phi,h1"


def test_verify_outputs(tmp_path):
    cfg = ExperimentConfig()
    s = ex.cmd_verify(cfg, tmp_path, FAST)
    assert s.passed and [c.name for c in s.checks] == FAST
    rows = read_csv(tmp_path / "verify.csv")
    assert rows[0] == ["check", "value", "threshold", "passed", "config_hash"]
    for r in rows[1:]:
        assert r[4] == cfg.hash()
        assert "e" in r[1] and len(r[1].split("e")[0].split(".")[1]) == 16
    text = (tmp_path / "verify_summary.txt").read_text()
    assert f"config_hash={cfg.hash()}" in text and "timestamp=" in text and "tol.moyal=" in text


def test_run_checks_groups():
    s = ex.run_checks(ExperimentConfig(), groups=["alpha"])
    assert {c.name for c in s.checks} == {"alpha_values", "alpha_minimum"}
    assert s.passed


def test_failed_check_reported():
    cfg = ExperimentConfig.from_mapping({"tol.alpha_values": "-1"})
    s = ex.run_checks(cfg, ["alpha_values"])
    assert not s.passed and s.failures()[0].name == "alpha_values"


def test_cli_verify_exit_codes(tmp_path, capsys):
    assert cli.main(["verify", "--check", "parseval", "--check", "alpha_values", "--out", str(tmp_path)]) == 0
    assert "PASS parseval" in capsys.readouterr().out
    assert cli.main(["verify", "--grid-n", "100", "--out", str(tmp_path)]) == 2
    assert cli.main(["verify", "--check", "alpha_values", "--out", str(tmp_path), "--config", str(tmp_path / "verify.csv")]) == 2


def test_cli_mutation_hook_is_caught(tmp_path):
    args = ["verify", "--check", "moyal", "--tau", "0.5", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    assert cli.main(args + ["--twiddle-fault", "0.05"]) == 1
    assert cli.main(args) == 0  # the fault is scoped to the run


def test_cli_tau_filter(tmp_path):
    assert cli.main(["verify", "--check", "rihaczek_forms", "--tau", "0,1", "--out", str(tmp_path)]) == 0
    assert "tau_list=0.0,1.0" in (tmp_path / "verify_summary.txt").read_text()


def _small_scaling(**extra):
    items = {
        "grid.n": "128",
        "scaling.tau_list": "0.25,0.5,0.75",
        "probes.extent": "1",
        "probes.n_random": "1",
        "symbol_grid.n": "32",
    }
    items.update(extra)
    return ExperimentConfig.from_mapping(items)


def test_scaling_zero_symbol():
    header, rows = ex.cmd_scaling(_small_scaling(symbol="zero"))
    assert header[:5] == ["tau", "alpha", "norm_lower", "symbol_norm", "ratio"]
    assert all(r[2] == 0 and r[4] == 0 for r in rows)


def test_scaling_alpha_column_one_inf():
    with pytest.warns(UserWarning, match="admissible"):
        _, rows = ex.cmd_scaling(_small_scaling(**{"space.r1": "1", "space.r2": "inf"}))
    for r in rows:
        assert r[1] == pytest.approx((1 - r[0]) ** -2, rel=1e-14)


def test_scaling_endpoints_dropped():
    _, rows = ex.cmd_scaling(_small_scaling(**{"scaling.tau_list": "0,0.5,1"}))
    assert [r[0] for r in rows] == [0.5]


def test_counterexample_rows():
    header, rows = ex.cmd_counterexample(ExperimentConfig())
    assert header[0] == "epsilon" and header[-1] == "config_hash"
    eps = [r[0] for r in rows]
    assert eps == sorted(eps, reverse=True) and len(rows) == 7
    for r in rows:
        assert r[1] == pytest.approx(r[3], rel=1e-10)
        assert r[4] == pytest.approx(r[1], rel=1e-10)
    s = ex.counterexample_summary(rows)
    assert abs(s["slope"] - 0.5) < 0.05


def test_convert_rows():
    cfg = ExperimentConfig.from_mapping({"grid.n": "32", "grid.l": "5.6"})
    header, rows = ex.cmd_convert(cfg, 0.5, 0.5)
    assert header == ["x", "xi", "re", "im", "config_hash"] and len(rows) == 32 * 32
    r = rows[0]
    assert r[2] == pytest.approx(np.exp(-np.pi * (r[0] ** 2 + r[1] ** 2)))


def test_cli_commands_write_files(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(
        "grid.n = 128\nscaling.tau_list = 0.3,0.6\nprobes.extent = 1\nprobes.n_random = 0\n"
        "symbol_grid.n = 32\ntau_list = 0.5\n"
    )
    for cmd in ("scaling", "counterexample", "norms"):
        out = tmp_path / cmd
        assert cli.main([cmd, "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / f"{cmd}.csv").exists() and (out / f"{cmd}_summary.txt").exists()
    out = tmp_path / "convert"
    assert cli.main(["convert", "--config", str(cfg), "--from-tau", "0.5", "--to-tau", "0", "--out", str(out)]) == 0
    assert len(read_csv(out / "convert.csv")) == 128 * 128 + 1


def test_reproducible_csv(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["--check", "young_mixed", "--check", "weight_submultiplicative", "--seed", "7"]
    assert cli.main(["verify", "--out", str(a)] + args) == 0
    assert cli.main(["verify", "--out", str(b)] + args) == 0
    assert (a / "verify.csv").read_text() == (b / "verify.csv").read_text()
    s1, s2 = body(a / "verify_summary.txt"), body(b / "verify_summary.txt")
    assert [x for x in s1 if not x.startswith("runtime_s")] == [x for x in s2 if not x.startswith("runtime_s")]


def test_seed_changes_random_checks():
    r = [ex.run_checks(ExperimentConfig.from_mapping({"probes.seed": s}), ["young_mixed"]).checks[0].value for s in (1, 2)]
    assert r[0] != r[1]
