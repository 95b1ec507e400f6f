import json
import math

import numpy as np
import pytest

from qree import entscan
from qree.cli import main as cli_main
from qree.entscan import (ConfigError, SweepRow, critical_temperature,
                          emit_rows, monogamy, parse_config, parse_rows, sweep)
from qree.qmat import projector
from qree.renyi import RenyiParameter
from qree.sepstates import OptimizerOptions
from qree.spinchain import ModelParams
from qree.statezoo import ghz, w

FAST = OptimizerOptions(restarts=2, max_iters=300, components=12, seed=3)

TINY_CONFIG = """
# minimal sweep
model = xxz
j = 1.0
delta = 0.5
temp = 1.0
sweep = temp
grid = 1.0, 2.0
alphas = 1 trad
restarts = 2
max_iters = 200
components = 8
seed = 4
"""


class TestMonogamy:
    def test_assembly_invariant_and_ghz(self):
        res = monogamy(projector(ghz()), RenyiParameter(1.0), FAST)
        assert abs(res.m - (res.e_1_23 - res.e_1_2 - res.e_1_3)) < 1e-12
        assert res.e_1_2 <= 1e-4 and res.e_1_3 <= 1e-4
        assert res.m > 0

    def test_w_positive_monogamy(self):
        res = monogamy(projector(w()), RenyiParameter(1.0), FAST)
        assert res.e_1_23 > 0.05 and res.e_1_2 > 0.05 and res.e_1_3 > 0.05
        assert res.m > 0

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ValueError, match="8x8"):
            monogamy(np.eye(4) / 4, RenyiParameter(1.0), FAST)


class TestCsv:
    def make_rows(self):
        return [
            SweepRow(model="xyz", param_name="temp", param_value=0.5, temp=0.5,
                     alpha=1.0, variant="traditional", e_1_23=0.123456789123,
                     e_1_2=1.5e-9, e_1_3=0.0, m=0.123456786, converged=True,
                     restarts_used=4, seed=99, walltime_ms=12.5),
            SweepRow(model="tfi", param_name="lam", param_value=2.0, temp=1.0,
                     alpha=4.0, variant="sandwiched", e_1_23=math.inf,
                     e_1_2=0.25, e_1_3=0.25, m=math.inf, converged=False,
                     restarts_used=2, seed=7, walltime_ms=3.25),
        ]

    def test_header_exact(self):
        text = emit_rows([])
        assert text.splitlines()[0] == (
            "model,param_name,param_value,temp,alpha,variant,"
            "e_1_23,e_1_2,e_1_3,m,converged,restarts_used,seed,walltime_ms")

    def test_roundtrip(self):
        rows = self.make_rows()
        text = emit_rows(rows)
        back = parse_rows(text)
        # serialization carries 9 significant digits; re-emitting the
        # parsed rows must reproduce the file byte for byte
        assert emit_rows(back) == text
        for a, b in zip(rows, back):
            assert a.model == b.model and a.variant == b.variant
            assert a.converged == b.converged and a.seed == b.seed
            assert b.e_1_23 == pytest.approx(a.e_1_23, rel=1e-8) or (
                math.isinf(a.e_1_23) and math.isinf(b.e_1_23))

    def test_infinity_spelled_inf(self):
        line = emit_rows(self.make_rows()).splitlines()[2]
        assert ",inf," in line

    def test_bad_header_rejected(self):
        with pytest.raises(ConfigError, match="header"):
            parse_rows("nope\n1,2,3\n")

    def test_bad_field_count_rejected(self):
        text = emit_rows([]) + "xyz,temp,1,1\n"
        with pytest.raises(ConfigError, match="14 fields"):
            parse_rows(text)


class TestConfigParsing:
    def test_minimal_config(self):
        cfg = parse_config(TINY_CONFIG)
        assert cfg.model == "xxz" and cfg.sweep_param == "temp"
        assert cfg.grid == [1.0, 2.0]
        assert cfg.alphas == [RenyiParameter(1.0, "trad")]
        assert cfg.opts.restarts == 2 and cfg.opts.components == 8
        assert cfg.seed == 4

    def test_linspace_grid(self):
        cfg = parse_config(TINY_CONFIG.replace("grid = 1.0, 2.0",
                                               "grid = 1.0 : 2.0 : 5"))
        assert cfg.grid == [1.0, 1.25, 1.5, 1.75, 2.0]

    def test_unknown_key_reports_line(self):
        bad = TINY_CONFIG + "jzz = 3\n"
        with pytest.raises(ConfigError, match=r"line \d+: unknown key 'jzz'"):
            parse_config(bad)

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(TINY_CONFIG + "model = xy\n")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="alphas"):
            parse_config("model = xxz\nsweep = temp\ngrid = 1.0\n")

    def test_empty_alpha_list_rejected(self):
        with pytest.raises(ConfigError, match="alpha"):
            parse_config(TINY_CONFIG.replace("alphas = 1 trad", "alphas = "))

    def test_missing_temp_for_coupling_sweep(self):
        text = TINY_CONFIG.replace("sweep = temp", "sweep = delta").replace(
            "temp = 1.0", "")
        with pytest.raises(ConfigError, match="temp"):
            parse_config(text)

    def test_model_invariant_violation_at_grid_point(self):
        text = TINY_CONFIG.replace("sweep = temp", "sweep = delta").replace(
            "grid = 1.0, 2.0", "grid = -2.0, 1.0")
        with pytest.raises(ConfigError, match="delta"):
            parse_config(text)

    def test_alpha_outside_variant_range(self):
        with pytest.raises(ConfigError, match="alpha"):
            parse_config(TINY_CONFIG.replace("alphas = 1 trad",
                                             "alphas = 3 trad"))

    def test_bad_line_shape(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("model xyz\n")


class TestSweep:
    def test_rows_ordered_and_deterministic(self, tmp_path):
        cfg = parse_config(TINY_CONFIG)
        cfg.out = str(tmp_path / "rows.csv")
        rows1 = sweep(cfg)
        assert [(r.param_value, r.alpha) for r in rows1] == [
            (1.0, 1.0), (2.0, 1.0)]
        rows2 = sweep(cfg)
        for a, b in zip(rows1, rows2):
            assert a.e_1_23 == b.e_1_23 and a.m == b.m and a.seed == b.seed

    def test_cache_hit_skips_optimizer(self, tmp_path, monkeypatch):
        cfg = parse_config(TINY_CONFIG)
        cfg.cache_dir = str(tmp_path / "cache")
        cfg.out = str(tmp_path / "rows.csv")
        sweep(cfg)
        first_csv = open(cfg.out).read()

        calls = {"n": 0}
        real = entscan.monogamy

        def counting(*args, **kwargs):
            calls["n"] += 1
            return real(*args, **kwargs)

        monkeypatch.setattr(entscan, "monogamy", counting)
        rows = sweep(cfg)
        assert calls["n"] == 0
        assert open(cfg.out).read() == first_csv
        assert len(rows) == 2

    def test_corrupt_cache_entry_skipped(self, tmp_path):
        cache = tmp_path / "cache"
        cache.mkdir()
        (cache / "entries-bad.jsonl").write_text("{not json}\n")
        cfg = parse_config(TINY_CONFIG)
        cfg.cache_dir = str(cache)
        with pytest.warns(UserWarning, match="corrupt"):
            rows = sweep(cfg)
        assert len(rows) == 2

    def test_cache_index_written(self, tmp_path):
        cfg = parse_config(TINY_CONFIG)
        cfg.cache_dir = str(tmp_path / "cache")
        sweep(cfg)
        index = json.load(open(tmp_path / "cache" / "index.json"))
        assert index["entries"] == 2

    def test_parallel_workers_match_serial(self, tmp_path):
        cfg = parse_config(TINY_CONFIG)
        serial = sweep(cfg)
        cfg2 = parse_config(TINY_CONFIG)
        cfg2.workers = 3
        parallel = sweep(cfg2)
        for a, b in zip(serial, parallel):
            assert a.e_1_23 == b.e_1_23 and a.m == b.m

    def test_unwritable_output(self, tmp_path):
        cfg = parse_config(TINY_CONFIG)
        cfg.out = str(tmp_path / "no" / "such" / "dir" / "rows.csv")
        with pytest.raises(IOError):
            sweep(cfg)

    def test_emitted_rows_satisfy_m_assembly(self):
        cfg = parse_config(TINY_CONFIG)
        for row in sweep(cfg):
            assert abs(row.m - (row.e_1_23 - row.e_1_2 - row.e_1_3)) < 1e-12


class TestCriticalTemperature:
    def test_none_in_range_sentinel(self):
        # strongly entangled region only: E stays far above threshold
        params = ModelParams.xxz(1.0, 1.0)
        got = critical_temperature(params, RenyiParameter(1.0), FAST,
                                   t_range=(0.2, 0.8), resolution=4)
        assert got is None

    def test_finds_decay_point(self):
        params = ModelParams.xxz(1.0, 0.5)
        tc = critical_temperature(params, RenyiParameter(1.0), FAST,
                                  t_range=(1.0, 5.0), resolution=6)
        assert tc is not None and 1.0 < tc < 5.0
        # entanglement is above threshold below tc and below it above
        lo = entscan.tripartite_entanglement(params, tc - 0.3, RenyiParameter(1.0), FAST)
        hi = entscan.tripartite_entanglement(params, tc + 0.3, RenyiParameter(1.0), FAST)
        assert lo > 1e-4 and hi < 1e-4

    def test_validation(self):
        with pytest.raises(ValueError):
            critical_temperature(ModelParams.tfi(1.0), RenyiParameter(1.0),
                                 FAST, t_range=(2.0, 1.0))
        with pytest.raises(ValueError):
            critical_temperature(ModelParams.tfi(1.0), RenyiParameter(1.0),
                                 FAST, resolution=2)


class TestCli:
    def test_state_subcommand(self, capsys):
        assert cli_main(["state", "ghz"]) == 0
        out = capsys.readouterr().out
        assert "ghz" in out and "+0.707107" in out

    def test_state_reduced_json(self, capsys):
        assert cli_main(["state", "star", "--reduced", "12",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["reduced"]["pair"] == "12"

    def test_ree_subcommand(self, capsys):
        code = cli_main(["ree", "--state", "ghz", "--alpha", "1",
                         "--restarts", "2", "--max-iters", "300",
                         "--components", "8", "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["value"] - math.log(2)) < 1e-3

    def test_monogamy_subcommand(self, capsys):
        code = cli_main(["monogamy", "--model", "xxz", "--j", "1",
                         "--delta", "0.5", "--temp", "1.0",
                         "--restarts", "2", "--max-iters", "200",
                         "--components", "8", "--format", "json"])
        assert code in (0, 2)
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["m"] - (payload["e_1_23"] - payload["e_1_2"]
                                   - payload["e_1_3"])) < 1e-12

    def test_state_and_model_conflict(self, capsys):
        code = cli_main(["ree", "--state", "ghz", "--model", "xyz"])
        assert code == 1

    def test_sweep_config_error_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("model = xyz\nwibble = 3\n")
        assert cli_main(["sweep", str(bad)]) == 1

    def test_sweep_missing_file_exit(self):
        assert cli_main(["sweep", "/no/such/file.cfg"]) == 3

    def test_sweep_runs_and_writes(self, tmp_path, capsys):
        cfg = tmp_path / "ok.cfg"
        cfg.write_text(TINY_CONFIG)
        out = tmp_path / "rows.csv"
        code = cli_main(["sweep", str(cfg), "--out", str(out)])
        assert code == 0
        rows = parse_rows(out.read_text())
        assert len(rows) == 2

    def test_tc_subcommand(self, capsys):
        code = cli_main(["tc", "--model", "xxz", "--j", "1", "--delta", "0.5",
                         "--alpha", "1", "--restarts", "2",
                         "--max-iters", "200", "--components", "8",
                         "--t-min", "1.0", "--t-max", "5.0",
                         "--resolution", "5"])
        assert code == 0
        out = capsys.readouterr().out.strip()
        assert out == "none-in-range" or 1.0 <= float(out) <= 5.0

    def test_check_subcommand(self, capsys):
        assert cli_main(["check", "--n", "5"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 4
