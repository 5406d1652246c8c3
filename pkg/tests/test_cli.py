"""CLI tests: config merging, output contracts, exit codes, determinism.

Commands run in-process through main(argv) with captured stdout/stderr;
the file-driven paths go through real temp files.  Statistical commands
use reduced sizes; the full-size runs live in the acceptance suite.
"""

import contextlib
import io
import json
import math

import numpy as np
import pytest

from pnsc import mixtures, stable
from pnsc.cli import main
from pnsc.simulator import read_iq
from pnsc.stable import Param, StableParams


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def rows_of(csv_text):
    lines = csv_text.strip().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestConfigMerging:
    def test_config_file_drives_command(self, tmp_path):
        p = write_config(tmp_path, {"schema_version": 1, "alpha": 1.0, "grid": [0.0]})
        code, out, _ = run(["pdf", "--config", p])
        assert code == 0
        assert out.splitlines()[1] == "0,0.318309886184,closed_form,true"

    def test_schema_version_required(self, tmp_path):
        p = write_config(tmp_path, {"alpha": 1.0, "grid": [0.0]})
        code, _, err = run(["pdf", "--config", p])
        assert code == 2
        assert "schema_version" in err

    def test_schema_version_wrong_value(self, tmp_path):
        p = write_config(tmp_path, {"schema_version": 2, "alpha": 1.0, "grid": [0.0]})
        code, _, _ = run(["pdf", "--config", p])
        assert code == 2

    def test_unknown_key_rejected(self, tmp_path):
        p = write_config(
            tmp_path, {"schema_version": 1, "alpha": 1.0, "grid": [0.0], "alpa": 2.0}
        )
        code, _, err = run(["pdf", "--config", p])
        assert code == 2
        assert "alpa" in err

    def test_flag_overrides_file(self, tmp_path):
        p = write_config(tmp_path, {"schema_version": 1, "alpha": 1.0, "grid": [0.0]})
        code, out, _ = run(["pdf", "--config", p, "--alpha", "2"])
        assert code == 0
        value = float(out.splitlines()[1].split(",")[1])
        assert value == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-11)

    def test_missing_required_key(self):
        code, _, err = run(["pdf", "--grid", "0"])
        assert code == 2
        assert "alpha" in err

    def test_config_file_not_found(self, tmp_path):
        code, _, _ = run(["pdf", "--config", str(tmp_path / "none.json"), "--alpha", "1", "--grid", "0"])
        assert code == 4

    def test_malformed_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, _, _ = run(["pdf", "--config", str(p), "--alpha", "1", "--grid", "0"])
        assert code == 2

    def test_non_object_json(self, tmp_path):
        p = tmp_path / "list.json"
        p.write_text("[1, 2]")
        code, _, _ = run(["pdf", "--config", str(p), "--alpha", "1", "--grid", "0"])
        assert code == 2

    def test_bad_number(self):
        code, _, _ = run(["pdf", "--alpha", "abc", "--grid", "0"])
        assert code == 2

    def test_unknown_flag_usage_error(self):
        code, _, _ = run(["pdf", "--alpha", "1", "--grid", "0", "--bogus", "1"])
        assert code == 2

    def test_help_exits_zero(self):
        code, _, _ = run(["--help"])
        assert code == 0


class TestPdf:
    def test_cauchy_binding_row(self):
        code, out, _ = run(["pdf", "--alpha", "1", "--grid", "0"])
        assert code == 0
        header, rows = rows_of(out)
        assert header == "x,value,method,converged"
        assert rows == [["0", "0.318309886184", "closed_form", "true"]]

    def test_method_column_truthful_for_auto(self):
        # closed-form pair resolves to closed_form, generic alpha to cf_inversion
        _, out, _ = run(["pdf", "--alpha", "1.5", "--grid", "1"])
        assert out.splitlines()[1].split(",")[2] == "closed_form"
        _, out, _ = run(["pdf", "--alpha", "1.7", "--grid", "1"])
        assert out.splitlines()[1].split(",")[2] == "cf_inversion"

    def test_explicit_method_honored(self):
        code, out, _ = run(["pdf", "--alpha", "1", "--method", "cf-inversion", "--grid", "0"])
        assert code == 0
        _, rows = rows_of(out)
        assert rows[0][2] == "cf_inversion"
        assert float(rows[0][1]) == pytest.approx(1.0 / math.pi, rel=1e-9)

    def test_unknown_method(self):
        code, _, _ = run(["pdf", "--alpha", "1", "--method", "magic", "--grid", "0"])
        assert code == 2

    def test_nonconvergent_point_marked_and_exit_3(self):
        code, out, _ = run(["pdf", "--alpha", "1.9", "--method", "series", "--grid", "1,30"])
        assert code == 3
        _, rows = rows_of(out)
        assert rows[0][3] == "true"
        assert rows[1][1] == "nan" and rows[1][3] == "false"

    def test_mixture_matches_library(self):
        code, out, _ = run(
            ["pdf", "--alpha", "1.5", "--mixture", "--lambda-k", "3",
             "--k-max", "8", "--grid", "0,1"]
        )
        assert code == 0
        _, rows = rows_of(out)
        m = mixtures.mixture_from_scale(1.5, 1.0, mixtures.BandwidthLaw.poisson(3.0, 8))
        for row, y in zip(rows, (0.0, 1.0)):
            assert row[2] == "mixture"
            assert float(row[1]) == pytest.approx(mixtures.mixture_pdf(m, y), rel=1e-10)

    def test_mixture_rejects_skew(self):
        code, _, _ = run(
            ["pdf", "--alpha", "1.5", "--mixture", "--beta", "0.5",
             "--lambda-k", "3", "--k-max", "8", "--grid", "0"]
        )
        assert code == 2

    def test_grid_and_linspace_exclusive(self):
        assert run(["pdf", "--alpha", "1", "--grid", "0", "--linspace", "0,1,3"])[0] == 2
        assert run(["pdf", "--alpha", "1"])[0] == 2

    def test_linspace_grid(self):
        code, out, _ = run(["pdf", "--alpha", "1", "--linspace=-1,1,3"])
        assert code == 0
        _, rows = rows_of(out)
        assert [r[0] for r in rows] == ["-1", "0", "1"]

    def test_out_file(self, tmp_path):
        dest = tmp_path / "pdf.csv"
        code, out, _ = run(["pdf", "--alpha", "1", "--grid", "0", "--out", str(dest)])
        assert code == 0 and out == ""
        assert dest.read_text().splitlines()[1] == "0,0.318309886184,closed_form,true"


class TestCdfTail:
    def test_cauchy_cdf_values(self):
        code, out, _ = run(["cdf", "--alpha", "1", "--grid", "0,1"])
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][1]) == pytest.approx(0.5, abs=1e-12)
        assert float(rows[1][1]) == pytest.approx(0.75, rel=1e-9)
        assert rows[0][2] == "quadrature"

    def test_tail_binding_value(self):
        # survival asymptote of the standard Cauchy at y = 1e3 is 1/(1e3 pi)
        code, out, _ = run(["tail", "--alpha", "1", "--grid", "1e3"])
        assert code == 0
        _, rows = rows_of(out)
        assert rows[0][2] == "asymptote"
        want = 1.0 / (1e3 * math.pi)
        assert abs(float(rows[0][1]) - want) <= 1e-12

    def test_tail_rejects_shifted_law(self):
        assert run(["tail", "--alpha", "1", "--delta", "1", "--grid", "10"])[0] == 2

    def test_tail_rejects_gaussian(self):
        assert run(["tail", "--alpha", "2", "--grid", "10"])[0] == 2

    def test_mixture_tail_matches_library(self):
        code, out, _ = run(
            ["tail", "--alpha", "1.5", "--mixture", "--gamma", "0.5",
             "--lambda-k", "3", "--k-max", "8", "--grid", "50"]
        )
        assert code == 0
        _, rows = rows_of(out)
        m = mixtures.mixture_from_scale(1.5, 0.5, mixtures.BandwidthLaw.poisson(3.0, 8))
        assert float(rows[0][1]) == pytest.approx(mixtures.mixture_tail(m, 50.0)[0], rel=1e-10)


class TestSample:
    def test_deterministic_and_matches_library(self):
        code, out, _ = run(["sample", "--alpha", "1.5", "--gamma", "2", "--n", "4", "--seed", "11"])
        assert code == 0
        got = [float(v) for v in out.splitlines()[1:]]
        want = stable.sample(StableParams(1.5, 0.0, 2.0, 0.0, Param.S0), (11, 0), 4)
        assert np.allclose(got, want, rtol=1e-10)
        assert run(["sample", "--alpha", "1.5", "--gamma", "2", "--n", "4", "--seed", "11"])[1] == out

    def test_seed_changes_stream(self):
        a = run(["sample", "--alpha", "1.5", "--n", "4", "--seed", "1"])[1]
        b = run(["sample", "--alpha", "1.5", "--n", "4", "--seed", "2"])[1]
        assert a != b

    def test_mixture_sample_scales_by_carrier_count(self):
        argv = ["sample", "--alpha", "1.5", "--mixture", "--lambda-k", "3",
                "--k-max", "8", "--n", "6", "--seed", "5"]
        code, out, _ = run(argv)
        assert code == 0
        values = np.array([float(v) for v in out.splitlines()[1:]])
        base = stable.sample(StableParams(1.5, 0.0, 1.0, 0.0, Param.S0), (5, 0), 6)
        ratio = (values / base) ** 1.5
        k = np.rint(ratio)
        assert np.allclose(ratio, k, atol=1e-9)
        assert k.min() >= 1 and k.max() <= 8
        assert run(argv)[1] == out

    def test_summary_file(self, tmp_path):
        dest = tmp_path / "s.json"
        code, _, _ = run(["sample", "--alpha", "1", "--n", "2", "--summary", str(dest)])
        assert code == 0
        payload = json.loads(dest.read_text())
        assert payload["command"] == "sample" and payload["n"] == 2
        assert payload["schema_version"] == 1

    def test_n_validation(self):
        assert run(["sample", "--alpha", "1", "--n", "0"])[0] == 2
        assert run(["sample", "--alpha", "1", "--n", "2.5"])[0] == 2


class TestSimulate:
    ARGS = ["simulate", "--lam", "0.5", "--r-t", "5", "--sigma", "4",
            "--replicates", "64", "--seed", "9"]

    def test_summary_fields(self):
        code, out, _ = run(self.ARGS)
        assert code == 0
        payload = json.loads(out)
        assert payload["command"] == "simulate"
        assert payload["alpha"] == pytest.approx(1.0)
        assert payload["lambda_star"] == pytest.approx(0.5)
        assert payload["expected_count"] == pytest.approx(0.5 * math.pi * 25.0)
        assert payload["k_max"] == 1
        assert payload["kernel"] in ("compiled", "pure")
        assert "alpha_hat" in payload

    def test_sector_halves_rate(self):
        code, out, _ = run(self.ARGS + ["--intensity", "sector", "--phi", repr(math.pi)])
        assert code == 0
        payload = json.loads(out)
        assert payload["lambda_star"] == pytest.approx(0.25)
        assert payload["expected_count"] == pytest.approx(0.25 * math.pi * 25.0)

    def test_reruns_byte_identical(self, tmp_path):
        names = [(tmp_path / f"{tag}.iqb", tmp_path / f"{tag}.csv", tmp_path / f"{tag}.json")
                 for tag in ("a", "b")]
        for iqb, csv, summ in names:
            code, _, _ = run(self.ARGS + ["--out", str(iqb), "--csv", str(csv),
                                          "--summary", str(summ)])
            assert code == 0
        for i in range(3):
            assert names[0][i].read_bytes() == names[1][i].read_bytes()

    def test_iq_roundtrip_and_k_used(self, tmp_path):
        iqb = tmp_path / "x.iqb"
        run(self.ARGS + ["--bandwidth", "poisson", "--lambda-k", "3", "--k-max", "8",
                         "--out", str(iqb), "--summary", str(tmp_path / "x.json")])
        batch = read_iq(str(iqb))
        assert batch.n_replicates == 64
        assert batch.k_max == 8
        assert json.loads((tmp_path / "x.json").read_text())["k_max"] == 8

    def test_pure_kernel_selectable(self):
        code, out, _ = run(self.ARGS + ["--kernel", "pure"])
        assert code == 0
        assert json.loads(out)["kernel"] == "pure"

    def test_env_threads_default(self, monkeypatch):
        monkeypatch.setenv("PNSC_THREADS", "1")
        assert run(self.ARGS)[0] == 0

    def test_unknown_intensity(self):
        assert run(self.ARGS + ["--intensity", "radial"])[0] == 2

    def test_intensity_needs_parameters(self):
        assert run(self.ARGS + ["--intensity", "sector"])[0] == 2
        assert run(self.ARGS + ["--intensity", "spatial-power-law"])[0] == 2

    def test_alpha_hat_at_scale(self):
        args = ["simulate", "--lam", "0.3183098861837907", "--r-t", "100", "--sigma", "4",
                "--replicates", "20000", "--seed", "3"]
        code, out, _ = run(args)
        assert code == 0
        alpha_hat = json.loads(out)["alpha_hat"]
        assert alpha_hat is not None
        assert 0.8 <= alpha_hat <= 1.2


class TestValidate:
    SMALL = ["validate", "--cf-replicates", "20000", "--cf-mean-count", "400",
             "--ks-replicates", "2000", "--ks-mean-count", "2000",
             "--map-replicates", "20000"]

    def test_suite_passes_and_mirrors_json(self, tmp_path):
        rep = tmp_path / "report.json"
        code, out, _ = run(self.SMALL + ["--out", str(rep)])
        assert code == 0
        payload = json.loads(rep.read_text())
        assert payload["passed"] is True
        assert [c["name"] for c in payload["checks"]] == [
            "cf-match", "mixture-ks", "mapping-equivalence", "lrt-agreement"]
        # the text view is generated from the same dict
        assert out.count("[PASS]") == 4
        assert "overall: PASS" in out
        for c in payload["checks"]:
            assert c["name"] in out

    def test_corrupted_scale_fails_cf_check(self, tmp_path):
        rep = tmp_path / "report.json"
        code, out, _ = run(self.SMALL + ["--corrupt-gamma", "1.1", "--out", str(rep)])
        assert code == 5
        payload = json.loads(rep.read_text())
        assert payload["passed"] is False
        by_name = {c["name"]: c for c in payload["checks"]}
        assert by_name["cf-match"]["passed"] is False
        assert "[FAIL] cf-match" in out


class TestLrt:
    def test_single_point_binding(self):
        code, out, _ = run(["lrt", "--alpha", "1", "--r", "1"])
        assert code == 0
        assert out.strip() == "0.2"

    def test_single_point_equals_library(self):
        from pnsc.receiver import LrtSpec, Regime, lrt
        _, out, _ = run(["lrt", "--alpha", "1.5", "--gamma-tilde", "2", "--r", "0.7"])
        want = lrt(LrtSpec(1.5, 2.0, Regime.HOLTSMARK), 0.7)
        assert float(out) == pytest.approx(want, rel=1e-10)

    def test_regime_inferred_from_alpha(self, tmp_path):
        cases = {"1": "cauchy", "1.5": "holtsmark", "2": "gaussian",
                 repr(2.0 / 3.0): "whittaker", "1.4": "general-series"}
        for alpha, regime in cases.items():
            summ = tmp_path / f"s{regime}.json"
            code, _, _ = run(["lrt", "--alpha", alpha, "--linspace=-0.5,0.5,3",
                              "--out", str(tmp_path / "c.csv"), "--summary", str(summ)])
            assert code == 0
            assert json.loads(summ.read_text())["regime"] == regime

    def test_explicit_regime_honored(self, tmp_path):
        summ = tmp_path / "s.json"
        code, _, _ = run(["lrt", "--alpha", "1.4", "--regime", "monte-carlo",
                          "--linspace=-1,1,3", "--out", str(tmp_path / "c.csv"),
                          "--summary", str(summ)])
        assert code == 0
        assert json.loads(summ.read_text())["regime"] == "monte-carlo"

    def test_unknown_regime(self):
        assert run(["lrt", "--alpha", "1.4", "--regime", "bayes", "--r", "0"])[0] == 2

    def test_regime_alpha_mismatch(self):
        assert run(["lrt", "--alpha", "1.4", "--regime", "cauchy", "--r", "0"])[0] == 2

    def test_curve_csv_reciprocal(self):
        code, out, _ = run(["lrt", "--alpha", "1", "--linspace=-2,2,5"])
        assert code == 0
        header, rows = rows_of(out)
        assert header == "r,lambda,log_lambda,regime,valid"
        lam = [float(r[1]) for r in rows]
        assert lam[0] * lam[4] == pytest.approx(1.0, rel=1e-10)
        assert lam[2] == pytest.approx(1.0, rel=1e-12)
        assert all(r[4] == "true" for r in rows)

    def test_curve_marks_fallback_points(self):
        # whittaker's closed form is undefined near r = +-1; those points
        # fall back and are flagged
        code, out, _ = run(["lrt", "--alpha", repr(2.0 / 3.0), "--grid=-1,0,1"])
        assert code == 0
        _, rows = rows_of(out)
        flags = {float(r[0]): (r[3], r[4]) for r in rows}
        assert flags[0.0] == ("whittaker", "true")
        assert flags[1.0] == ("monte-carlo", "false")
        assert flags[-1.0] == ("monte-carlo", "false")

    def test_r_and_grid_exclusive(self):
        assert run(["lrt", "--alpha", "1", "--r", "0", "--grid", "0"])[0] == 2
        assert run(["lrt", "--alpha", "1"])[0] == 2


class TestGsnr:
    ARGS = ["gsnr", "--alphas", "0.5,1.0,2.0", "--gammas", "1e-4,1e-3,1e-2"]

    def test_grid_shape_and_monotonicity(self):
        code, out, _ = run(self.ARGS)
        assert code == 0
        header, rows = rows_of(out)
        assert header == "alpha,gamma,s0,gsnr"
        assert len(rows) == 9
        for alpha in ("0.5", "1", "2"):
            series = [float(r[3]) for r in rows if r[0] == alpha]
            assert series[0] > series[1] > series[2]

    def test_gsnr_column_follows_geometric_power(self):
        code, out, _ = run(self.ARGS)
        _, rows = rows_of(out)
        for r in rows:
            s0 = float(r[2])
            want = 1.0 / (2.0 * mixtures.EULER_GAMMA_EXP * s0 * s0)
            assert float(r[3]) == pytest.approx(want, rel=1e-9)

    def test_matches_library_surface(self):
        code, out, _ = run(self.ARGS)
        _, rows = rows_of(out)
        cells = mixtures.gsnr_surface(
            [0.5, 1.0, 2.0], [1e-4, 1e-3, 1e-2], 1.0,
            mixtures.BandwidthLaw.poisson(10.0, 64))
        for row, cell in zip(rows, cells):
            assert float(row[3]) == pytest.approx(cell.gsnr, rel=1e-9)

    def test_default_grid_includes_whittaker_alpha(self, tmp_path):
        dest = tmp_path / "g.csv"
        code, _, _ = run(["gsnr", "--gammas", "1e-3", "--out", str(dest)])
        assert code == 0
        _, rows = rows_of(dest.read_text())
        alphas = {row[0] for row in rows}
        assert len(rows) == 20
        assert "0.666666666667" in alphas


class TestCapacity:
    def test_json_fields_and_determinism(self):
        argv = ["capacity", "--alpha", "2", "--gamma-tilde", "1", "--n-mc", "10000", "--seed", "3"]
        code, out, _ = run(argv)
        assert code == 0
        payload = json.loads(out)
        for key in ("capacity_bits", "std_error", "regime", "n_mc", "seed"):
            assert key in payload
        assert payload["regime"] == "gaussian"
        assert 0.0 <= payload["capacity_bits"] <= 1.0
        assert run(argv)[1] == out

    def test_limits(self):
        lo = json.loads(run(["capacity", "--alpha", "1", "--gamma-tilde", "1e6",
                             "--n-mc", "10000"])[1])
        hi = json.loads(run(["capacity", "--alpha", "1", "--gamma-tilde", "1e-6",
                             "--n-mc", "10000"])[1])
        assert lo["capacity_bits"] == pytest.approx(0.0, abs=0.01)
        assert hi["capacity_bits"] == pytest.approx(1.0, abs=0.01)

    def test_n_mc_floor(self):
        assert run(["capacity", "--alpha", "1", "--n-mc", "5000"])[0] == 2
