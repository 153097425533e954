"""Sweep campaigns: tables, orderings, determinism, config files."""

import io
import math
from dataclasses import replace

import numpy as np
import pytest

from nhqc import experiments, gates
from nhqc.errors import DomainError
from nhqc.experiments import SweepConfig
from nhqc.gates import NAMED_GATES

TWO_PI = 2.0 * math.pi


def quick_cfg(**kw) -> SweepConfig:
    base = experiments.reduced(SweepConfig(n_steps=1500, n_samples=1001))
    return replace(base, **kw) if kw else base


def by_curve(rows, key):
    out = {}
    for row in rows:
        out.setdefault(row["curve"], []).append(row[key])
    return out


@pytest.fixture(scope="module")
def duration_rows():
    cfg = SweepConfig(gamma_grid=tuple(np.linspace(math.pi / 8, math.pi, 8)),
                      k_list=(1.0 / 3.0, 1.0, 5.0))
    return experiments.duration_vs_gamma(cfg)


@pytest.fixture(scope="module")
def envelope_rows():
    return experiments.envelope_export(NAMED_GATES["T"], (1.0, 5.0, 9.0),
                                       quick_cfg(), n_points=201)


@pytest.fixture(scope="module")
def detuning_rows():
    return experiments.detuning_robustness(NAMED_GATES["T"], (1.0, 9.0),
                                           quick_cfg())


@pytest.fixture(scope="module")
def rabi_rows():
    return experiments.rabi_robustness(NAMED_GATES["T"], (1.0,), quick_cfg())


@pytest.fixture(scope="module")
def ceiling_rows():
    return experiments.ceiling_robustness(
        NAMED_GATES["T"], (TWO_PI * 10e6, TWO_PI * 20e6), quick_cfg())


class TestDurationVsGamma:
    def test_row_count_is_grid_product(self, duration_rows):
        # 3 circular k's + oss + snhqc + square = 6 series of 8 points
        assert len(duration_rows) == 6 * 8

    def test_oss_rows_constant(self, duration_rows):
        taus = [r["tau_ns"] for r in duration_rows if r["scheme"] == "oss"]
        assert all(t == pytest.approx(78.5, rel=5e-3) for t in taus)

    def test_square_at_pi(self, duration_rows):
        row = [r for r in duration_rows if r["scheme"] == "square"
               and r["gamma_rad"] == pytest.approx(math.pi)][0]
        assert row["tau_ns"] == pytest.approx(50.0, rel=1e-6)

    def test_circular_k_ordering_above_third(self, duration_rows):
        for gamma in {r["gamma_rad"] for r in duration_rows}:
            taus = [r["tau_ns"] for r in duration_rows
                    if r["scheme"] == "circular" and r["gamma_rad"] == gamma]
            assert taus == sorted(taus)

    def test_snhqc_singular_row_marked(self, duration_rows):
        row = [r for r in duration_rows if r["scheme"] == "snhqc"
               and r["gamma_rad"] == pytest.approx(math.pi)][0]
        assert row["status"] == "singular"
        assert row["tau_ns"] is None

    def test_all_other_rows_ok(self, duration_rows):
        bad = [r for r in duration_rows if r["status"] != "ok"]
        assert len(bad) == 1


class TestEnvelopeExport:
    def test_tau_column_constant(self, envelope_rows):
        taus = {r["tau_ns"] for r in envelope_rows}
        assert len(taus) == 1
        assert taus.pop() == pytest.approx(39.8, rel=1e-2)

    def test_envelopes_start_and_end_at_zero(self, envelope_rows):
        for curve, omegas in by_curve(envelope_rows, "omega_MHz").items():
            assert omegas[0] == pytest.approx(0.0, abs=1e-9)
            assert omegas[-1] == pytest.approx(0.0, abs=1e-9)

    def test_peak_ordering_in_k(self, envelope_rows):
        peaks = {c: max(v) for c, v in by_curve(envelope_rows, "omega_MHz").items()}
        assert peaks["k=1.0"] < peaks["k=5.0"] < peaks["k=9.0"]

    def test_k1_peak_is_ceiling(self, envelope_rows):
        peaks = {c: max(v) for c, v in by_curve(envelope_rows, "omega_MHz").items()}
        assert peaks["k=1.0"] == pytest.approx(10.0, rel=1e-3)


class TestDetuningRobustness:
    def test_row_count(self, detuning_rows):
        assert len(detuning_rows) == 3 * 11          # k=1, k=9, oss

    def test_fidelities_in_unit_interval(self, detuning_rows):
        assert all(0.0 <= r["avg_fidelity"] <= 1.0 for r in detuning_rows)

    def test_curves_peak_at_zero(self, detuning_rows):
        deltas = sorted({r["delta_MHz"] for r in detuning_rows})
        for curve, fids in by_curve(detuning_rows, "avg_fidelity").items():
            best = max(range(len(fids)), key=fids.__getitem__)
            assert deltas[best] == pytest.approx(0.0, abs=1e-12), curve

    def test_larger_k_more_robust_at_one_mhz(self, detuning_rows):
        curves = {}
        for r in detuning_rows:
            curves.setdefault(r["curve"], {})[round(r["delta_MHz"], 6)] = r["avg_fidelity"]
        for delta in (-1.2, 1.2):
            key = round(delta, 6)
            assert curves["k=9.0"][key] > curves["k=1.0"][key]


class TestRabiRobustness:
    def test_peaks_at_zero(self, rabi_rows):
        eps = sorted({r["eps"] for r in rabi_rows})
        for curve, fids in by_curve(rabi_rows, "avg_fidelity").items():
            best = max(range(len(fids)), key=fids.__getitem__)
            assert eps[best] == pytest.approx(0.0, abs=1e-12)

    def test_zero_error_matches_detuning_sweep(self, rabi_rows):
        det = experiments.detuning_robustness(NAMED_GATES["T"], (1.0,), quick_cfg())
        f_eps0 = [r["avg_fidelity"] for r in rabi_rows
                  if r["curve"] == "k=1.0" and r["eps"] == 0.0][0]
        f_del0 = [r["avg_fidelity"] for r in det
                  if r["curve"] == "k=1.0" and r["delta_MHz"] == 0.0][0]
        assert f_eps0 == f_del0


class TestCeilingRobustness:
    def test_higher_ceiling_dominates_offsets(self, ceiling_rows):
        curves = {}
        for r in ceiling_rows:
            curves.setdefault(r["ceiling_MHz"], {})[round(r["delta_MHz"], 6)] = \
                r["avg_fidelity"]
        lo, hi = sorted(curves)
        for delta, fid in curves[hi].items():
            if abs(delta) > 0.5:
                assert fid > curves[lo][delta]

    def test_peaks_at_zero(self, ceiling_rows):
        curves = {}
        for r in ceiling_rows:
            curves.setdefault(r["ceiling_MHz"], []).append(
                (r["delta_MHz"], r["avg_fidelity"]))
        for pts in curves.values():
            best = max(pts, key=lambda p: p[1])
            assert best[0] == pytest.approx(0.0, abs=1e-12)

    def test_tau_halves_when_ceiling_doubles(self):
        from nhqc import schemes
        t1 = schemes.duration_for_ceiling("circular", NAMED_GATES["T"].spec,
                                          1.0, TWO_PI * 10e6)
        t2 = schemes.duration_for_ceiling("circular", NAMED_GATES["T"].spec,
                                          1.0, TWO_PI * 20e6)
        assert t2 == pytest.approx(t1 / 2, rel=1e-12)


class TestDeterminism:
    def test_identical_config_gives_identical_csv(self):
        cfg = quick_cfg(delta_grid=tuple(np.linspace(-TWO_PI * 2e6, TWO_PI * 2e6, 5)),
                        theta_points=5, phi_points=5, n_steps=1000)
        a = experiments.run_preset("fig5", "T", cfg, None)
        b = experiments.run_preset("fig5", "T", cfg, None)
        assert a == b

    def test_jobs_do_not_change_output(self):
        cfg = quick_cfg(delta_grid=tuple(np.linspace(-TWO_PI * 2e6, TWO_PI * 2e6, 3)),
                        theta_points=3, phi_points=5, n_steps=1000)
        serial = experiments.run_preset("fig5", "T", cfg, None)
        parallel = experiments.run_preset("fig5", "T", replace(cfg, jobs=2), None)
        assert serial == parallel


class TestCsvWriting:
    def test_metadata_and_rows(self):
        rows = [{"a": 1.5, "b": "x"}, {"a": None, "b": "y"}]
        buf = io.StringIO()
        text = experiments.write_csv(rows, ("a", "b"), [("k", "v")], buf)
        assert buf.getvalue() == text
        lines = text.splitlines()
        assert lines[0] == "# k=v"
        assert lines[1] == "a,b"
        assert lines[2] == "1.5,x"
        assert lines[3] == ",y"

    def test_unknown_preset_rejected(self):
        with pytest.raises(DomainError):
            experiments.run_preset("fig9", "T", quick_cfg(), None)
        with pytest.raises(DomainError):
            experiments.run_preset("fig5", "Z", quick_cfg(), None)


class TestConfigFile:
    def test_round_trip_keys(self, tmp_path):
        path = tmp_path / "sweep.cfg"
        path.write_text(
            "# comment line\n"
            "ceiling_mhz = 20\n"
            "delta_max_mhz = 1.5\n"
            "delta_points = 7\n"
            "eps_max = 0.1\n"
            "eps_points = 5\n"
            "gamma1_mhz = 0.003\n"
            "gamma2_mhz = 0.004\n"
            "n_steps = 1234\n"
            "theta_points = 5\n"
            "phi_points = 7\n"
            "jobs = 2\n"
            "k_list = 0.5, 2\n"
            "schemes = circular, square\n"
            "out = /tmp/out.csv\n")
        cfg = experiments.load_config(str(path))
        assert cfg.ceiling == pytest.approx(TWO_PI * 20e6)
        assert len(cfg.delta_grid) == 7
        assert max(cfg.delta_grid) == pytest.approx(TWO_PI * 1.5e6)
        assert len(cfg.eps_grid) == 5
        assert max(cfg.eps_grid) == pytest.approx(0.1)
        assert cfg.rates.gamma1 == pytest.approx(TWO_PI * 3e3)
        assert cfg.rates.gamma2 == pytest.approx(TWO_PI * 4e3)
        assert cfg.n_steps == 1234
        assert cfg.grid() == (5, 7)
        assert cfg.jobs == 2
        assert cfg.k_list == (0.5, 2.0)
        assert cfg.scheme_set == ("circular", "square")
        assert cfg.out_path == "/tmp/out.csv"

    def test_bad_lines_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("nonsense\n")
        with pytest.raises(DomainError):
            experiments.load_config(str(path))
        path.write_text("unknown_key = 3\n")
        with pytest.raises(DomainError):
            experiments.load_config(str(path))
