import math

import numpy as np
import pytest

from compwave.errors import AssumptionViolation, ValidationError
from compwave.limit import LimitParams, solve_limit_speed
from compwave.sweep import (
    RawEcologicalParams,
    SweepSpec,
    emit_report,
    read_report,
    rescale_parameters,
    run_sweep,
)


class TestRescale:
    def test_identity(self):
        raw = RawEcologicalParams(1, 1, 1, 1, 1, 1, 1, 1)
        assert rescale_parameters(raw) == (1.0, 1.0, 1.0, 1.0)

    def test_ordering_violation(self):
        raw = RawEcologicalParams(d1=1, d2=3, r1=2, r2=4, a1=1, a2=1, k1=5, k2=5)
        with pytest.raises(AssumptionViolation):
            rescale_parameters(raw)

    def test_direct_substitution(self):
        raw = RawEcologicalParams(d1=1, d2=3, r1=4, r2=2, a1=1, a2=1, k1=5, k2=5)
        k, alpha, d, r = rescale_parameters(raw)
        assert k == pytest.approx(2.5)
        assert alpha == pytest.approx(2.0)
        assert d == pytest.approx(3.0)
        assert r == pytest.approx(0.5)

    def test_positive_required(self):
        with pytest.raises(ValidationError):
            RawEcologicalParams(0.0, 1, 1, 1, 1, 1, 1, 1)

    def test_round_trip_through_limit_solver(self):
        raw = RawEcologicalParams(d1=2, d2=1, r1=1, r2=2, a1=1, a2=3, k1=2, k2=4)
        _, alpha, d, r = rescale_parameters(raw)
        c_from_raw = solve_limit_speed(LimitParams(alpha, r, d))
        c_by_hand = solve_limit_speed(LimitParams(
            alpha=4 * 3 * 1 / (2 * 1 * 2), r=2 / 1, d=1 / 2))
        assert abs(c_from_raw - c_by_hand) <= 1e-12


class TestSweep:
    def test_threshold_located(self):
        spec = SweepSpec(alpha=1.0, r=1.0,
                         d_grid=tuple(np.geomspace(0.2, 5.0, 9)))
        curve = run_sweep(spec)
        assert curve.sign_change_d == pytest.approx(1.0, abs=1e-6)
        assert np.all(np.isfinite(curve.c_inf))
        # speeds decrease along d
        assert all(b < a for a, b in zip(curve.c_inf, curve.c_inf[1:]))

    def test_threaded_matches_serial(self):
        spec = SweepSpec(alpha=2.0, r=1.0, d_grid=tuple(np.geomspace(1.0, 16.0, 5)))
        serial = run_sweep(spec, threads=1)
        threaded = run_sweep(spec, threads=4)
        assert np.array_equal(serial.c_inf, threaded.c_inf)
        assert serial.sign_change_d == threaded.sign_change_d

    def test_locator_matches_threshold_for_random_pairs(self):
        rng = np.random.default_rng(20240817)
        for _ in range(10):
            alpha = float(rng.uniform(0.5, 3.0))
            r = float(rng.uniform(0.5, 3.0))
            thr = alpha ** 2 / r
            spec = SweepSpec(alpha=alpha, r=r,
                             d_grid=(thr * 0.6, thr * 1.6))
            curve = run_sweep(spec)
            assert curve.sign_change_d == pytest.approx(thr, abs=1e-6)

    def test_with_k_columns(self):
        spec = SweepSpec(alpha=1.0, r=1.0, d_grid=(0.5, 2.0), k_list=(40.0,))
        curve = run_sweep(spec)
        col = curve.c_k_columns[40.0]
        assert np.all(np.isfinite(col))
        # finite-k speeds carry the same signs as the limit speeds here
        assert col[0] > 0 > col[1]


class TestReport:
    def test_csv_round_trip(self, tmp_path):
        spec = SweepSpec(alpha=1.0, r=1.0, d_grid=(0.5, 1.0, 2.0), k_list=(30.0,))
        curve = run_sweep(spec)
        path = tmp_path / "curve.csv"
        emit_report(curve, path)
        back = read_report(path)
        assert np.array_equal(back.d_values, curve.d_values)
        assert np.array_equal(back.c_inf, curve.c_inf)
        assert np.array_equal(back.c_k_columns[30.0], curve.c_k_columns[30.0])
        assert back.sign_change_d == curve.sign_change_d
        assert back.predicted_threshold == curve.predicted_threshold

    def test_byte_stable(self, tmp_path):
        spec = SweepSpec(alpha=1.5, r=2.0, d_grid=(0.4, 1.2, 3.0))
        curve = run_sweep(spec)
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        emit_report(curve, p1)
        emit_report(run_sweep(spec), p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_header_and_row_count(self, tmp_path):
        spec = SweepSpec(alpha=1.0, r=1.0, d_grid=(0.5, 1.0, 2.0))
        curve = run_sweep(spec)
        path = tmp_path / "c.csv"
        emit_report(curve, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "d,c_inf"
        assert len(lines) == 4

    def test_missing_cells_are_empty_fields(self, tmp_path):
        curve = run_sweep(SweepSpec(alpha=1.0, r=1.0, d_grid=(0.5, 2.0)))
        # simulate a failed cell
        c_inf = curve.c_inf.copy()
        c_inf[1] = math.nan
        from dataclasses import replace
        broken = replace(curve, c_inf=c_inf,
                         diagnostics=("d=2: c_inf failed: synthetic",))
        path = tmp_path / "d.csv"
        emit_report(broken, path)
        row = path.read_text().splitlines()[2]
        cells = row.split(",")
        assert cells[1] == ""
        assert "nan" not in path.read_text().lower()


class TestSpecValidation:
    def test_d_grid_sorted(self):
        with pytest.raises(ValidationError):
            SweepSpec(alpha=1.0, r=1.0, d_grid=(2.0, 1.0))

    def test_k_list_above_one(self):
        with pytest.raises(ValidationError):
            SweepSpec(alpha=1.0, r=1.0, d_grid=(0.5, 1.0), k_list=(0.5,))
