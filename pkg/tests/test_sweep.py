"""Tests for grid sweeps, shift policies, error masking and presets."""

import dataclasses

import numpy as np
import pytest

from magnon_sagnac import (
    Axis,
    DeltaFPolicy,
    DriveAmplitudes,
    PRESET_NAMES,
    SqueezeSpec,
    SweepError,
    SweepParameter,
    SystemParams,
    apply_parameter,
    brute_force_optimum,
    extremal_fizeau_symmetric,
    figure_preset,
    parameter_value,
    run_preset,
    sweep,
    transmissions,
    with_delta_f,
)
from magnon_sagnac.sweep import THREADS_ENV_VAR, _resolve_threads


class TestAxis:
    def test_values_are_inclusive_linspace(self):
        ax = Axis(SweepParameter.GAMMA_M, 1.0, 12.0, 12)
        np.testing.assert_allclose(ax.values(), np.arange(1.0, 13.0))

    def test_rejects_bad_counts_and_ranges(self):
        with pytest.raises(ValueError):
            Axis(SweepParameter.GAMMA_M, 1.0, 12.0, 1)
        with pytest.raises(ValueError):
            Axis(SweepParameter.GAMMA_M, 5.0, 5.0, 11)
        with pytest.raises(ValueError):
            Axis(SweepParameter.GAMMA_M, 9.0, 5.0, 11)

    def test_normalization(self, base_params):
        ax = Axis(SweepParameter.DELTA_F, -16.0, 16.0, 5,
                  normalization=SweepParameter.GAMMA_M)
        assert ax.scale(base_params) == 4.0
        assert ax.label() == "delta_f/gamma_m"
        plain = Axis(SweepParameter.KAPPA, 0.1, 2.0, 5)
        assert plain.scale(base_params) == 1.0
        assert plain.label() == "kappa"

    def test_rejects_unsupported_normalization(self):
        with pytest.raises(ValueError):
            Axis(SweepParameter.DELTA_F, -1.0, 1.0, 3,
                 normalization=SweepParameter.DELTA)


class TestApplyParameter:
    @pytest.mark.parametrize("parameter,value", [
        (SweepParameter.DELTA_F, 12.5),
        (SweepParameter.GAMMA_M, 2.75),
        (SweepParameter.KAPPA, 0.7),
        (SweepParameter.DELTA, -9.0),
        (SweepParameter.SQUEEZE, 0.85),
        (SweepParameter.COUPLING_RATIO, 1.6),
        (SweepParameter.OMEGA_S, 55.0),
    ])
    def test_round_trip(self, base_params, parameter, value):
        updated = apply_parameter(base_params, parameter, value)
        assert parameter_value(updated, parameter) == pytest.approx(
            value, rel=1e-12)

    def test_kappa_rewrite_preserves_eta(self, base_params):
        updated = apply_parameter(base_params, SweepParameter.KAPPA, 0.3)
        for mode in (updated.mode_1, updated.mode_2):
            assert mode.kappa_mhz == 0.3
            assert mode.eta == pytest.approx(0.5, rel=1e-12)

    def test_squeeze_requires_direct_mode(self, base_params):
        pumped = dataclasses.replace(base_params,
                                     squeeze=SqueezeSpec.from_pump(10.0, 5.0))
        with pytest.raises(SweepError):
            apply_parameter(pumped, SweepParameter.SQUEEZE, 0.3)


class TestResolveThreads:
    def test_explicit_wins(self):
        assert _resolve_threads(4) == 4
        assert _resolve_threads(1) == 1
        assert _resolve_threads(0) == 1

    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "6")
        assert _resolve_threads(None) == 6
        monkeypatch.delenv(THREADS_ENV_VAR)
        assert _resolve_threads(None) == 1

    def test_invalid_env(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "many")
        with pytest.raises(ValueError):
            _resolve_threads(None)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            _resolve_threads(-2)


class TestSweepGrid:
    def test_one_axis_matches_scalar_path(self, base_params):
        ax = Axis(SweepParameter.DELTA_F, -50.0, 50.0, 21)
        res = sweep(base_params, [ax])
        assert res.shape == (21,)
        assert not res.error_codes
        for k, df in enumerate(ax.values()):
            report = transmissions(with_delta_f(base_params, float(df)))
            assert res.t12[k] == pytest.approx(report.t12, rel=1e-12)
            assert res.t21[k] == pytest.approx(report.t21, rel=1e-12)
            assert res.i_signed_db[k] == pytest.approx(report.i_signed_db,
                                                       abs=1e-10)

    def test_two_axes_indexing_and_params_at(self, base_params):
        axes = [Axis(SweepParameter.DELTA_F, -40.0, 40.0, 5),
                Axis(SweepParameter.GAMMA_M, 2.0, 8.0, 4)]
        res = sweep(base_params, axes)
        assert res.shape == (5, 4)
        for idx in ((0, 0), (2, 3), (4, 1), (3, 2)):
            report = transmissions(res.params_at(*idx))
            assert res.t12[idx] == pytest.approx(report.t12, rel=1e-12)
            assert res.t21[idx] == pytest.approx(report.t21, rel=1e-12)
            assert res.report_at(*idx).i_abs_db == pytest.approx(
                report.i_abs_db, abs=1e-10)

    def test_normalized_axis_scales_physical_values(self, base_params):
        ax = Axis(SweepParameter.DELTA_F, -4.0, 4.0, 9,
                  normalization=SweepParameter.GAMMA_M)
        res = sweep(base_params, [ax])
        np.testing.assert_allclose(res.axis_values[0], ax.values())
        np.testing.assert_allclose(res.delta_f_mhz, 4.0 * ax.values())
        assert list(res.meta["axis_labels"]) == ["delta_f/gamma_m"]

    def test_squeeze_axis_matches_manual_substitution(self, base_params):
        ax = Axis(SweepParameter.SQUEEZE, 0.0, 1.0, 5)
        res = sweep(with_delta_f(base_params, 20.0), [ax])
        for k, g in enumerate(ax.values()):
            manual = dataclasses.replace(
                with_delta_f(base_params, 20.0),
                squeeze=SqueezeSpec.direct(float(g), 0.0))
            report = transmissions(manual)
            assert res.t12[k] == pytest.approx(report.t12, rel=1e-12)
            assert res.i_signed_db[k] == pytest.approx(report.i_signed_db,
                                                       abs=1e-10)

    def test_rejects_bad_axes(self, base_params):
        with pytest.raises(SweepError):
            sweep(base_params, [])
        with pytest.raises(SweepError):
            sweep(base_params, [Axis(SweepParameter.DELTA_F, 0, 1, 3)] * 3)
        with pytest.raises(SweepError):
            sweep(base_params, [Axis(SweepParameter.GAMMA_M, 1, 2, 3),
                                Axis(SweepParameter.GAMMA_M, 3, 4, 3)])

    def test_rejects_invalid_base(self, base_params):
        bad = dataclasses.replace(base_params, g0_1_mhz=-5.0)
        with pytest.raises(SweepError):
            sweep(bad, [Axis(SweepParameter.DELTA_F, -1.0, 1.0, 3)])


class TestErrorMasking:
    def test_nonpositive_rates_are_masked(self, base_params):
        ax = Axis(SweepParameter.GAMMA_M, -2.0, 6.0, 5)  # -2, 0, 2, 4, 6
        res = sweep(base_params, [ax])
        assert res.error_code_at(0) == "RATE_POSITIVE"
        assert res.error_code_at(1) == "RATE_POSITIVE"
        assert res.error_code_at(2) is None
        assert np.isnan(res.t12[:2]).all()
        assert np.isfinite(res.t12[2:]).all()
        assert list(res.directions()[:2]) == ["", ""]

    def test_all_points_failing_raises(self, base_params):
        ax = Axis(SweepParameter.GAMMA_M, -5.0, -1.0, 3)
        with pytest.raises(SweepError):
            sweep(base_params, [ax])

    def test_vanishing_backward_is_informational(self, base_params):
        ax = Axis(SweepParameter.COUPLING_RATIO, 0.0, 1.0, 3)
        res = sweep(with_delta_f(base_params, 10.0), [ax])
        assert res.error_code_at(0) == "INF_ISOLATION"
        assert np.isinf(res.ratio[0]) and np.isinf(res.i_signed_db[0])
        assert np.isfinite(res.t12[0])  # forward value retained
        assert res.error_code_at(1) is None


class TestDeltaFPolicies:
    def test_extremal_positive_matches_closed_form(self, base_params):
        ax = Axis(SweepParameter.GAMMA_M, 1.0, 12.0, 12)
        res = sweep(base_params, [ax],
                    delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE)
        for k, gm in enumerate(ax.values()):
            point = apply_parameter(base_params, SweepParameter.GAMMA_M,
                                    float(gm))
            ex = extremal_fizeau_symmetric(point)
            assert res.delta_f_mhz[k] == pytest.approx(ex.delta_f_plus_mhz,
                                                       rel=1e-9)
            assert res.i_signed_db[k] == pytest.approx(ex.isolation_db,
                                                       abs=1e-8)

    def test_extremal_negative_is_the_mirror(self, base_params):
        ax = Axis(SweepParameter.GAMMA_M, 2.0, 8.0, 4)
        plus = sweep(base_params, [ax],
                     delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE)
        minus = sweep(base_params, [ax],
                      delta_f_policy=DeltaFPolicy.EXTREMAL_NEGATIVE)
        np.testing.assert_allclose(minus.delta_f_mhz, -plus.delta_f_mhz,
                                   rtol=1e-12)
        np.testing.assert_allclose(minus.i_signed_db, -plus.i_signed_db,
                                   atol=1e-9)

    def test_band_clamps_the_shift(self):
        strong = SystemParams.symmetric(g_squeeze=1.0)  # extremum at 80.9
        ax = Axis(SweepParameter.GAMMA_M, 3.9, 4.1, 3)
        clamped = sweep(strong, [ax],
                        delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE,
                        delta_f_band=(-65.0, 65.0))
        free = sweep(strong, [ax],
                     delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE)
        assert np.all(clamped.delta_f_mhz == 65.0)
        assert free.delta_f_mhz[1] == pytest.approx(80.89126446739945,
                                                    rel=1e-10)
        assert np.all(free.i_signed_db > clamped.i_signed_db)

    def test_policy_conflicts_with_shift_axis(self, base_params):
        ax = Axis(SweepParameter.DELTA_F, -10.0, 10.0, 5)
        with pytest.raises(SweepError):
            sweep(base_params, [ax],
                  delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE)

    def test_fallback_for_nonuniform_ports(self, base_params):
        lopsided = dataclasses.replace(base_params,
                                       drive=DriveAmplitudes(1.0, 1.0, 0.5))
        ax = Axis(SweepParameter.GAMMA_M, 3.0, 5.0, 3)
        res = sweep(lopsided, [ax],
                    delta_f_policy=DeltaFPolicy.EXTREMAL_POSITIVE,
                    delta_f_band=(-65.0, 65.0))
        for k, gm in enumerate(ax.values()):
            point = apply_parameter(lopsided, SweepParameter.GAMMA_M,
                                    float(gm))
            opt = brute_force_optimum(point, band=(0.0, 65.0),
                                      grid_points=301)
            assert res.delta_f_mhz[k] == pytest.approx(opt.delta_f_mhz,
                                                       abs=1e-5)
            assert abs(res.i_signed_db[k]) == pytest.approx(opt.isolation_db,
                                                            abs=1e-8)


class TestThreading:
    def test_results_do_not_depend_on_thread_count(self, base_params):
        axes = [Axis(SweepParameter.DELTA_F, -30.0, 30.0, 16),
                Axis(SweepParameter.GAMMA_M, 1.0, 9.0, 5)]
        single = sweep(base_params, axes, threads=1)
        threaded = sweep(base_params, axes, threads=3)
        for name in ("t12", "t21", "ratio", "i_signed_db", "delta_f_mhz"):
            assert getattr(single, name).tobytes() == \
                getattr(threaded, name).tobytes()
        assert single.error_codes == threaded.error_codes

    def test_env_variable_is_honored(self, base_params, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "2")
        ax = Axis(SweepParameter.DELTA_F, -5.0, 5.0, 8)
        res = sweep(base_params, [ax])
        assert res.meta["threads"] == 2


class TestPresets:
    def test_catalog(self):
        assert PRESET_NAMES == ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a",
                                "fig4b", "fig5a", "fig5b", "fig6", "fig7a",
                                "fig7b")
        with pytest.raises(ValueError):
            figure_preset("fig99")

    def test_shift_scan_preset(self):
        preset, res = run_preset("fig2b")
        assert res.shape == (6401,)
        assert not res.error_codes
        k = int(np.argmax(res.i_abs_db))
        assert res.axis_values[0][k] == pytest.approx(-8.295, abs=1e-9)
        assert res.i_abs_db[k] == pytest.approx(41.63067835034355, rel=1e-9)
        assert preset.plot == "i_abs"

    def test_detuning_rows_cross_the_reciprocal_point(self):
        _, res = run_preset("fig5a")
        assert res.shape == (3, 551)
        rows = {float(v): k for k, v in enumerate(res.axis_values[0])}
        assert set(rows) == {0.0, 11.0, 22.0}
        assert np.all(res.i_signed_db[rows[0.0]] > 0.0)
        row22 = res.i_signed_db[rows[22.0]]
        assert row22.max() > 0.0 and row22.min() < 0.0

    def test_squeeze_preset_is_monotone_in_g(self):
        _, res = run_preset("fig6")
        assert res.shape == (5, 551)
        assert np.all(np.diff(res.i_abs_db, axis=0) > 0.0)

    def test_coupling_ratio_branches_have_fixed_sign(self):
        _, plus = run_preset("fig7a")
        _, minus = run_preset("fig7b")
        assert np.all(plus.i_signed_db > 0.0)
        assert np.all(minus.i_signed_db < 0.0)
