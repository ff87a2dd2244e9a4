"""Tests for config parsing, overrides and canonical documents."""

import json
import math

import pytest

from magnon_sagnac import (
    ConfigError,
    RotationDirection,
    RotationSpec,
    SystemParams,
    apply_overrides,
    default_document,
    drive_amplitude,
    load_config,
    parse_config,
    resolved_document,
    validate,
)


class TestDefaults:
    def test_empty_document_gives_demo_set(self):
        cfg = parse_config({})
        assert cfg.params == SystemParams.symmetric()
        assert cfg.band == (-65.0, 65.0)
        assert cfg.rotation == RotationSpec()

    def test_default_document_is_equivalent(self):
        assert parse_config(default_document()).params == \
            parse_config({}).params

    def test_non_object_rejected(self):
        with pytest.raises(ConfigError):
            parse_config([1, 2, 3])


class TestStrictKeys:
    def test_top_level(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config({"kappa": 1.0})

    def test_rotation(self):
        with pytest.raises(ConfigError, match="unknown rotation key"):
            parse_config({"rotation": {"spin_hz": 100.0}})

    def test_drive(self):
        with pytest.raises(ConfigError, match="unknown drive key"):
            parse_config({"drive": {"eps": [1, 1, 1], "power": 0.1}})

    def test_kappa_object(self):
        with pytest.raises(ConfigError, match="unknown kappa_mhz key"):
            parse_config({"kappa_mhz": {"total": 1.1, "ext": 0.5}})


class TestShapes:
    def test_coupling_pair(self):
        cfg = parse_config({"g0_mhz": [41.0, 61.5]})
        assert cfg.params.g0_1_mhz == 41.0
        assert cfg.params.g0_2_mhz == 61.5

    def test_eta_pair_with_scalar_kappa(self):
        cfg = parse_config({"eta": [0.3, 0.7]})
        assert cfg.params.mode_1.kappa_ext_mhz == pytest.approx(0.33)
        assert cfg.params.mode_2.kappa_ext_mhz == pytest.approx(0.77)

    def test_kappa_total_external_object(self):
        cfg = parse_config({"kappa_mhz": {"total": [1.1, 2.2],
                                          "external": [0.5, 0.6]}})
        assert cfg.params.mode_1.kappa_mhz == 1.1
        assert cfg.params.mode_2.kappa_ext_mhz == 0.6

    def test_eta_conflicts_with_kappa_object(self):
        with pytest.raises(ConfigError, match="eta cannot be combined"):
            parse_config({"eta": 0.5,
                          "kappa_mhz": {"total": 1.1, "external": 0.55}})

    def test_kappa_object_needs_both_parts(self):
        with pytest.raises(ConfigError):
            parse_config({"kappa_mhz": {"total": 1.1}})

    def test_bad_pair_shape(self):
        with pytest.raises(ConfigError):
            parse_config({"g0_mhz": [1.0, 2.0, 3.0]})
        with pytest.raises(ConfigError):
            parse_config({"g0_mhz": "41"})

    def test_boolean_is_not_a_number(self):
        with pytest.raises(ConfigError):
            parse_config({"gamma_m_mhz": True})


class TestDrive:
    def test_power_form_converts_to_amplitudes(self):
        cfg = parse_config({"drive": {"power_w": [0.1, 0.1, 0.1]}})
        eps = drive_amplitude(0.1, 1.93e8)
        assert cfg.params.drive.eps_1 == pytest.approx(eps, rel=1e-12)
        assert cfg.params.drive.eps_2 == cfg.params.drive.eps_1
        # magnon drive lands in the squeezed frame (G = 0.5 by default)
        assert cfg.params.drive.eps_3_eff == pytest.approx(
            math.exp(-0.5) * eps, rel=1e-12)

    def test_power_form_pump_frequency_override(self):
        low = parse_config({"drive": {"power_w": [0.1, 0.1, 0.1],
                                      "omega_p_mhz": 0.5e8}})
        assert low.params.drive.eps_1 == pytest.approx(
            drive_amplitude(0.1, 0.5e8), rel=1e-12)

    def test_exactly_one_form(self):
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config({"drive": {}})
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config({"drive": {"eps": [1, 1, 1],
                                    "power_w": [0.1, 0.1, 0.1]}})

    def test_eps_rejects_pump_frequency(self):
        with pytest.raises(ConfigError):
            parse_config({"drive": {"eps": [1, 1, 1], "omega_p_mhz": 1.93e8}})

    def test_wrong_length(self):
        with pytest.raises(ConfigError):
            parse_config({"drive": {"eps": [1.0, 1.0]}})

    def test_negative_power(self):
        with pytest.raises(ConfigError, match="drive"):
            parse_config({"drive": {"power_w": [-0.1, 0.1, 0.1]}})


class TestRotationAndBand:
    def test_partial_rotation_merges_defaults(self):
        cfg = parse_config({"rotation": {"omega_rot_hz": 1.0e4}})
        assert cfg.rotation.omega_rot_hz == 1.0e4
        assert cfg.rotation.refractive_index == 2.2
        assert cfg.rotation.omega0_mhz == pytest.approx(1.93e8)

    def test_direction_values(self):
        cfg = parse_config({"rotation": {"direction": "ccw"}})
        assert cfg.rotation.direction is RotationDirection.CCW
        with pytest.raises(ConfigError, match="direction"):
            parse_config({"rotation": {"direction": "up"}})

    def test_band(self):
        assert parse_config({"band_mhz": [-10.0, 10.0]}).band == (-10.0, 10.0)
        with pytest.raises(ConfigError):
            parse_config({"band_mhz": [10.0, -10.0]})
        with pytest.raises(ConfigError):
            parse_config({"band_mhz": [1.0, 2.0, 3.0]})

    def test_bias_field(self):
        cfg = parse_config({"bias_field_t": 0.5, "omega_m_mhz": 14000.0})
        assert cfg.params.magnon.bias_field_t == 0.5
        assert validate(cfg.params) == []
        # an explicit null is the same as leaving it out
        assert parse_config(
            {"bias_field_t": None}).params.magnon.bias_field_t is None


class TestResolvedDocument:
    CASES = (
        {},
        {"g0_mhz": [41.0, 61.5], "delta_mhz": 22.0},
        {"eta": [0.3, 0.7], "kappa_mhz": [1.1, 2.2]},
        {"kappa_mhz": {"total": 1.1, "external": [0.4, 0.5]}},
        {"drive": {"power_w": [0.1, 0.2, 0.3]}, "G": 0.25},
        {"rotation": {"direction": "ccw", "omega0_thz": 200.0},
         "band_mhz": [-40.0, 40.0], "bias_field_t": 0.5,
         "omega_m_mhz": 14000.0},
    )

    @pytest.mark.parametrize("raw", CASES)
    def test_fixed_point(self, raw):
        first = parse_config(raw)
        doc = resolved_document(first)
        second = parse_config(doc)
        assert second.params == first.params
        assert second.band == first.band
        assert second.rotation == first.rotation
        assert resolved_document(second) == doc

    def test_canonical_form_is_explicit(self):
        doc = resolved_document(parse_config({}))
        assert "eta" not in doc
        assert set(doc["kappa_mhz"]) == {"total", "external"}
        assert doc["drive"] == {"eps": [1.0, 1.0, 1.0]}
        assert json.dumps(doc)  # JSON-serializable as-is


class TestLoadAndOverrides:
    def test_load_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"delta_mhz": 22.0}', encoding="utf-8")
        assert load_config(path) == {"delta_mhz": 22.0}

    def test_load_rejects_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"delta_mhz": }', encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(path)
        path.write_text('[1, 2]', encoding="utf-8")
        with pytest.raises(ConfigError, match="object"):
            load_config(path)

    def test_scalar_and_nested_overrides(self):
        doc = apply_overrides({}, ["delta_mhz=22", "rotation.direction=ccw",
                                   "g0_mhz=[41, 61.5]"])
        assert doc == {"delta_mhz": 22,
                       "rotation": {"direction": "ccw"},
                       "g0_mhz": [41, 61.5]}

    def test_overrides_do_not_mutate_input(self):
        raw = {"delta_mhz": 5.0}
        out = apply_overrides(raw, ["delta_mhz=22"])
        assert raw == {"delta_mhz": 5.0}
        assert out["delta_mhz"] == 22

    def test_override_wins_over_file_value(self):
        raw = {"delta_mhz": 5.0}
        cfg = parse_config(apply_overrides(raw, ["delta_mhz=22"]))
        assert cfg.params.delta_mhz == 22.0

    def test_bad_overrides(self):
        with pytest.raises(ConfigError):
            apply_overrides({}, ["no_equals_sign"])
        with pytest.raises(ConfigError):
            apply_overrides({"delta_mhz": 1.0}, ["delta_mhz.deep=2"])
