import pytest

from slitcorr.config import ExperimentConfig, load_config, parse_config, parse_length
from slitcorr.errors import ConfigError


def test_empty_file_gives_reference_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("", encoding="utf-8")
    cfg = load_config(path)
    assert cfg == ExperimentConfig()
    assert (cfg.slit_width, cfg.slit_separation) == (55e-6, 100e-6)
    assert (cfg.wavelength, cfg.distance_z) == (632.8e-9, 0.55)
    assert cfg.normalized_bandwidth == 0.52
    assert (cfg.delta, cfg.eta) == (0.04, 0.66)
    assert cfg.matches_reference_experiment()
    assert not cfg.has_mc


def test_comments_and_blank_lines():
    cfg = parse_config("# header\n\nwavelength = 633nm   # rounded\n")
    assert cfg.wavelength == pytest.approx(633e-9, rel=1e-15)


def test_zero_slit_width_names_key():
    with pytest.raises(ConfigError) as info:
        parse_config("slit_width = 0")
    assert info.value.key == "slit_width"
    assert "slit_width" in str(info.value)


@pytest.mark.parametrize("text, meters", [
    ("55um", 55e-6), ("55 µm", 55e-6), ("5.5e-5m", 5.5e-5), ("0.055mm", 55e-6),
    ("55000nm", 55e-6), ("5.5e-5", 5.5e-5),
])
def test_length_units(text, meters):
    assert parse_length(text) == meters


def test_equivalent_units_give_identical_configs():
    a = parse_config("slit_width = 55um")
    b = parse_config("slit_width = 5.5e-5m")
    assert a == b
    assert a.slit_width == 5.5e-5


def test_parse_error_has_line_number():
    with pytest.raises(ConfigError) as info:
        parse_config("wavelength = 632.8nm\nthis line has no equals sign\n")
    assert info.value.line == 2
    assert ":2:" in str(info.value)


def test_unknown_key_named():
    with pytest.raises(ConfigError) as info:
        parse_config("slit_widht = 55um")
    assert info.value.key == "slit_widht"
    assert "slit_widht" in str(info.value)


@pytest.mark.parametrize("text, key", [
    ("slit_width = 55um\nslit_width = 60um", "slit_width"),
    ("x_points = 12.5", "x_points"),
    ("detection = maybe", "detection"),
    ("source = laser", "source"),
    ("wavelength = red", "wavelength"),
    ("eta = 1.5", "eta"),
    ("slit_separation = 40um", "slit_separation"),
    ("normalized_bandwidth = -1", "normalized_bandwidth"),
    ("mc_realizations = 0", "mc_realizations"),
    ("mc_seed = -1", "mc_seed"),
    ("mc_batches = 1", "mc_batches"),
    ("quad_points = 11", "quad_points"),
])
def test_invalid_values_name_the_key(text, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key


def test_g1_requires_intensity_mode():
    with pytest.raises(ConfigError):
        parse_config("kind = G1\nscan_mode = antisymmetric")


def test_mc_section():
    cfg = parse_config("mc_seed = 7\nmc_realizations = 5000")
    assert cfg.has_mc
    mc = cfg.mc_config()
    assert (mc.seed, mc.n_realizations) == (7, 5000)


def test_items_round_trip():
    cfg = parse_config("slit_width = 60um\nsource = coherent\nkind = G1\nscan_mode = intensity")
    text = "\n".join(f"{k} = {v}" for k, v in cfg.items())
    assert parse_config(text) == cfg
    assert not cfg.matches_reference_experiment()


def test_non_utf8_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_bytes(b"wavelength = 632.8\xffnm\n")
    with pytest.raises(ConfigError):
        load_config(path)
