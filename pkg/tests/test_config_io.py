import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from curvewire.config import config_from_dict, config_to_dict, dump_config, parse_config
from curvewire.geometry import DoubleGaussian, Flat, SingleGaussian, Tabulated, reference_single_gaussian
from curvewire.output import (
    CSV_HEADER,
    build_manifest,
    emit_plot,
    read_spectrum_csv,
    spectrum_csv_text,
    write_manifest,
    write_spectrum_csv,
)
from curvewire.sweep import ConfigError, SweepConfig, run_spectrum


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.fixture(scope="module")
def flat_spectrum():
    return run_spectrum(SweepConfig(profile=Flat(500.0), e_min_mev=1.0, e_max_mev=100.0, n_energies=25))


def test_minimal_config_defaults(tmp_path):
    cfg = parse_config(_write(tmp_path, 'profile = "single_gaussian"\n'))
    p = cfg.profile
    assert isinstance(p, SingleGaussian)
    assert p.window == 1000.0
    assert p.amplitude == pytest.approx(200.0)
    assert p.center == pytest.approx(500.0)
    assert p.sigma == pytest.approx(1000.0 / (4 * math.pi))
    assert cfg.mass == 1.0
    assert (cfg.e_min_mev, cfg.e_max_mev, cfg.n_energies, cfg.spacing) == (0.5, 120.0, 600, "log")
    assert p == reference_single_gaussian()


def test_empty_file_lists_required_keys(tmp_path):
    with pytest.raises(ConfigError, match="profile"):
        parse_config(_write(tmp_path, ""))


def test_odd_double_gaussian(tmp_path):
    cfg = parse_config(_write(tmp_path, 'profile = "double_gaussian"\nshift = "0.15L"\nparity = "odd"\n'))
    p = cfg.profile
    assert isinstance(p, DoubleGaussian)
    assert p.shift == pytest.approx(150.0)
    assert p.parity == "odd"
    x0 = p.padding + p.center
    f_left = p.derivatives(np.array(x0 - p.shift))[0]
    f_right = p.derivatives(np.array(x0 + p.shift))[0]
    assert f_left == pytest.approx(-f_right, rel=1e-14)


@pytest.mark.parametrize(
    "text, match",
    [
        ('profile = "single_gaussian"\nwidth = 3\n', "width"),
        ('profile = "single_gaussian"\n[energy]\nn_points = 3\n', "n_points"),
        ('profile = "spiral"\n', "profile"),
        ('profile = "single_gaussian"\n[energy]\nn = 1\n', "energy.n"),
        ('profile = "single_gaussian"\n[energy]\nn = "many"\n', "energy.n"),
        ('profile = "double_gaussian"\nparity = "odd"\n', "shift"),
        ('profile = "single_gaussian"\npadding = 0\n', "flat"),
    ],
)
def test_invalid_configs(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(_write(tmp_path, text))


def test_syntax_error_reports_line(tmp_path):
    with pytest.raises(ConfigError, match="line 2"):
        parse_config(_write(tmp_path, 'profile = "flat"\nlength = = 3\n'))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "absent.toml")


def test_tabulated_from_file(tmp_path):
    prof = reference_single_gaussian()
    xs = np.linspace(0, prof.length, 2001)
    np.savetxt(tmp_path / "curve.csv", np.column_stack([xs, prof.derivatives(xs)[0]]), delimiter=",")
    cfg = parse_config(_write(tmp_path, 'profile = "tabulated"\nsamples_file = "curve.csv"\n'))
    assert isinstance(cfg.profile, Tabulated)
    assert cfg.profile.length == pytest.approx(prof.length)


@pytest.mark.parametrize(
    "doc",
    [
        {"profile": "single_gaussian"},
        {"profile": "double_gaussian", "shift": "0.25L", "parity": "even", "lattice": {"a": 0.25}},
        {"profile": "flat", "length": 640.0, "energy": {"n": 17, "spacing": "linear"}, "threads": 3},
        {"profile": "tabulated", "samples": [[float(x), 0.0] for x in range(9)]},
        {"profile": "single_gaussian", "hartman": {"stretches": [0.5, 1.5], "mode": "sigma"}},
    ],
)
def test_round_trip(tmp_path, doc):
    cfg = config_from_dict(doc, for_hartman="hartman" in doc)
    again = parse_config(_write(tmp_path, dump_config(cfg)))
    assert again == cfg
    assert config_to_dict(again) == config_to_dict(cfg)


def test_csv_header_and_rows(tmp_path, flat_spectrum):
    path = write_spectrum_csv(flat_spectrum, tmp_path / "s.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "E_meV,T,R,phase_F_rad,tau_W_fs,tau_C_fs,flag"
    assert ",".join(CSV_HEADER) == lines[0]
    assert len(lines) - 1 == len(flat_spectrum)
    assert all(float(line.split(",")[1]) == pytest.approx(1.0, abs=5e-12) for line in lines[1:])


def test_csv_fidelity(tmp_path, single_spectrum):
    back = read_spectrum_csv(write_spectrum_csv(single_spectrum, tmp_path / "s.csv"))
    for name in ("energies", "T", "phase_f", "tau_w", "tau_c"):
        a, b = getattr(single_spectrum, name), getattr(back, name)
        assert np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)) < 1e-10
    assert back.flags == single_spectrum.flags


def test_csv_rerun_is_byte_identical(single_gaussian):
    cfg = SweepConfig(profile=single_gaussian, n_energies=50)
    assert spectrum_csv_text(run_spectrum(cfg)) == spectrum_csv_text(run_spectrum(cfg))


def test_csv_write_error_names_path(tmp_path, flat_spectrum):
    target = tmp_path / "missing" / "s.csv"
    with pytest.raises(OSError, match="missing"):
        write_spectrum_csv(flat_spectrum, target)


def test_manifest_contents(tmp_path, flat_spectrum):
    cfg = SweepConfig(profile=Flat(500.0), e_min_mev=1.0, e_max_mev=100.0, n_energies=25)
    manifest = build_manifest(dump_config(cfg), flat_spectrum, 0.1)
    for key in ("code_version", "units", "config_toml", "lattice_constant", "convergence", "diagnostics", "wall_time_s"):
        assert key in manifest
    path = write_manifest(manifest, tmp_path / "m.json")
    # the echoed config alone reproduces the output
    echoed = parse_config(_write(tmp_path, manifest["config_toml"], "echo.toml"))
    assert spectrum_csv_text(run_spectrum(echoed)) == spectrum_csv_text(flat_spectrum)
    assert path.read_text().endswith("\n")


def test_svg_is_well_formed(tmp_path, single_spectrum, flat_spectrum):
    for spec in (single_spectrum, flat_spectrum):
        path = emit_plot(spec, tmp_path / "fig.svg", title="test")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
    with pytest.raises(OSError):
        emit_plot(flat_spectrum, tmp_path / "nope" / "fig.svg")
