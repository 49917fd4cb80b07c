"""TOML run configuration.

A minimal file is a single line::

    profile = "single_gaussian"

which reproduces the reference single-dent setup (L = 1000 a0, A = 0.2 L,
x0 = 0.5 L, sigma = L / 4 pi, m0 = m_e). Lengths are in bohr; a string such
as ``"0.15L"`` is read as a fraction of ``length``. Energies are in meV.
"""
from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .geometry import (
    DoubleGaussian,
    Flat,
    ProfileError,
    SingleGaussian,
    Tabulated,
    required_padding,
)
from .sweep import ConfigError, HartmanSettings, SweepConfig

PROFILE_KINDS = ("flat", "single_gaussian", "double_gaussian", "tabulated")
REQUIRED_KEYS = ("profile",)

_PROFILE_KEYS = {
    "flat": {"length"},
    "single_gaussian": {"length", "amplitude", "center", "sigma", "padding"},
    "double_gaussian": {"length", "amplitude", "center", "sigma", "shift", "parity", "padding"},
    "tabulated": {"samples", "samples_file"},
}
_TOP_KEYS = {"profile", "mass", "threads", "energy", "lattice", "delay", "refinement", "hartman"}

# section -> key -> (SweepConfig field, type)
_SECTIONS = {
    "energy": {
        "e_min_meV": ("e_min_mev", float),
        "e_max_meV": ("e_max_mev", float),
        "n": ("n_energies", int),
        "spacing": ("spacing", str),
    },
    "lattice": {
        "a": ("lattice_constant", float),
        "auto_converge": ("auto_converge", bool),
        "tolerance": ("convergence_tol", float),
        "max_halvings": ("max_resolution_halvings", int),
    },
    "delay": {
        "rel_step": ("delay_rel_step", float),
        "min_step_meV": ("delay_min_step_mev", float),
        "tolerance": ("delay_tol", float),
        "max_halvings": ("delay_max_halvings", int),
    },
    "refinement": {
        "max_depth": ("refine_max_depth", int),
        "floor_meV": ("refine_floor_mev", float),
    },
}


def _typed(value, typ, where):
    if typ is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
        return value
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where} must be a string")
    return value


def _length(value, scale, where):
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("L"):
            try:
                return float(text[:-1]) * scale
            except ValueError:
                pass
        raise ConfigError(f"{where} must be a number or a fraction of length like '0.15L'")
    return _typed(value, float, where)


def _build_profile(doc, base_dir, max_stretch=1.0, mode="both"):
    kind = doc["profile"]
    if kind not in PROFILE_KINDS:
        raise ConfigError(f"profile must be one of {', '.join(PROFILE_KINDS)}; got {kind!r}")
    allowed = _PROFILE_KEYS[kind]
    stray = {k for k in doc if k not in _TOP_KEYS and k not in allowed}
    if stray:
        raise ConfigError(f"unknown key(s) for profile {kind!r}: {', '.join(sorted(stray))}")

    if kind == "tabulated":
        if ("samples" in doc) == ("samples_file" in doc):
            raise ConfigError("tabulated profile needs exactly one of 'samples' or 'samples_file'")
        if "samples" in doc:
            return Tabulated.from_pairs(doc["samples"])
        path = Path(doc["samples_file"])
        if not path.is_absolute():
            path = base_dir / path
        data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
        return Tabulated.from_pairs(data[:, :2])

    window = _length(doc.get("length", 1000.0), 1.0, "length")
    if not window > 0:
        raise ConfigError("length must be positive")
    if kind == "flat":
        return Flat(window)

    amp = _length(doc.get("amplitude", 0.2 * window), window, "amplitude")
    center = _length(doc.get("center", 0.5 * window), window, "center")
    sigma = _length(doc.get("sigma", window / (4.0 * math.pi)), window, "sigma")
    padding = doc.get("padding", "auto")
    if kind == "single_gaussian":
        dents = [(amp, center, sigma)]
    else:
        if "shift" not in doc:
            raise ConfigError("double_gaussian profile requires 'shift'")
        shift = _length(doc["shift"], window, "shift")
        parity = _typed(doc.get("parity", "even"), str, "parity")
        if parity not in ("even", "odd"):
            raise ConfigError("parity must be 'even' or 'odd'")
        sign = 1.0 if parity == "even" else -1.0
        dents = [(amp, center - shift, sigma), (sign * amp, center + shift, sigma)]
    if padding == "auto":
        padding = required_padding(dents, window, max_stretch=max_stretch, mode=mode)
    else:
        padding = _length(padding, window, "padding")
    if kind == "single_gaussian":
        return SingleGaussian(amp, center, sigma, window, padding)
    return DoubleGaussian(amp, center, sigma, shift, parity, window, padding)


def config_from_dict(doc: dict, base_dir: Path | str = ".", for_hartman: bool = False) -> SweepConfig:
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    for name in ("energy", "lattice", "delay", "refinement", "hartman"):
        if name in doc and not isinstance(doc[name], dict):
            raise ConfigError(f"[{name}] must be a table")

    kwargs = {}
    for section, keys in _SECTIONS.items():
        table = doc.get(section, {})
        stray = set(table) - set(keys)
        if stray:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(stray))}")
        for key, (fld, typ) in keys.items():
            if key in table:
                kwargs[fld] = _typed(table[key], typ, f"{section}.{key}")

    hart = dict(doc.get("hartman", {}))
    stray = set(hart) - {"stretches", "probe_meV", "mode"}
    if stray:
        raise ConfigError(f"unknown key(s) in [hartman]: {', '.join(sorted(stray))}")
    hkw = {}
    if "stretches" in hart:
        if not isinstance(hart["stretches"], list):
            raise ConfigError("hartman.stretches must be a list of numbers")
        hkw["stretches"] = tuple(_typed(v, float, "hartman.stretches") for v in hart["stretches"])
    if "probe_meV" in hart:
        hkw["probe_mev"] = _typed(hart["probe_meV"], float, "hartman.probe_meV")
    if "mode" in hart:
        hkw["mode"] = _typed(hart["mode"], str, "hartman.mode")
    kwargs["hartman"] = HartmanSettings(**hkw)

    if "mass" in doc:
        kwargs["mass"] = _typed(doc["mass"], float, "mass")
    if "threads" in doc:
        kwargs["threads"] = _typed(doc["threads"], int, "threads")

    # automatic padding for a width scan leaves room for the widest profile
    max_stretch = max(max(kwargs["hartman"].stretches), 1.0) if for_hartman else 1.0
    try:
        profile = _build_profile(doc, Path(base_dir), max_stretch, kwargs["hartman"].mode)
    except ProfileError as exc:
        raise ConfigError(f"profile: {exc}") from exc
    return SweepConfig(profile=profile, **kwargs)


def parse_config(path, for_hartman: bool = False) -> SweepConfig:
    """Read and validate a TOML run configuration.

    With ``for_hartman`` an automatic padding is sized for the largest
    stretch factor of the width scan.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(doc, path.parent, for_hartman)


def config_to_dict(config: SweepConfig) -> dict:
    """Fully resolved configuration that parses back to an equal SweepConfig."""
    p = config.profile
    desc = p.describe()
    if isinstance(p, Tabulated):
        doc = {"profile": "tabulated", "samples": [[float(x), float(f)] for x, f in zip(p.xs, p.fs)]}
    elif isinstance(p, Flat):
        doc = {"profile": "flat", "length": p.length}
    else:
        doc = {"profile": desc["kind"], "length": p.window}
        for key in ("amplitude", "center", "sigma", "shift", "parity", "padding"):
            if key in desc:
                doc[key] = desc[key]
    doc["mass"] = config.mass
    doc["threads"] = config.threads
    for section, keys in _SECTIONS.items():
        table = {}
        for key, (fld, _) in keys.items():
            value = getattr(config, fld)
            if value is not None:
                table[key] = value
        doc[section] = table
    h = config.hartman
    doc["hartman"] = {"stretches": list(h.stretches), "probe_meV": h.probe_mev, "mode": h.mode}
    return doc


def dump_config(config: SweepConfig) -> str:
    return tomli_w.dumps(config_to_dict(config))
