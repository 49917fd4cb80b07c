"""Spectrum CSV files, JSON run manifests and SVG figures."""
from __future__ import annotations

import csv
import io
import json
import platform
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .observables import Spectrum
from .units import UNIT_CONVENTIONS, fs_to_au, mev_to_hartree

CSV_HEADER = ("E_meV", "T", "R", "phase_F_rad", "tau_W_fs", "tau_C_fs", "flag")


def _fmt(v):
    return format(float(v), ".12g")


def spectrum_csv_text(spectrum: Spectrum) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    cols = zip(
        spectrum.energies_mev, spectrum.T, spectrum.R, spectrum.phase_f, spectrum.tau_w_fs, spectrum.tau_c_fs
    )
    for row, flag in zip(cols, spectrum.flags or ["ok"] * len(spectrum)):
        buf.write(",".join(_fmt(v) for v in row) + "," + flag + "\n")
    return buf.getvalue()


def write_spectrum_csv(spectrum: Spectrum, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(spectrum_csv_text(spectrum))
    except OSError as exc:
        raise OSError(f"cannot write spectrum to {path}: {exc.strerror or exc}") from exc
    return path


def read_spectrum_csv(path) -> Spectrum:
    """Load a spectrum written by :func:`write_spectrum_csv` (metadata is not stored)."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {','.join(header)}")
        rows = list(reader)
    data = np.array([[float(v) for v in r[:6]] for r in rows]).reshape(-1, 6)
    flags = tuple(r[6] for r in rows)
    e_mev, t, r, phase, tw, tc = data.T
    return Spectrum(
        energies=mev_to_hartree(e_mev),
        T=t,
        R=r,
        phase_f=phase,
        tau_w=fs_to_au(tw),
        tau_c=fs_to_au(tc),
        flags=flags,
        metadata={"source": str(path)},
    )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def build_manifest(config_toml: str, spectrum: Spectrum | None = None, wall_time: float | None = None, **extra) -> dict:
    manifest = {
        "code_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "python": platform.python_version(),
        "units": UNIT_CONVENTIONS,
        "config_toml": config_toml,
        "wall_time_s": wall_time,
    }
    if spectrum is not None:
        md = spectrum.metadata
        manifest.update(
            lattice_constant=md.get("lattice_constant"),
            n_sites=md.get("n_sites"),
            arc_length=md.get("arc_length"),
            n_energies=len(spectrum),
            convergence={
                "resolution_converged": md.get("resolution_converged"),
                "resolution_history": md.get("resolution_history"),
            },
            diagnostics=[
                {"E_meV": float(e), "flag": f}
                for e, f in zip(spectrum.energies_mev, spectrum.flags)
                if f != "ok"
            ],
        )
    manifest.update(extra)
    return _jsonable(manifest)


def write_manifest(manifest: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def emit_plot(spectrum: Spectrum, path, title: str | None = None) -> Path:
    """Dual-axis SVG: T on the left axis, Wigner and classical delays on the right."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    e = spectrum.energies_mev
    fig, ax_t = plt.subplots(figsize=(7.0, 4.2))
    ax_t.plot(e, spectrum.T, color="tab:blue", lw=1.4, label="T")
    ax_t.set_xlabel("E (meV)")
    ax_t.set_ylabel("transmission T", color="tab:blue")
    ax_t.set_ylim(-0.02, 1.05)
    ax_t.tick_params(axis="y", colors="tab:blue")

    ax_d = ax_t.twinx()
    ax_d.plot(e, spectrum.tau_w_fs, color="tab:red", lw=1.4, label=r"$\tau_W$")
    ax_d.plot(e, spectrum.tau_c_fs, color="tab:orange", lw=1.4, ls="--", label=r"$\tau_c$")
    ax_d.set_ylabel("delay (fs)", color="tab:red")
    ax_d.tick_params(axis="y", colors="tab:red")
    top = np.nanmax(np.concatenate([spectrum.tau_w_fs, spectrum.tau_c_fs]))
    ax_d.set_ylim(0.0, 1.05 * top if np.isfinite(top) and top > 0 else 1.0)

    handles = ax_t.get_legend_handles_labels()[0] + ax_d.get_legend_handles_labels()[0]
    ax_t.legend(handles, [h.get_label() for h in handles], loc="center right", frameon=False)
    if title:
        ax_t.set_title(title)
    fig.tight_layout()
    path = Path(path)
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc.strerror or exc}") from exc
    finally:
        plt.close(fig)
    return path

