"""Command-line interface: ``curvewire {spectrum,hartman,validate,plot}``."""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from pathlib import Path

from .config import dump_config, parse_config
from .output import build_manifest, emit_plot, read_spectrum_csv, write_manifest, write_spectrum_csv
from .sweep import ConfigError, converge_resolution, hartman_scan, run_spectrum
from .units import au_to_fs

log = logging.getLogger("curvewire")


def _resolve_threads(args, config_threads):
    env = os.environ.get("CURVEWIRE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"CURVEWIRE_THREADS must be an integer, got {env!r}") from None
    if args.threads is not None:
        return args.threads
    return config_threads


def _load(args, for_hartman=False):
    config = parse_config(args.config, for_hartman=for_hartman)
    changes = {"threads": _resolve_threads(args, config.threads)}
    if args.resolution is not None:
        changes["lattice_constant"] = config.profile.length / args.resolution
    return dataclasses.replace(config, **changes)


def cmd_spectrum(args):
    config = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    if config.auto_converge:
        _, spectrum = converge_resolution(config)
    else:
        spectrum = run_spectrum(config)
    wall = time.perf_counter() - start
    csv_path = write_spectrum_csv(spectrum, out / "spectrum.csv")
    manifest = build_manifest(dump_config(config), spectrum, wall, outputs=[csv_path.name])
    if args.emit_svg:
        svg = emit_plot(spectrum, out / "spectrum.svg", title=config.profile.describe()["kind"])
        manifest["outputs"].append(svg.name)
    write_manifest(manifest, out / "spectrum.manifest.json")
    flagged = len(spectrum.flagged)
    print(f"wrote {csv_path} ({len(spectrum)} energies, a = {spectrum.metadata['lattice_constant']:.6g} a0, "
          f"{flagged} flagged, {wall:.2f} s)")
    return 0


def cmd_hartman(args):
    config = _load(args, for_hartman=True)
    h = config.hartman
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    scan = hartman_scan(
        config.profile,
        h.stretches,
        h.probe_mev,
        mode=h.mode,
        lattice_constant=config.lattice_constant,
        mass=config.mass,
        threads=config.threads,
    )
    wall = time.perf_counter() - start
    lines = ["stretch,D_a0,tau_W_fs,tau_C_fs,converged"]
    for r in scan.rows:
        lines.append(
            f"{r.stretch:.12g},{r.arc_length:.12g},{au_to_fs(r.tau_w):.12g},{au_to_fs(r.tau_c):.12g},{int(r.converged)}"
        )
    csv_path = out / "hartman.csv"
    csv_path.write_text("\n".join(lines) + "\n")
    fit = {
        "slope_fs_per_a0": au_to_fs(scan.slope),
        "classical_slope_fs_per_a0": au_to_fs(scan.classical_slope),
        "intercept_fs": au_to_fs(scan.intercept),
        "max_residual_fs": au_to_fs(scan.residual_max),
        "relative_residual": scan.relative_residual,
    }
    manifest = build_manifest(
        dump_config(config), None, wall, fit=fit, skipped=[list(s) for s in scan.skipped], outputs=[csv_path.name]
    )
    write_manifest(manifest, out / "hartman.manifest.json")
    print(f"wrote {csv_path} ({len(scan.rows)} rows, {len(scan.skipped)} skipped)")
    print(f"slope {fit['slope_fs_per_a0']:.6g} fs/a0 vs classical {fit['classical_slope_fs_per_a0']:.6g} fs/a0, "
          f"relative residual {fit['relative_residual']:.3g}")
    return 0


def cmd_validate(args):
    from .validation import run_validation

    threads = _resolve_threads(args, 1)
    checks = run_validation(threads=threads)
    for c in checks:
        print(c.line())
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report = [dataclasses.asdict(c) for c in checks]
        (out / "validate.json").write_text(json.dumps(report, indent=2) + "\n")
    return 0 if all(c.passed for c in checks) else 1


def cmd_plot(args):
    spectrum = read_spectrum_csv(args.csv)
    target = Path(args.output) if args.output else Path(args.csv).with_suffix(".svg")
    emit_plot(spectrum, target)
    print(f"wrote {target}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="curvewire", description="Transport and Wigner delay along curved wires")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out-dir", default="out" if config_required else None)
        p.add_argument("--threads", type=int, default=None, help="worker threads (CURVEWIRE_THREADS overrides)")

    p = sub.add_parser("spectrum", help="energy sweep for one profile")
    common(p)
    p.add_argument("--resolution", type=int, default=None, help="lattice intervals across the domain")
    p.add_argument("--emit-svg", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hartman", help="delay versus arc length for stretched profiles")
    common(p)
    p.add_argument("--resolution", type=int, default=None, help="lattice intervals across the domain")
    p.set_defaults(func=cmd_hartman)

    p = sub.add_parser("validate", help="run the oracle checks")
    common(p, config_required=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plot", help="re-render an SVG from a spectrum CSV")
    p.add_argument("csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
