"""Command-line interface: spectrum scans, feasibility maps, protocol runs, checks.

Exit codes: 0 success, 2 configuration error, 3 physics-validity error
(unstable drift or rotating-wave approximation out of range), 4 internal
check failure (also used for an inconclusive protocol under ``--strict``).
Every run writes a ``manifest.json`` echoing the fully resolved configuration
so that outputs can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, channel, model, oracle, protocols, sweep
from .gaussian import symplectic_form

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_CHECK = 4


class PhysicsError(RuntimeError):
    """Parameter set outside the model's validity range."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: config values, overrides and run options."""

    command: str
    config_path: str
    values: dict
    out_dir: Path
    seed: int
    workers: int
    overrides: dict
    figure: str | None = None
    protocol: str | None = None
    strict: bool = False

    def manifest(self):
        return {
            "command": self.command,
            "config_path": str(self.config_path),
            "values": self.values,
            "overrides": self.overrides,
            "seed": self.seed,
            "workers": self.workers,
            "figure": self.figure,
            "protocol": self.protocol,
            "strict": self.strict,
            "version": __version__,
        }


# Map-grid options live in the same override namespace as physics keys.
_MAP_KEYS = ("omega_B_min", "omega_B_max", "Q_min", "Q_max", "n_omega_B",
             "n_Q", "omega_A", "rho", "n_points")


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise model.ConfigError(f"override must look like key=value: {pair!r}")
        key, _, value = pair.partition("=")
        key = key.strip()
        if key not in model._KNOWN_KEYS and key not in _MAP_KEYS:
            raise model.ConfigError(f"unknown configuration key: {key!r}")
        try:
            overrides[key] = float(value)
        except ValueError as exc:
            raise model.ConfigError(f"invalid number for {key!r}") from exc
    return overrides


def _resolve(args, command):
    values = model.load_config(args.config) if args.config else {}
    overrides = _parse_overrides(args.override or [])
    merged = dict(values)
    merged.update({k: v for k, v in overrides.items() if k in model._KNOWN_KEYS})
    return RunConfig(command=command, config_path=args.config or "",
                     values=merged, out_dir=Path(args.out), seed=args.seed,
                     workers=args.workers, overrides=overrides,
                     figure=getattr(args, "figure", None),
                     protocol=getattr(args, "protocol", None),
                     strict=getattr(args, "strict", False))


def _write_manifest(cfg: RunConfig):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.manifest(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _symmetric_params(cfg: RunConfig):
    params = model.params_from_config(cfg.values)
    if not isinstance(params, model.SymmetricParams):
        raise model.ConfigError(
            "this subcommand requires a symmetric parameter set")
    return params


def _validate_physics(params):
    A, _ = channel.drift_matrix(params)
    eigs = np.linalg.eigvals(A)
    if eigs.real.max() >= 0:
        worst = eigs[np.argmax(eigs.real)]
        raise PhysicsError(f"drift matrix is unstable: eigenvalue {worst}")
    check = model.rwa_valid(params)
    if not check.valid:
        raise PhysicsError(
            "rotating-wave model out of range: thermal margin "
            f"{check.thermal_margin:.3g}, coupling margin "
            f"{check.coupling_margin:.3g} (need > 10)")


def cmd_spectrum(cfg: RunConfig):
    params = _symmetric_params(cfg)
    _validate_physics(params)
    _write_manifest(cfg)
    n_points = int(cfg.overrides.get("n_points", 2001))
    scan = sweep.spectrum_scan(params, n_points=n_points, workers=cfg.workers)
    with open(cfg.out_dir / "spectrum.csv", "w", encoding="utf-8") as fh:
        sweep.write_spectrum_csv(scan, fh)
    peak = max(scan.points, key=lambda p: p.eta)
    peak_ratio = max(p.ratio for p in scan.points)
    print(f"wrote {cfg.out_dir / 'spectrum.csv'} ({len(scan.points)} rows)")
    print(f"peak eta {peak.eta:.6g} at omega {peak.omega:.3g} s^-1")
    print(f"peak ratio {peak_ratio:.6g}")
    print(f"linewidth {scan.gamma_eff:.6g} s^-1")
    return EXIT_OK


def cmd_map(cfg: RunConfig):
    if cfg.figure not in sweep.FIGURE_IDS:
        raise model.ConfigError(f"unknown figure id: {cfg.figure!r}")
    ov = cfg.overrides
    temperature = cfg.values.get("temperature_K", 1e-3)
    rho = ov.get("rho", model.CONSTANTS.rho_Au)
    device = model.DeviceGeometry.from_spheres(radius=0.01, rho=rho,
                                               temperature=temperature)
    _write_manifest(cfg)
    points = sweep.figure_grid(
        cfg.figure, device=device,
        omega_B_range=(ov.get("omega_B_min", 1e-3), ov.get("omega_B_max", 1e9)),
        Q_range=(ov.get("Q_min", 1.0), ov.get("Q_max", 1e16)),
        n_omega_B=int(ov.get("n_omega_B", 200)), n_Q=int(ov.get("n_Q", 200)),
        omega_A=ov.get("omega_A", 1e15), workers=cfg.workers)
    path = cfg.out_dir / f"{cfg.figure}.csv"
    with open(path, "w", encoding="utf-8") as fh:
        sweep.write_figure_csv(points, fh)
    quantum = sum(p.classification == "quantum" for p in points)
    print(f"wrote {path} ({len(points)} rows, {quantum} quantum cells, "
          f"column {sweep.FIGURE_COLUMNS[cfg.figure]})")
    return EXIT_OK


def cmd_protocol(cfg: RunConfig):
    if cfg.protocol not in ("probe", "benchmark", "entanglement"):
        raise model.ConfigError(f"unknown protocol id: {cfg.protocol!r}")
    params = _symmetric_params(cfg)
    _validate_physics(params)
    _write_manifest(cfg)
    report = protocols.end_to_end(params, cfg.protocol, seed=cfg.seed)
    with open(cfg.out_dir / "report.json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    print(f"wrote {cfg.out_dir / 'report.json'}")
    print(f"verdict: {report.verdict}")
    if report.verdict == "inconclusive" and cfg.strict:
        return EXIT_CHECK
    return EXIT_OK


def _physics_rows(params):
    """Validity checks that must pass before any cross-validation runs."""
    A, _ = channel.drift_matrix(params)
    eigs = np.linalg.eigvals(A)
    stable = eigs.real.max() < 0
    yield ("drift stability", stable,
           f"max Re eigenvalue {eigs.real.max():.3e}")
    rwa = model.rwa_valid(params)
    yield ("rwa validity", rwa.valid,
           f"thermal margin {rwa.thermal_margin:.3g}, coupling margin "
           f"{rwa.coupling_margin:.3g}")


def _check_rows(params):
    """Run the oracle cross-validation suite; yields (name, ok, detail)."""
    gamma_eff = channel.transparency_linewidth(params)
    freqs = [0.0, 0.5 * gamma_eff, -gamma_eff, 10.0 * gamma_eff, params.kappa]
    defect = 0.0
    unitarity = 0.0
    for w in freqs:
        a = channel.transfer_coefficients_analytic(params, w)
        n = channel.transfer_coefficients_numeric(params, w)
        defect = max(defect, float(np.abs(a.as_array() - n.as_array()).max()))
        unitarity = max(unitarity, a.unitarity_defect(), n.unitarity_defect())
    yield ("analytic vs numeric coefficients", defect <= 1e-10,
           f"max deviation {defect:.3e} (tol 1e-10)")
    yield ("unitarity", unitarity <= 1e-10,
           f"max defect {unitarity:.3e} (tol 1e-10)")

    worst_mf = 0.0
    for w in (0.0, 0.5 * gamma_eff):
        ch = channel.channel_at(params, w)
        target = math.sqrt(ch.eta) * np.exp(1j * ch.phi)
        mf = oracle.mean_field_transmission(params, w)
        worst_mf = max(worst_mf, abs(mf.ratio - target) / abs(target))
    yield ("mean-field transmission", worst_mf <= 1e-6,
           f"max relative deviation {worst_mf:.3e} (tol 1e-6)")

    sigma = oracle.steady_state_covariance(params)
    nus = np.abs(np.linalg.eigvals(1j * symplectic_form(4) @ sigma))
    nu_min = float(np.sort(nus)[:4].min())
    yield ("stationary-state physicality", nu_min >= 0.5 - 1e-10,
           f"min symplectic eigenvalue {nu_min:.12g}")

    ch0 = channel.channel_at(params, 0.0)
    spec = oracle.output_spectrum(params, 0.0)
    rel = abs(spec - ch0.output_noise) / max(abs(ch0.output_noise), 1e-300)
    yield ("output noise spectrum", rel <= 1e-9,
           f"relative deviation {rel:.3e} (tol 1e-9)")


def cmd_check(cfg: RunConfig):
    params = _symmetric_params(cfg)
    _write_manifest(cfg)
    physics_ok = True
    for name, ok, detail in _physics_rows(params):
        print(f"{'PASS' if ok else 'FAIL'}  {name:<36} {detail}")
        physics_ok = physics_ok and ok
    if not physics_ok:  # cross-validations presuppose a valid model point
        return EXIT_PHYSICS
    status = EXIT_OK
    for name, ok, detail in _check_rows(params):
        print(f"{'PASS' if ok else 'FAIL'}  {name:<36} {detail}")
        if not ok:
            status = EXIT_CHECK
    return status


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="git-channel",
        description="Gravity-induced optical channel: spectra, maps, protocols")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("spectrum", "scan the channel over probe frequency"),
            ("map", "classify the (omega_B, Q) design plane"),
            ("protocol", "simulate a falsification protocol"),
            ("check", "run oracle cross-validations at the configured point")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=name != "map",
                       help="key = value parameter file")
        p.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="override a configuration value")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        if name == "map":
            p.add_argument("--figure", required=True,
                           choices=sorted(sweep.FIGURE_IDS))
        if name == "protocol":
            p.add_argument("--protocol", required=True, dest="protocol",
                           choices=("probe", "benchmark", "entanglement"))
            p.add_argument("--strict", action="store_true",
                           help="exit nonzero on an inconclusive verdict")
    return parser


_COMMANDS = {"spectrum": cmd_spectrum, "map": cmd_map,
             "protocol": cmd_protocol, "check": cmd_check}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args, args.command)
        return _COMMANDS[args.command](cfg)
    except (model.ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
