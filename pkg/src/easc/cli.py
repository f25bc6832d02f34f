"""Command-line interface: config ingestion, subcommand dispatch, and
CSV/JSON result emission.

Usage: ``easc <subcommand> --config <path> [--set key=value ...] --out <dir>``.
Exit codes: 0 on success, 2 on validation errors, 3 on numerical
failures.  Every run writes a ``manifest.json`` with the fully resolved
configuration; re-running a subcommand from its manifest reproduces the
outputs.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, dynamics, microscopic, regimes, spectral, usc
from .model import (
    DiagonalMode,
    EiMode,
    Flat,
    PowerLaw,
    SystemConfig,
    Tabulated,
    load_tabulated_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

NUMERICAL_ERRORS = (
    regimes.NoInteriorMinimum,
    regimes.NotConverged,
    regimes.Unbounded,
    dynamics.InvariantViolation,
    microscopic.PoorFit,
    microscopic.RecurrenceHorizonExceeded,
)


class ConfigError(ValueError):
    """Malformed or physically invalid run configuration."""


def _fmt(value: float) -> str:
    """Fixed 17-significant-digit float formatting for CSV output."""
    return format(float(value), ".17g")


class OutputWriter:
    """Tracks written artifact files so partial output can be removed."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def csv(self, name: str, header: list[str], rows) -> Path:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(
                    ",".join(
                        _fmt(v) if isinstance(v, (int, float, np.floating)) else str(v)
                        for v in row
                    )
                    + "\n"
                )
        self.written.append(path)
        return path

    def json(self, name: str, payload) -> Path:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.written.append(path)
        return path

    def cleanup(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)


def _check_keys(block: dict, allowed: set[str], where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _build_spectrum(node, omega0: float, base_dir: Path):
    if node is None:
        return Flat()
    if not isinstance(node, dict):
        raise ConfigError("spectrum must be an object")
    _check_keys(node, {"type", "exponent", "path", "omega", "rho"}, "spectrum")
    kind = node.get("type", "flat")
    if kind == "flat":
        return Flat()
    if kind == "power_law":
        if "exponent" not in node:
            raise ConfigError("power_law spectrum requires 'exponent'")
        return PowerLaw(float(node["exponent"]), omega0=omega0)
    if kind == "tabulated":
        if "path" in node:
            return load_tabulated_csv(base_dir / node["path"], omega0=omega0)
        if "omega" in node and "rho" in node:
            return Tabulated(
                tuple(float(v) for v in node["omega"]),
                tuple(float(v) for v in node["rho"]),
                omega0=omega0,
            )
        raise ConfigError("tabulated spectrum requires 'path' or 'omega'+'rho'")
    raise ConfigError(f"unknown spectrum type {kind!r}")


def _spectrum_doc(spectrum) -> dict:
    if isinstance(spectrum, Flat):
        return {"type": "flat"}
    if isinstance(spectrum, PowerLaw):
        return {"type": "power_law", "exponent": spectrum.exponent}
    return {
        "type": "tabulated",
        "omega": list(spectrum.frequencies),
        "rho": list(spectrum.densities),
    }


def _build_system(doc: dict, base_dir: Path) -> SystemConfig:
    block = doc.get("system")
    if not isinstance(block, dict):
        raise ConfigError("config requires a 'system' object")
    _check_keys(
        block,
        {
            "omega0",
            "coupling",
            "gamma1",
            "gamma2",
            "spectrum1",
            "spectrum2",
            "ei_mode",
            "diagonal_mode",
        },
        "system",
    )
    omega0 = float(block.get("omega0", 1.0))
    try:
        return SystemConfig(
            coupling=float(block.get("coupling", 0.0)),
            gamma1=float(block["gamma1"]),
            gamma2=float(block["gamma2"]),
            spectrum1=_build_spectrum(block.get("spectrum1"), omega0, base_dir),
            spectrum2=_build_spectrum(block.get("spectrum2"), omega0, base_dir),
            omega0=omega0,
            ei_mode=EiMode(block.get("ei_mode", "exact_difference")),
            diagonal_mode=DiagonalMode(block.get("diagonal_mode", "averaged_rates")),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid system block: {exc}") from exc


def _resolved_config(doc: dict, config: SystemConfig) -> dict:
    resolved = {k: v for k, v in doc.items() if k != "system"}
    resolved["system"] = {
        "omega0": config.omega0,
        "coupling": config.coupling,
        "gamma1": config.gamma1,
        "gamma2": config.gamma2,
        "spectrum1": _spectrum_doc(config.spectrum1),
        "spectrum2": _spectrum_doc(config.spectrum2),
        "ei_mode": config.ei_mode.value,
        "diagonal_mode": config.diagonal_mode.value,
    }
    return resolved


def _block(doc: dict, name: str, allowed: set[str]) -> dict:
    block = doc.get(name, {})
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' must be an object")
    _check_keys(block, allowed, name)
    return block


def _threads(doc: dict) -> int:
    env = os.environ.get("EASC_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, int(doc.get("threads", os.cpu_count() or 1)))


def _sweep_grid(block: dict, defaults: tuple[float, float, int]) -> np.ndarray:
    lo = float(block.get("omega_min", defaults[0]))
    hi = float(block.get("omega_max", defaults[1]))
    steps = int(block.get("steps", defaults[2]))
    if steps < 2 or not lo < hi:
        raise ConfigError("sweep requires omega_min < omega_max and steps >= 2")
    return np.linspace(lo, hi, steps)


def _run_trajectory(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(doc, "trajectory", {"omega_min", "omega_max", "steps"})
    grid = _sweep_grid(block, (0.0, 0.1 * config.omega0, 201))
    rows = [
        (om, w1.re, w1.im, w2.re, w2.im)
        for om, w1, w2 in spectral.trajectory(
            config, (float(grid[0]), float(grid[-1])), grid.size
        )
    ]
    writer.csv(
        "trajectory.csv",
        ["omega_coupling", "re_w1", "im_w1", "re_w2", "im_w2"],
        rows,
    )


def _run_splitting(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(doc, "splitting", {"omega_min", "omega_max", "steps"})
    grid = _sweep_grid(block, (0.0, 0.1 * config.omega0, 201))
    rows = regimes.real_splitting_curve(
        config, (float(grid[0]), float(grid[-1])), grid.size
    )
    writer.csv("splitting.csv", ["omega_coupling", "re_splitting"], rows)


def _phase_grid(block: dict, config: SystemConfig):
    g_lo = float(block.get("gamma1_min", 1e-3))
    g_hi = float(block.get("gamma1_max", 10.0))
    g_n = int(block.get("gamma1_points", 201))
    o_lo = float(block.get("omega_min", 1e-4))
    o_hi = float(block.get("omega_max", 0.1 * config.omega0))
    o_n = int(block.get("omega_points", 201))
    spacing = block.get("spacing", "geometric")
    if spacing == "geometric":
        g_grid = np.geomspace(g_lo, g_hi, g_n)
    elif spacing == "linear":
        g_grid = np.linspace(g_lo, g_hi, g_n)
    else:
        raise ConfigError("spacing must be 'geometric' or 'linear'")
    return g_grid, np.linspace(o_lo, o_hi, o_n), float(block.get("ratio", 2.0))


_PHASE_KEYS = {
    "gamma1_min",
    "gamma1_max",
    "gamma1_points",
    "omega_min",
    "omega_max",
    "omega_points",
    "ratio",
    "spacing",
}


def _run_phase_diagram(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(doc, "phase_diagram", _PHASE_KEYS)
    g_grid, o_grid, ratio = _phase_grid(block, config)
    diagram = regimes.phase_diagram(
        g_grid,
        ratio,
        o_grid,
        config.spectrum1,
        config.spectrum2,
        omega0=config.omega0,
        ei_mode=config.ei_mode,
    )
    rows = []
    for i, g1 in enumerate(diagram.gamma1_grid):
        for j, om in enumerate(diagram.omega_grid):
            rows.append(
                (
                    g1,
                    om,
                    diagram.regime[i, j],
                    diagram.delta[i, j],
                    diagram.interaction_energy_state1[i, j],
                    diagram.interaction_energy_state2[i, j],
                )
            )
    writer.csv(
        "phase_diagram.csv",
        ["gamma1", "omega", "regime", "delta", "e_int_1", "e_int_2"],
        rows,
    )
    writer.json(
        "phase_diagram_summary.json",
        {
            "boundary": [
                {"gamma1": float(g), "omega_star": None if math.isnan(b) else float(b)}
                for g, b in zip(diagram.gamma1_grid, diagram.boundary)
            ],
            "omega_cp": diagram.omega_cp,
            "converged": diagram.converged,
            "flagged_rows": list(diagram.flagged_rows),
        },
    )


def _run_energy_map(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(doc, "energy_map", _PHASE_KEYS)
    g_grid, o_grid, ratio = _phase_grid(block, config)
    diagram = regimes.phase_diagram(
        g_grid,
        ratio,
        o_grid,
        config.spectrum1,
        config.spectrum2,
        omega0=config.omega0,
        ei_mode=config.ei_mode,
    )
    rows = []
    for i, g1 in enumerate(diagram.gamma1_grid):
        for j, om in enumerate(diagram.omega_grid):
            rows.append(
                (
                    g1,
                    om,
                    diagram.interaction_energy_state1[i, j],
                    diagram.interaction_energy_state2[i, j],
                )
            )
    writer.csv(
        "energy_map.csv", ["gamma1", "omega", "e_int_1", "e_int_2"], rows
    )


def _run_critical_coupling(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(
        doc,
        "critical_coupling",
        {"ratio", "gamma1_min", "gamma1_max", "tolerance", "exponents"},
    )
    ratio = float(block.get("ratio", 2.0))
    kwargs = dict(
        gamma1_max=float(block.get("gamma1_max", 10.0)),
        tol=float(block.get("tolerance", 1e-3)),
        gamma1_min=float(block.get("gamma1_min", 1e-4)),
        omega0=config.omega0,
    )
    results = []
    if "exponents" in block:
        for n in block["exponents"]:
            value, converged = regimes.critical_coupling(
                ratio, PowerLaw(float(n), omega0=config.omega0), **kwargs
            )
            results.append(
                {"exponent": float(n), "omega_cp": value, "converged": converged}
            )
    else:
        value, converged = regimes.critical_coupling(
            ratio, config.spectrum1, **kwargs
        )
        results.append({"exponent": None, "omega_cp": value, "converged": converged})
    writer.json("critical_coupling.json", {"ratio": ratio, "results": results})
    writer.csv(
        "critical_coupling.csv",
        ["exponent", "omega_cp", "converged"],
        [
            (
                "" if r["exponent"] is None else _fmt(r["exponent"]),
                r["omega_cp"],
                str(r["converged"]).lower(),
            )
            for r in results
        ],
    )


def _run_dynamics(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(
        doc, "dynamics", {"t_end", "dt", "store_every", "frame", "compare"}
    )
    t_end = float(block.get("t_end", 100.0))
    dt = float(block.get("dt", 0.01))
    store_every = int(block.get("store_every", 10))
    frame = block.get("frame", "lab")
    amps = dynamics.evolve_amplitudes(
        config,
        dynamics.AmplitudeState(1.0 + 0.0j, 0.0j, 0.0),
        t_end,
        dt,
        store_every=store_every,
        frame=frame,
    )
    writer.csv(
        "amplitudes.csv",
        ["t", "re_a1", "im_a1", "re_a2", "im_a2"],
        [(s.t, s.a1.real, s.a1.imag, s.a2.real, s.a2.imag) for s in amps],
    )
    times, _, obs = dynamics.evolve_density_matrix(
        config, None, t_end, dt, store_every=store_every, frame=frame
    )
    writer.csv(
        "observables.csv",
        ["t", "e1", "e2", "x", "re_rho_1001"],
        zip(times, obs.e1, obs.e2, obs.x, obs.re_rho_1001),
    )
    if block.get("compare", True):
        report = dynamics.compare_amplitude_vs_master(
            config, t_end, dt, store_every=store_every
        )
        writer.json("dynamics_comparison.json", report)


def _run_oracle(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(
        doc,
        "oracle",
        {"mode_count", "band_lo", "band_hi", "t_end", "dt", "record_every"},
    )
    mode_count = int(block.get("mode_count", 2800))
    band = (float(block.get("band_lo", 0.3)), float(block.get("band_hi", 1.7)))
    t_end = float(block.get("t_end", 420.0))
    w_hi = max(band[1], config.omega0)
    dt = float(block.get("dt", min(0.0115, 0.0198 / w_hi)))
    record_every = int(block.get("record_every", 8))
    reservoirs = [
        microscopic.discretize_reservoir(
            spectrum,
            gamma,
            band,
            mode_count,
            omega0=config.omega0,
            coupling_max=config.coupling,
        )
        for gamma, spectrum in zip(config.gammas, config.spectra)
    ]
    series = microscopic.evolve_microscopic(
        config.omega0,
        config.coupling,
        reservoirs[0],
        reservoirs[1],
        (1.0, 0.0, 0.0, 0.0),
        t_end,
        dt,
        record_every=record_every,
    )
    fit = microscopic.extract_effective_generator(series)
    predicted = spectral.build_generator(config).m
    rel = np.abs(fit.matrix - predicted) / np.maximum(np.abs(predicted), 1e-300)
    writer.json(
        "oracle.json",
        {
            "fitted_matrix": _matrix_doc(fit.matrix),
            "predicted_matrix": _matrix_doc(predicted),
            "relative_errors": rel.tolist(),
            "residual": fit.residual,
            "t_rec": min(r.t_rec for r in reservoirs),
            "mode_count": mode_count,
            "kernel": microscopic.KERNEL,
        },
    )


def _matrix_doc(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def _run_usc(doc: dict, config: SystemConfig, writer: OutputWriter) -> None:
    block = _block(doc, "usc", {"omega_min", "omega_max", "steps"})
    grid = _sweep_grid(block, (0.0, 0.3 * config.omega0, 61))
    report = usc.usc_deviation_report(config.omega0, grid)
    writer.csv(
        "usc.csv",
        [
            "omega_coupling",
            "w_rwa_s",
            "w_rwa_a",
            "w_full_s",
            "w_full_a",
            "overlap_s",
            "overlap_a",
        ],
        [
            (
                r["coupling"],
                r["w_rwa_s"],
                r["w_rwa_a"],
                r["w_full_s"],
                r["w_full_a"],
                r["overlap_s"],
                r["overlap_a"],
            )
            for r in report
        ],
    )


SUBCOMMANDS = {
    "trajectory": _run_trajectory,
    "phase-diagram": _run_phase_diagram,
    "critical-coupling": _run_critical_coupling,
    "energy-map": _run_energy_map,
    "splitting": _run_splitting,
    "dynamics": _run_dynamics,
    "oracle": _run_oracle,
    "usc": _run_usc,
}

_TOP_KEYS = {
    "system",
    "threads",
    "seed",
    "trajectory",
    "phase_diagram",
    "critical_coupling",
    "energy_map",
    "splitting",
    "dynamics",
    "oracle",
    "usc",
}


def _apply_override(doc: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} must look like key=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = doc
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot descend into {part!r} in override {key!r}")
    node[parts[-1]] = value


def _load_config(path: Path, overrides: list[str]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if isinstance(doc, dict) and "config" in doc and "subcommand" in doc:
        doc = doc["config"]  # manifest round-trip
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    for assignment in overrides:
        _apply_override(doc, assignment)
    _check_keys(doc, _TOP_KEYS, "config")
    return doc


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="easc",
        description="Coupled lossy oscillators with structured reservoirs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--set", dest="overrides", action="append", default=[])
    args = parser.parse_args(argv)

    writer = None
    try:
        doc = _load_config(args.config, args.overrides)
        config = _build_system(doc, args.config.parent)
        writer = OutputWriter(args.out)
        SUBCOMMANDS[args.subcommand](doc, config, writer)
        writer.json(
            "manifest.json",
            {
                "subcommand": args.subcommand,
                "version": __version__,
                "threads": _threads(doc),
                "config": _resolved_config(doc, config),
            },
        )
        return EXIT_OK
    except (ConfigError, ValueError) as exc:
        if writer is not None:
            writer.cleanup()
        json.dump({"error": "validation", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        if writer is not None:
            writer.cleanup()
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)}, sys.stderr
        )
        sys.stderr.write("\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
