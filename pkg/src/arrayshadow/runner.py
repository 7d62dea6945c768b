"""Scenario ingestion, sweep orchestration and plot-ready exports.

A run is fully determined by one JSON config file. Angles cross the file
and export boundary in degrees and are radians internally; spacings and
quadrature steps may be given in meters or in wavelengths. Exports are
byte-stable: fixed ordering, fixed float formatting, and a header that
carries the config hash and the package version.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .array_model import (
    array_factor,
    planar_steering,
    uniform_weights,
)
from .em_model import (
    converged_field_ratio_vector,
    excess_attenuation_db,
    field_ratio_vector,
)
from .geometry import ArraySpec, Scene, TargetSheet, discretize_sheet
from .sensing import attenuation_spectrum_from_snapshots, boresight_steering

OUTPUT_KINDS = ("per_antenna_attenuation", "mean_attenuation", "doa_spectrum", "array_factor")

_FLOAT_FMT = ".9g"  # significant digits pinned for byte-stable exports


class ScenarioError(Exception):
    """Config file failed to parse or validate; message lists every problem."""


class SimulationError(RuntimeError):
    """A run failed after validation, e.g. a numerical or I/O problem."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved run description, all lengths in meters, angles in rad."""

    carrier_frequency: float
    central_distance: float
    half_count: int
    spacing: float
    link_height: float
    target_half_width: float | None
    target_half_height: float | None
    target_rotation: float
    positions: tuple[tuple[float, float], ...]
    n_fft: int
    quadrature_step: float
    quadrature_rel_tol: float | None
    noise_std: float
    seed: int | None
    outputs: tuple[str, ...]
    array_factor_spacings: tuple[float, ...]
    array_factor_points: int

    def scene(self) -> Scene:
        return Scene(
            carrier_frequency=self.carrier_frequency,
            array=ArraySpec(
                half_count=self.half_count,
                spacing=self.spacing,
                central_distance=self.central_distance,
            ),
            link_height=self.link_height,
        )

    def target_at(self, x: float, y: float) -> TargetSheet:
        return TargetSheet(
            barycenter=(x, y),
            half_width=self.target_half_width,
            half_height=self.target_half_height,
            rotation=self.target_rotation,
        )

    def resolved_dict(self) -> dict:
        return {
            "carrier_frequency": self.carrier_frequency,
            "central_distance": self.central_distance,
            "half_count": self.half_count,
            "spacing": self.spacing,
            "link_height": self.link_height,
            "target_half_width": self.target_half_width,
            "target_half_height": self.target_half_height,
            "target_rotation": self.target_rotation,
            "positions": [list(p) for p in self.positions],
            "n_fft": self.n_fft,
            "quadrature_step": self.quadrature_step,
            "quadrature_rel_tol": self.quadrature_rel_tol,
            "noise_std": self.noise_std,
            "seed": self.seed,
            "outputs": list(self.outputs),
            "array_factor_spacings": list(self.array_factor_spacings),
            "array_factor_points": self.array_factor_points,
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.resolved_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Row:
    """One exported value; ``index`` is an antenna index or a DoA in degrees."""

    x: float | None
    y: float | None
    index: float | int | None
    quantity: str
    value: float
    units: str


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[Row, ...]
    config_hash: str
    version: str


def _length(raw: dict, key: str, wavelength: float, errors: list, context: str) -> float | None:
    """Resolve a '<key>_m' or '<key>_wavelengths' pair to meters."""
    meters = raw.get(f"{key}_m")
    in_lam = raw.get(f"{key}_wavelengths")
    if meters is not None and in_lam is not None:
        errors.append(f"{context}: give {key}_m or {key}_wavelengths, not both")
        return None
    if meters is not None:
        return float(meters)
    if in_lam is not None:
        return float(in_lam) * wavelength
    return None


def parse_scenario(text: str, source: str = "<config>") -> ScenarioConfig:
    """Parse and validate a JSON scenario; collects every validation error."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ScenarioError(f"{source}: top level must be a JSON object")

    errors: list[str] = []

    scene_raw = raw.get("scene")
    if not isinstance(scene_raw, dict):
        raise ScenarioError(f"{source}: missing required 'scene' section")

    fc = float(scene_raw.get("carrier_frequency_hz", 0.0))
    if fc <= 0.0:
        errors.append("scene.carrier_frequency_hz must be positive")
    wavelength = 299_792_458.0 / fc if fc > 0.0 else float("nan")

    d0 = float(scene_raw.get("central_distance_m", 0.0))
    if d0 <= 0.0:
        errors.append("scene.central_distance_m must be positive")

    half_count = scene_raw.get("half_count", -1)
    if not isinstance(half_count, int) or half_count < 0:
        errors.append("scene.half_count must be a non-negative integer")
        half_count = 0

    spacing = _length(scene_raw, "spacing", wavelength, errors, "scene")
    if spacing is None:
        errors.append("scene: spacing_m or spacing_wavelengths is required")
        spacing = float("nan")
    elif spacing <= 0.0:
        errors.append("scene.spacing must be positive")

    link_height = float(scene_raw.get("link_height_m", 0.0))

    target_raw = raw.get("target") or {}
    half_width = target_raw.get("half_width_m")
    half_height = target_raw.get("half_height_m")
    if half_width is not None and float(half_width) <= 0.0:
        errors.append("target.half_width_m must be positive")
    if half_height is not None and float(half_height) <= 0.0:
        errors.append("target.half_height_m must be positive")
    rotation = math.radians(float(target_raw.get("rotation_deg", 0.0)))
    positions_raw = target_raw.get("positions_m", [])
    positions: list[tuple[float, float]] = []
    for i, p in enumerate(positions_raw):
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            errors.append(f"target.positions_m[{i}] must be an [x, y] pair")
        else:
            positions.append((float(p[0]), float(p[1])))

    proc = raw.get("processing") or {}
    n_fft = proc.get("n_fft", 257)
    if not isinstance(n_fft, int) or n_fft < 2 * half_count + 1:
        errors.append("processing.n_fft must be an integer >= the array size")
        n_fft = max(257, 2 * half_count + 1)
    step = _length(proc, "quadrature_step", wavelength, errors, "processing")
    if step is None:
        step = wavelength / 10.0
    elif step <= 0.0:
        errors.append("processing.quadrature_step must be positive")
    rel_tol = proc.get("quadrature_rel_tol")
    if rel_tol is not None:
        rel_tol = float(rel_tol)
        if rel_tol <= 0.0:
            errors.append("processing.quadrature_rel_tol must be positive when given")
    noise_std = float(proc.get("noise_std", 0.0))
    if noise_std < 0.0:
        errors.append("processing.noise_std must be non-negative")
    seed = proc.get("seed")
    if seed is not None and not isinstance(seed, int):
        errors.append("processing.seed must be an integer when given")
        seed = None

    outputs = tuple(raw.get("outputs", ()))
    if not outputs:
        errors.append("outputs: at least one output kind is required")
    for kind in outputs:
        if kind not in OUTPUT_KINDS:
            errors.append(f"outputs: unknown kind '{kind}' (choose from {', '.join(OUTPUT_KINDS)})")

    needs_target = any(k != "array_factor" for k in outputs)
    if needs_target:
        if half_width is None or half_height is None:
            errors.append("target: half_width_m and half_height_m are required for attenuation outputs")
        if not positions:
            errors.append("target.positions_m must be non-empty for attenuation outputs")

    af_raw = raw.get("array_factor") or {}
    af_spacings_lam = af_raw.get("spacings_wavelengths", [0.5])
    af_spacings = tuple(float(s) * wavelength for s in af_spacings_lam)
    if any(s <= 0.0 for s in af_spacings):
        errors.append("array_factor.spacings_wavelengths must be positive")
    af_points = af_raw.get("gamma_points", 721)
    if not isinstance(af_points, int) or af_points < 3:
        errors.append("array_factor.gamma_points must be an integer >= 3")
        af_points = 721

    if errors:
        raise ScenarioError(f"{source}: invalid scenario\n  - " + "\n  - ".join(errors))

    config = ScenarioConfig(
        carrier_frequency=fc,
        central_distance=d0,
        half_count=half_count,
        spacing=spacing,
        link_height=link_height,
        target_half_width=None if half_width is None else float(half_width),
        target_half_height=None if half_height is None else float(half_height),
        target_rotation=rotation,
        positions=tuple(positions),
        n_fft=n_fft,
        quadrature_step=step,
        quadrature_rel_tol=rel_tol,
        noise_std=noise_std,
        seed=seed,
        outputs=outputs,
        array_factor_spacings=af_spacings,
        array_factor_points=af_points,
    )
    config.scene()  # surfaces the spacing <= lambda/4 coupling warning
    return config


def load_scenario(path) -> ScenarioConfig:
    """Load a scenario from a JSON file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ScenarioError(f"{path}: {e.strerror or e}") from e
    return parse_scenario(text, source=str(path))


def with_seed(config: ScenarioConfig, seed: int | None) -> ScenarioConfig:
    return config if seed is None else replace(config, seed=seed)


def _position_rows(config: ScenarioConfig, scene: Scene, xy: tuple[float, float]) -> list[Row]:
    x, y = xy
    try:
        target = config.target_at(x, y)
        if config.quadrature_rel_tol is not None:
            ratios, _ = converged_field_ratio_vector(
                scene, target, rel_tol=config.quadrature_rel_tol,
                initial_step=config.quadrature_step,
            )
        else:
            grid = discretize_sheet(target, scene, config.quadrature_step)
            ratios = field_ratio_vector(scene, target, grid)

        rows: list[Row] = []
        if "per_antenna_attenuation" in config.outputs:
            per_antenna = excess_attenuation_db(ratios)
            for m, value in zip(scene.array.indices, per_antenna):
                rows.append(Row(x, y, int(m), "excess_attenuation_antenna_db", float(value), "dB"))
        if "mean_attenuation" in config.outputs:
            a = boresight_steering(scene)
            w = uniform_weights(scene.array.half_count)
            num = abs(np.vdot(w, a)) ** 2
            den = abs(np.vdot(w, a * ratios)) ** 2
            value = float("inf") if den == 0.0 else float(10.0 * np.log10(num / den))
            rows.append(Row(x, y, None, "mean_excess_attenuation_db", value, "dB"))
        if "doa_spectrum" in config.outputs:
            a = boresight_steering(scene)
            spectrum = attenuation_spectrum_from_snapshots(
                a, a * ratios, scene.array.spacing, scene.wavelength, config.n_fft
            )
            for gamma, value in zip(spectrum.gamma_grid, spectrum.excess_attenuation_db):
                rows.append(Row(
                    x, y, float(np.degrees(gamma)), "doa_excess_attenuation_db", float(value), "dB",
                ))
        return rows
    except ValueError as e:
        raise SimulationError(f"position ({x:g}, {y:g}): {e}") from e


def _array_factor_rows(config: ScenarioConfig, scene: Scene) -> list[Row]:
    rows: list[Row] = []
    w = uniform_weights(config.half_count)
    gammas_deg = np.linspace(0.0, 180.0, config.array_factor_points)[1:-1]
    for spacing in config.array_factor_spacings:
        ratio = spacing / scene.wavelength
        quantity = f"array_factor_db[da={ratio:g}lam]"
        for gamma_deg in gammas_deg:
            a = planar_steering(config.half_count, spacing, scene.wavelength, math.radians(gamma_deg))
            magnitude = abs(array_factor(w, a))
            value = float("-inf") if magnitude == 0.0 else float(20.0 * np.log10(magnitude))
            rows.append(Row(None, None, float(gamma_deg), quantity, value, "dB"))
    return rows


def run(config: ScenarioConfig, jobs: int = 1) -> ResultTable:
    """Evaluate every requested quantity at every position.

    Positions are independent and may run concurrently; row order is
    deterministic regardless of ``jobs``.
    """
    scene = config.scene()
    rows: list[Row] = []
    if "array_factor" in config.outputs:
        rows.extend(_array_factor_rows(config, scene))

    position_outputs = [k for k in config.outputs if k != "array_factor"]
    if position_outputs and config.positions:
        ordered = sorted(config.positions)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                for chunk in pool.map(lambda p: _position_rows(config, scene, p), ordered):
                    rows.extend(chunk)
        else:
            for p in ordered:
                rows.extend(_position_rows(config, scene, p))

    rows.sort(key=lambda r: (
        r.x is not None, r.x or 0.0, r.y or 0.0, r.quantity,
        r.index is not None, r.index or 0,
    ))
    return ResultTable(rows=tuple(rows), config_hash=config.config_hash(), version=__version__)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, _FLOAT_FMT)


def _group_key(row: Row) -> tuple:
    if row.quantity == "doa_excess_attenuation_db":
        return ("doa_spectrum", row.x, row.y)
    if row.quantity == "excess_attenuation_antenna_db":
        return ("per_antenna", row.x, row.y)
    if row.quantity == "mean_excess_attenuation_db":
        return ("mean_attenuation",)
    return ("array_factor", row.quantity)


_GROUP_COLUMNS = {
    "doa_spectrum": ("gamma_deg", "excess_attenuation_db"),
    "per_antenna": ("antenna_index", "excess_attenuation_db"),
    "mean_attenuation": ("x_m", "y_m", "mean_excess_attenuation_db"),
    "array_factor": ("gamma_deg", "array_factor_db"),
}


def _group_filename(key: tuple) -> str:
    kind = key[0]
    if kind in ("doa_spectrum", "per_antenna"):
        return f"{kind}_x{key[1]:.3f}_y{key[2]:.3f}"
    if kind == "mean_attenuation":
        return "mean_attenuation"
    spacing_tag = key[1].split("da=", 1)[1].rstrip("]")
    return f"array_factor_da{spacing_tag}"


def _group_record(kind: str, row: Row) -> tuple:
    if kind == "mean_attenuation":
        return (row.x, row.y, row.value)
    return (row.index, row.value)


def export(table: ResultTable, fmt: str, out_dir) -> list[Path]:
    """Write the table as plot-ready files; returns the written paths.

    ``csv`` and ``gnuplot`` split the table into one two-column (or
    three-column) file per quantity group; ``jsonl`` writes a single
    results.jsonl with one object per row. Output is byte-identical for
    identical tables.
    """
    if fmt not in ("csv", "jsonl", "gnuplot"):
        raise ValueError(f"unknown export format '{fmt}'")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if fmt == "jsonl":
            return [_export_jsonl(table, out_dir)]
        return _export_columns(table, fmt, out_dir)
    except OSError as e:
        raise SimulationError(f"{out_dir}: {e.strerror or e}") from e


def _export_jsonl(table: ResultTable, out_dir: Path) -> Path:
    path = out_dir / "results.jsonl"
    lines = []
    for row in table.rows:
        record = {
            "config_hash": table.config_hash,
            "version": table.version,
            "x_m": None if row.x is None else float(_fmt(row.x)),
            "y_m": None if row.y is None else float(_fmt(row.y)),
            "index": row.index if isinstance(row.index, (int, type(None))) else float(_fmt(row.index)),
            "quantity": row.quantity,
            "value": float(_fmt(row.value)) if math.isfinite(row.value) else row.value,
            "units": row.units,
        }
        lines.append(json.dumps(record, allow_nan=True))
    path.write_text("\n".join(lines) + "\n")
    return path


def _export_columns(table: ResultTable, fmt: str, out_dir: Path) -> list[Path]:
    groups: dict[tuple, list[Row]] = {}
    for row in table.rows:
        groups.setdefault(_group_key(row), []).append(row)

    sep = "," if fmt == "csv" else " "
    suffix = ".csv" if fmt == "csv" else ".dat"
    written = []
    for key in sorted(groups, key=str):
        kind = key[0]
        path = out_dir / (_group_filename(key) + suffix)
        header_meta = f"# config_hash={table.config_hash} version={table.version}"
        columns = sep.join(_GROUP_COLUMNS[kind])
        if fmt == "gnuplot":
            columns = "# " + columns
        body = [
            sep.join(_fmt(v) for v in _group_record(kind, row))
            for row in groups[key]
        ]
        path.write_text("\n".join([header_meta, columns, *body]) + "\n")
        written.append(path)
    return written
