"""Batch sweeps over (method, mode, wave, alpha, k) and their output files."""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path

import numpy as np

from .kinematics import MEV_PER_ELECTRON_MASS
from .numerics import DEFAULT_QUAD_ORDER
from .operator_amplitude import (
    AmplitudeMode,
    Channels,
    ExchangeTreatment,
    Vertex,
    normalize_mask,
)
from .partial_wave import PhaseShiftRecord, phase_shift, wave_index, wave_label

log = logging.getLogger(__name__)

CSV_FIELDS = ("method", "mode", "wave", "l", "J", "k", "alpha", "delta", "im_residual", "quad_order")
UNIT_MASS = {"internal": 1.0, "MeV": MEV_PER_ELECTRON_MASS, "eV": MEV_PER_ELECTRON_MASS * 1e6}
IM_RESIDUAL_LIMIT = 1e-8


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class KGrid:
    min: float = 1e-3
    max: float = 1.0
    count: int = 20
    spacing: str = "log"

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepConfig:
    methods: tuple = ("A", "B")
    modes: tuple = (
        AmplitudeMode(Vertex.FULL_GAMMA_MU, ExchangeTreatment.PLAIN_SANDWICH),
        AmplitudeMode(Vertex.FULL_GAMMA_MU, ExchangeTreatment.EXCHANGE_OPERATOR),
    )
    waves: tuple = ("S", "P", "D", "F")
    alpha_list: tuple = (0.1, 1.0, 10.0)
    k_grid: KGrid = field(default_factory=KGrid)
    mass: float = None  # None means the unit's electron mass
    unit: str = "internal"
    quad_order: int = DEFAULT_QUAD_ORDER
    output_format: str = "csv"
    output_path: str = "phase_shifts"
    term_mask: int = None
    figure_report: bool = False
    jobs: int = 1

    @property
    def mass_value(self):
        return UNIT_MASS[self.unit] if self.mass is None else self.mass

    def validate(self):
        if not self.methods or any(m not in ("A", "B") for m in self.methods):
            raise ConfigError("methods", f"must be a non-empty subset of {{A, B}}, got {self.methods}")
        if not self.modes:
            raise ConfigError("modes", "at least one amplitude mode is required")
        if not self.waves:
            raise ConfigError("waves", "at least one wave is required")
        for w in self.waves:
            if w not in ("S", "P", "D", "F"):
                raise ConfigError("waves", f"unknown wave {w!r}; use S, P, D, F")
        if not self.alpha_list:
            raise ConfigError("alpha", "at least one screening value is required")
        for a in self.alpha_list:
            if not math.isfinite(a) or a <= 0:
                raise ConfigError(
                    "alpha",
                    f"alpha={a} rejected: alpha must be > 0, the unscreened propagator has a "
                    "forward singularity at cos(theta) = +-1",
                )
        g = self.k_grid
        if not (g.min > 0 and math.isfinite(g.max) and g.max > g.min):
            raise ConfigError("k_grid", f"need 0 < k_min < k_max, got {g.min}, {g.max}")
        if g.count < 2:
            raise ConfigError("k_grid", f"count must be >= 2, got {g.count}")
        if g.spacing not in ("log", "linear"):
            raise ConfigError("k_grid", f"spacing must be log or linear, got {g.spacing!r}")
        if self.unit not in UNIT_MASS:
            raise ConfigError("unit", f"must be one of {sorted(UNIT_MASS)}, got {self.unit!r}")
        if not self.mass_value > 0:
            raise ConfigError("mass", "must be positive")
        if self.quad_order < 1:
            raise ConfigError("quad_order", "must be a positive integer")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("format", f"must be csv or json, got {self.output_format!r}")
        if self.term_mask is not None:
            try:
                normalize_mask(self.term_mask)
            except ValueError as exc:
                raise ConfigError("term_mask", str(exc)) from None
            if "B" in self.methods:
                raise ConfigError("term_mask", "term masks apply to Method A only")
        if self.jobs < 1:
            raise ConfigError("jobs", "must be >= 1")
        for mode in self.modes:
            if mode.channels is Channels.DIRECT_ONLY:
                log.warning("DirectOnly mode requested: validation use only, not a physical amplitude")
        return self


def _point(args):
    method, mode, l, k, alpha, k_scale, quad_order, term_mask = args
    try:
        rec = phase_shift(
            method, mode, l, k / k_scale, alpha / k_scale, m=1.0,
            quad_order=quad_order, term_mask=term_mask,
        )
        rec = replace(rec, k=float(k), alpha=float(alpha))
        if rec.im_residual >= IM_RESIDUAL_LIMIT:
            rec = replace(rec, error=f"imaginary residual {rec.im_residual:.3e}")
        return rec
    except Exception as exc:  # annotated record; the sweep carries on
        return PhaseShiftRecord(
            method, mode.descriptor, l, l, float(k), float(alpha),
            float("nan"), float("nan"), quad_order, error=f"{type(exc).__name__}: {exc}",
        )


def sort_key(rec):
    return (rec.method, rec.mode, rec.l, rec.alpha, rec.k)


def run_sweep(config):
    """Phase shifts for every (method, mode, wave, alpha, k) of ``config``.

    k and alpha are read and reported in the configured unit; internally
    everything is rescaled to electron-mass units.
    """
    config.validate()
    scale = config.mass_value
    ks = config.k_grid.values()
    tasks = [
        (method, mode, wave_index(w), float(k), float(a), scale, config.quad_order, config.term_mask)
        for method, mode, w, a, k in product(
            config.methods, config.modes, config.waves, config.alpha_list, ks
        )
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_point, tasks, chunksize=16))
    else:
        records = [_point(t) for t in tasks]
    return sorted(records, key=sort_key)


def _num(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _row(rec):
    return {
        "method": rec.method, "mode": rec.mode, "wave": rec.wave, "l": rec.l, "J": rec.J,
        "k": rec.k, "alpha": rec.alpha, "delta": rec.delta,
        "im_residual": rec.im_residual, "quad_order": rec.quad_order,
    }


def to_csv(records):
    lines = [",".join(CSV_FIELDS)]
    for rec in records:
        row = _row(rec)
        lines.append(",".join(v if isinstance(v, str) else _num(v) for v in row.values()))
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "null"
    return _num(v)


def to_json(records):
    items = []
    for rec in records:
        body = ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in _row(rec).items())
        items.append("  {" + body + "}")
    return "[\n" + ",\n".join(items) + "\n]\n"


def records_from_json(text):
    out = []
    for d in json.loads(text):
        out.append(PhaseShiftRecord(
            method=d["method"], mode=d["mode"], l=d["l"], J=d["J"], k=d["k"], alpha=d["alpha"],
            delta=float("nan") if d["delta"] is None else d["delta"],
            im_residual=float("nan") if d["im_residual"] is None else d["im_residual"],
            quad_order=d["quad_order"],
        ))
    return out


def curve_files(records):
    """Gnuplot-ready delta(k) tables, one per (method, mode, wave, alpha) curve."""
    curves = {}
    for rec in records:
        curves.setdefault((rec.method, rec.mode, rec.wave, rec.alpha), []).append(rec)
    files = {}
    for (method, mode, wave, alpha), recs in curves.items():
        name = f"{method}_{mode.replace('/', '-')}_{wave}_alpha{_num(alpha)}.dat"
        lines = [f"# method={method} mode={mode} wave={wave} alpha={_num(alpha)}", "# k delta"]
        lines += [f"{_num(r.k)} {_num(r.delta)}" for r in sorted(recs, key=lambda r: r.k)]
        files[name] = "\n".join(lines) + "\n"
    return files


def write_output(records, output_format, path):
    """Write the table plus its curve directory; returns the list of paths written."""
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    main = path.with_suffix("." + output_format) if path.suffix != "." + output_format else path
    main.parent.mkdir(parents=True, exist_ok=True)
    text = to_csv(records) if output_format == "csv" else to_json(records)
    main.write_text(text)
    written = [main]
    curve_dir = main.with_name(main.stem + "_curves")
    curve_dir.mkdir(exist_ok=True)
    for name, body in sorted(curve_files(records).items()):
        (curve_dir / name).write_text(body)
        written.append(curve_dir / name)
    failed = [r for r in records if not r.ok]
    if failed:
        err = main.with_name(main.stem + "_errors.txt")
        err.write_text("".join(
            f"{r.method} {r.mode} {r.wave} k={_num(r.k)} alpha={_num(r.alpha)}: {r.error}\n"
            for r in failed
        ))
        written.append(err)
    return written


__all__ = [
    "CSV_FIELDS", "ConfigError", "KGrid", "SweepConfig", "run_sweep", "write_output",
    "to_csv", "to_json", "records_from_json", "curve_files", "wave_label",
]
