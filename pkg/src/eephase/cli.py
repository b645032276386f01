"""Command-line front end.

Exit codes: 0 success, 1 invalid configuration, 2 failed records or
convergence diagnostics, 3 I/O error.

Configuration files are flat ``key = value`` text; ``#`` starts a comment
and list values are comma separated.  Keys: methods, waves, alpha, k_min,
k_max, k_steps, k_spacing, mass, unit, mode_vertex, mode_exchange,
channels, quad_order, term_mask, output, format, figure_report, jobs.
Command-line flags override file values.
"""

import argparse
import logging
import sys
from dataclasses import replace
from itertools import product
from pathlib import Path

from . import report
from .operator_amplitude import AmplitudeMode, Channels, ExchangeTreatment, Vertex
from .sweep import ConfigError, KGrid, SweepConfig, run_sweep, write_output

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL, EXIT_IO = 0, 1, 2, 3

CONFIG_KEYS = {
    "methods", "waves", "alpha", "k_min", "k_max", "k_steps", "k_spacing", "mass", "unit",
    "mode_vertex", "mode_exchange", "channels", "quad_order", "term_mask", "output",
    "format", "figure_report", "jobs",
}


def read_config_file(path):
    values = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}", f"expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(key, f"unknown configuration key (line {n})")
        values[key] = value
    return values


def _split(text):
    return [t.strip() for t in str(text).split(",") if t.strip()]


def _enum_list(text, enum, field):
    try:
        return [enum(v) for v in _split(text)]
    except ValueError:
        choices = ", ".join(e.value for e in enum)
        raise ConfigError(field, f"{text!r} not in {{{choices}}}") from None


def _parse(field, cast, text):
    try:
        return cast(text)
    except (TypeError, ValueError):
        raise ConfigError(field, f"cannot parse {text!r}") from None


def build_config(values):
    """SweepConfig from a dict of raw string values (config-file keys)."""
    base = SweepConfig()
    grid = base.k_grid
    kw = {}
    if "methods" in values:
        kw["methods"] = tuple(m.upper() for m in _split(values["methods"]))
    if "waves" in values:
        kw["waves"] = tuple(w.upper() for w in _split(values["waves"]))
    if "alpha" in values:
        kw["alpha_list"] = tuple(_parse("alpha", float, a) for a in _split(values["alpha"]))
    grid = KGrid(
        min=_parse("k_min", float, values.get("k_min", grid.min)),
        max=_parse("k_max", float, values.get("k_max", grid.max)),
        count=_parse("k_steps", int, values.get("k_steps", grid.count)),
        spacing=values.get("k_spacing", grid.spacing),
    )
    kw["k_grid"] = grid
    if "mass" in values:
        kw["mass"] = _parse("mass", float, values["mass"])
    if "unit" in values:
        kw["unit"] = values["unit"]
    if {"mode_vertex", "mode_exchange", "channels"} & values.keys():
        vertices = _enum_list(values.get("mode_vertex", "FullGammaMu"), Vertex, "mode_vertex")
        exchanges = _enum_list(
            values.get("mode_exchange", "PlainSandwich,ExchangeOperator"),
            ExchangeTreatment, "mode_exchange",
        )
        channels = _enum_list(values.get("channels", "Both"), Channels, "channels")
        kw["modes"] = tuple(AmplitudeMode(v, e, c) for v, e, c in product(vertices, exchanges, channels))
    if "quad_order" in values:
        kw["quad_order"] = _parse("quad_order", int, values["quad_order"])
    if values.get("term_mask") not in (None, "", "none"):
        kw["term_mask"] = _parse("term_mask", lambda t: int(t, 0), values["term_mask"])
    if "output" in values:
        kw["output_path"] = values["output"]
    if "format" in values:
        kw["output_format"] = values["format"]
    if "figure_report" in values:
        kw["figure_report"] = str(values["figure_report"]).lower() in ("1", "true", "yes", "on")
    if "jobs" in values:
        kw["jobs"] = _parse("jobs", int, values["jobs"])
    return replace(base, **kw).validate()


def make_parser():
    p = argparse.ArgumentParser(
        prog="eephase",
        description="Born phase shifts for screened e-e scattering in spin-singlet channels.",
    )
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--method", dest="methods", help="comma list from {A, B}")
    p.add_argument("--waves", help="comma list from {S, P, D, F}")
    p.add_argument("--alpha", help="comma list of screening parameters (> 0)")
    p.add_argument("--k-min", dest="k_min")
    p.add_argument("--k-max", dest="k_max")
    p.add_argument("--k-steps", dest="k_steps")
    p.add_argument("--k-spacing", dest="k_spacing", choices=["log", "linear"])
    p.add_argument("--mass", help="electron mass in the chosen unit (default: physical value)")
    p.add_argument("--unit", choices=["internal", "eV", "MeV"],
                   help="unit of k, alpha and mass; internal means electron-mass units")
    p.add_argument("--mode-vertex", dest="mode_vertex", help="FullGammaMu and/or Gamma0Only")
    p.add_argument("--mode-exchange", dest="mode_exchange",
                   help="PlainSandwich and/or ExchangeOperator")
    p.add_argument("--channels", help="Both or DirectOnly (DirectOnly is for validation)")
    p.add_argument("--quad-order", dest="quad_order")
    p.add_argument("--term-mask", dest="term_mask", help="11-bit mask of Method A operator terms")
    p.add_argument("--output", help="output path stem")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--figure-report", dest="figure_report", action="store_const", const="true",
                   help="also write the sign-pattern report")
    p.add_argument("--jobs", help="worker processes")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log = logging.getLogger("eephase")
    try:
        values = read_config_file(args.config) if args.config else {}
        values.update({k: v for k, v in vars(args).items()
                       if k in CONFIG_KEYS and v is not None})
        config = build_config(values)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_IO

    records = run_sweep(config)
    try:
        written = write_output(records, config.output_format, config.output_path)
        rep = None
        if config.figure_report:
            rep = report.build_report(config)
            stem = Path(config.output_path)
            json_path = stem.with_name(stem.name + "_figure_report.json")
            txt_path = stem.with_name(stem.name + "_figure_report.txt")
            json_path.write_text(report.dumps(rep))
            txt_path.write_text(report.format_report(rep))
            written += [json_path, txt_path]
            sys.stdout.write(report.format_report(rep))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    failed = [r for r in records if not r.ok]
    log.info("wrote %d files, %d records", len(written), len(records))
    if failed or (rep is not None and rep["failed_records"]):
        print(f"{len(failed)} of {len(records)} records failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
