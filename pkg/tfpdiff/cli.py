"""
Command-line entry point: `tfpdiff <subcommand> ...`.

Every subcommand computes all of its outputs in memory first and only then writes
them, each through a temporary file and a rename, so a failed run leaves no
partial files behind.
"""

import argparse
import os
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd
from dotenv import load_dotenv

from tfpdiff.calibration.pipeline import (
    CombinedFits,
    fit_all,
    fit_frontier,
    project,
    projection_table,
)
from tfpdiff.core.types import (
    CatchUpParams,
    DiffusionParams,
    FrontierParams,
    LmOptions,
    RunMetadata,
    Seed,
    TimeOrigin,
)
from tfpdiff.errors import DomainError, TfpDiffusionError
from tfpdiff.logger import FitLogger, VerbosePrinter
from tfpdiff.simulation.abm import coupled_tfp_path, simulate_adoption_ensemble
from tfpdiff.utils.parsing import (
    emit_curve_samples,
    parse_tfp_csv,
    read_curve_specs,
    read_fits_json,
    write_fit_json,
    write_fits_json,
    write_projection_table,
    write_tfp_csv,
)
from tfpdiff.utils.synthetic import synthesize_dataset
from tfpdiff.utils.tfp_utils import atomic_write_all, parse_countries, parse_grid, parse_years

load_dotenv()

DEFAULT_LOG_DIR = os.getenv("TFPDIFF_LOG_DIR")

# Reference frontier and catch-up country written by `synth`.
SYNTH_REFERENCE = "DEU"
SYNTH_A_M0 = 28.7205
SYNTH_GAMMA_M = 0.0381261
SYNTH_COUNTRY = "SYN"
SYNTH_A0 = 5.0
SYNTH_GAMMA = 0.12

Outputs = dict[str, bytes]


class _Parser(argparse.ArgumentParser):
    """Reports usage errors on one line, in the same format as module errors."""

    def error(self, message: str):
        self.exit(2, f"error[cli]: {message}\n")


@dataclass
class CommandConfig:
    command: str
    out: str
    input: str | None = None
    fits: str | None = None
    spec: str | None = None
    country: str | None = None
    reference: str | None = None
    countries: list[str] = field(default_factory=list)
    t0_year: int | None = None
    years: list[int] = field(default_factory=lambda: [2030, 2050])
    format: str = "csv"
    grid: str | None = None
    n: int | None = None
    sigma: float | None = None
    h: float | None = None
    gamma: float | None = None
    a0: float | None = None
    t_max: float | None = None
    runs: int = 1
    seed: int = 0
    x0: int = 0
    noise: float = 0.0
    lm: LmOptions = field(default_factory=LmOptions)
    verbose: bool = False
    log_dir: str | None = None

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "CommandConfig":
        values = vars(ns).copy()
        lm_overrides = {}
        for key in [k for k in values if k.startswith("lm_")]:
            value = values.pop(key)
            if value is not None:
                lm_overrides[key.removeprefix("lm_")] = value
        if isinstance(values.get("countries"), str):
            values["countries"] = parse_countries(values["countries"])
        if isinstance(values.get("years"), str):
            values["years"] = parse_years(values["years"])
        return cls(lm=LmOptions(**lm_overrides), **values)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise DomainError(f"cannot read {path}: {e.strerror}", component="cli") from e


def _require(config: CommandConfig, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(config, n) in (None, [])]
    if missing:
        raise DomainError(f"{config.command} needs {', '.join(missing)}", component="cli")


def _logger(config: CommandConfig, metadata: RunMetadata) -> FitLogger | None:
    if not config.log_dir:
        return None
    logger = FitLogger(config.log_dir)
    logger.log_metadata(metadata)
    return logger


# =============================================================================
# Subcommands
# =============================================================================


def _fit_frontier(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "input", "country")
    series = parse_tfp_csv(_read(config.input))[config.country]
    origin = TimeOrigin(config.t0_year) if config.t0_year is not None else TimeOrigin.from_series(series)
    metadata = RunMetadata(
        command=config.command, options=config.lm, t0_year=origin.t0_year, reference=config.country
    )
    printer.print_header(metadata)
    fit = fit_frontier(series, origin, config.lm, _logger(config, metadata))
    printer.print_fit(fit)
    return {config.out: write_fit_json(fit)}


def _fit_all(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "input", "reference", "countries")
    dataset = parse_tfp_csv(_read(config.input))
    origin = (
        TimeOrigin(config.t0_year)
        if config.t0_year is not None
        else TimeOrigin.from_series(dataset[config.reference])
    )
    metadata = RunMetadata(
        command=config.command,
        options=config.lm,
        t0_year=origin.t0_year,
        reference=config.reference,
        countries=config.countries,
    )
    printer.print_header(metadata)
    fits = fit_all(
        dataset, config.reference, config.countries, origin, config.lm, _logger(config, metadata)
    )
    for fit in (fits.reference, *fits.countries):
        printer.print_fit(fit)
    return {config.out: write_fits_json(fits)}


def _table(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "fits")
    if config.format not in ("csv", "json"):
        raise DomainError(f"--format must be csv or json, got {config.format!r}", component="cli")
    table = projection_table(read_fits_json(_read(config.fits)), config.years)
    printer.print_table(table)
    return {config.out: write_projection_table(table, config.format)}


def _find_country(fits: CombinedFits, country: str):
    for fit in fits.countries:
        if fit.country == country:
            return fit
    raise DomainError(f"no catch-up fit for {country!r} in the fit file", component="cli")


def _project(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "fits", "country")
    fits = read_fits_json(_read(config.fits))
    fit = _find_country(fits, config.country)
    t0_year = fit.t0_year if fit.t0_year is not None else fits.t0_year
    if t0_year is None:
        raise DomainError(f"{config.country}: fit carries no t0_year", component="cli")
    rows = project(
        fit.frontier or fits.frontier, fit.catchup_params(), TimeOrigin(t0_year), config.years
    )
    printer.print_fit(fit)
    frame = pd.DataFrame(
        [(config.country, year, value) for year, value in rows], columns=["country", "year", "tfp"]
    )
    return {config.out: frame.to_csv(index=False, lineterminator="\n").encode("utf-8")}


def _simulate(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "n", "sigma", "h", "gamma", "a0", "t_max")
    params = DiffusionParams(sigma=config.sigma, h=config.h, n=config.n)
    paths = simulate_adoption_ensemble(params, config.x0, config.t_max, config.runs, Seed(config.seed))
    events = [
        (run, t, x)
        for run, path in enumerate(paths)
        for t, x in zip(path.times[1:].tolist(), path.states[1:].tolist())
    ]
    tfp = []
    for run, path in enumerate(paths):
        trajectory = coupled_tfp_path(path, config.gamma, config.a0)
        tfp.extend((run, t, a) for t, a in zip(trajectory.times.tolist(), trajectory.values.tolist()))
    printer.print_simulation_summary(paths, config.seed)

    out = Path(config.out)
    tfp_out = out.with_name(f"{out.stem}.tfp.csv")
    return {
        config.out: pd.DataFrame(events, columns=["run", "time", "x_count"])
        .to_csv(index=False, lineterminator="\n")
        .encode("utf-8"),
        str(tfp_out): pd.DataFrame(tfp, columns=["run", "time", "tfp"])
        .to_csv(index=False, lineterminator="\n")
        .encode("utf-8"),
    }


def _curves(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    _require(config, "spec", "grid")
    specs, origin = read_curve_specs(_read(config.spec))
    return {config.out: emit_curve_samples(specs, parse_grid(config.grid).tolist(), origin)}


def _synth(config: CommandConfig, printer: VerbosePrinter) -> Outputs:
    frontier = FrontierParams(a_m0=SYNTH_A_M0, gamma_m=SYNTH_GAMMA_M)
    catchup = CatchUpParams(
        a0=SYNTH_A0 if config.a0 is None else config.a0,
        gamma=SYNTH_GAMMA if config.gamma is None else config.gamma,
    )
    t0_year = min(config.years) if config.t0_year is None else config.t0_year
    dataset = synthesize_dataset(
        frontier,
        SYNTH_REFERENCE,
        {config.country or SYNTH_COUNTRY: catchup},
        TimeOrigin(t0_year),
        config.years,
        noise=config.noise,
        seed=Seed(config.seed),
    )
    return {config.out: write_tfp_csv(dataset)}


COMMANDS: dict[str, Callable[[CommandConfig, VerbosePrinter], Outputs]] = {
    "fit-frontier": _fit_frontier,
    "fit-all": _fit_all,
    "table": _table,
    "project": _project,
    "simulate": _simulate,
    "curves": _curves,
    "synth": _synth,
}


# =============================================================================
# Argument parsing
# =============================================================================


def _add_lm_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Levenberg-Marquardt options")
    group.add_argument("--max-iter", dest="lm_max_iterations", type=int, default=None)
    group.add_argument("--initial-damping", dest="lm_initial_damping", type=float, default=None)
    group.add_argument("--damping-factor", dest="lm_damping_factor", type=float, default=None)
    group.add_argument("--ftol", dest="lm_ftol", type=float, default=None)
    group.add_argument("--gtol", dest="lm_gtol", type=float, default=None)
    group.add_argument("--jac-step", dest="lm_jac_step", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tfpdiff", description="Herding-based technology diffusion and TFP convergence")
    parser.add_argument("--verbose", action="store_true", help="Print progress to stderr")
    parser.add_argument(
        "--log-dir", default=DEFAULT_LOG_DIR, help="Directory for JSON-lines fit logs (env TFPDIFF_LOG_DIR)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-frontier", help="Fit the exponential frontier of one country")
    p.add_argument("--input", required=True, help="TFP CSV (country,year,value)")
    p.add_argument("--country", required=True)
    p.add_argument("--t0", dest="t0_year", type=int, default=None, help="Calendar year of t = 0")
    p.add_argument("--out", required=True)
    _add_lm_flags(p)

    p = sub.add_parser("fit-all", help="Fit the frontier, then every catch-up country")
    p.add_argument("--input", required=True, help="TFP CSV (country,year,value)")
    p.add_argument("--reference", required=True, help="Frontier country")
    p.add_argument("--countries", required=True, help="Comma-separated catch-up countries")
    p.add_argument("--t0", dest="t0_year", type=int, default=None, help="Defaults to the reference's first year")
    p.add_argument("--out", required=True)
    _add_lm_flags(p)

    p = sub.add_parser("table", help="Projection table ranked by gamma")
    p.add_argument("--fits", required=True)
    p.add_argument("--years", default="2030,2050")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("project", help="Project one country's TFP to the given years")
    p.add_argument("--fits", required=True)
    p.add_argument("--country", required=True)
    p.add_argument("--years", default="2030,2050")
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="Adoption ensemble with coupled TFP paths")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a0", type=float, required=True)
    p.add_argument("--t-max", dest="t_max", type=float, required=True)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x0", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("curves", help="Sample closed-form curves on a year grid")
    p.add_argument("--spec", required=True, help="JSON curve spec file")
    p.add_argument("--grid", required=True, help="start:end:step")
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="Write a synthetic TFP dataset drawn from the model")
    p.add_argument("--out", required=True)
    p.add_argument("--noise", type=float, default=0.0, help="Relative noise level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--a0", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--country", default=None, help="Name of the synthetic country")
    p.add_argument("--years", default="1995:2024")
    p.add_argument("--t0", dest="t0_year", type=int, default=None)
    return parser


def run(config: CommandConfig) -> int:
    printer = VerbosePrinter(enabled=config.verbose)
    atomic_write_all(COMMANDS[config.command](config, printer))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(CommandConfig.from_namespace(args))
    except TfpDiffusionError as e:
        print(f"error[{e.component}]: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error[io]: {e}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
