"""
Readers and writers for TFP datasets, fit files, projection tables and curve samples.
"""

import csv
import io
import json
import re
from collections import defaultdict
from collections.abc import Sequence
from typing import Literal

import numpy as np
import pandas as pd

from tfpdiff.calibration.pipeline import CombinedFits
from tfpdiff.core.types import (
    CurveSpec,
    Dataset,
    FitResult,
    ProjectionTable,
    TfpSeries,
    TimeOrigin,
)
from tfpdiff.curves import get_curve
from tfpdiff.errors import DomainError, DuplicateKeyError, ParseError

TFP_HEADER = ["country", "year", "value"]

# Plain decimal numbers with '.' as the only decimal mark.
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_INTEGER = re.compile(r"^[+-]?\d+$")


def _decode(text: bytes | str) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8-sig")
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not valid UTF-8: {e}") from e
    return text.removeprefix("﻿")


def _frame_to_csv(frame: pd.DataFrame, float_format: str | None = None) -> bytes:
    return frame.to_csv(index=False, lineterminator="\n", float_format=float_format).encode("utf-8")


# =============================================================================
# TFP datasets
# =============================================================================


def parse_tfp_csv(text: bytes | str) -> Dataset:
    """
    Parse `country,year,value` rows into a Dataset. Rows may come in any order;
    each series is sorted by year. Blank lines are ignored.
    """
    reader = csv.reader(io.StringIO(_decode(text), newline=""))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != TFP_HEADER:
        raise ParseError(f"expected header {','.join(TFP_HEADER)!r}, got {header!r}", line=1)

    rows: dict[str, dict[int, float]] = defaultdict(dict)
    for fields in reader:
        line = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", line=line)
        country, year_text, value_text = (f.strip() for f in fields)
        if not country:
            raise ParseError("empty country identifier", line=line)
        if not _INTEGER.match(year_text):
            raise ParseError(f"year {year_text!r} is not an integer", line=line)
        if not _DECIMAL.match(value_text):
            raise ParseError(f"value {value_text!r} is not a decimal number", line=line)
        year = int(year_text)
        value = float(value_text)
        if value <= 0:
            raise DomainError(f"line {line}: value must be > 0, got {value}", component="data")
        if year in rows[country]:
            raise DuplicateKeyError(f"duplicate observation for ({country}, {year})", line=line)
        rows[country][year] = value

    series = {}
    for country, observations in rows.items():
        years = sorted(observations)
        series[country] = TfpSeries(
            country=country, years=tuple(years), values=tuple(observations[y] for y in years)
        )
    return Dataset(series=series)


def write_tfp_csv(dataset: Dataset) -> bytes:
    """Long-format CSV with 17 significant digits, so parsing it back is exact."""
    records = [
        (country, year, value)
        for country in dataset
        for year, value in zip(dataset[country].years, dataset[country].values)
    ]
    return _frame_to_csv(pd.DataFrame(records, columns=TFP_HEADER), float_format="%.17g")


# =============================================================================
# Fit files
# =============================================================================


def write_fit_json(fit: FitResult) -> bytes:
    return (json.dumps(fit.to_dict(), indent=2) + "\n").encode("utf-8")


def write_fits_json(fits: CombinedFits) -> bytes:
    return (json.dumps(fits.to_dict(), indent=2) + "\n").encode("utf-8")


def read_fits_json(text: bytes | str) -> CombinedFits:
    """Read a combined fit file, a bare {"countries": [...]} file, or a single fit."""
    try:
        data = json.loads(_decode(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError("fit file must hold a JSON object")
    try:
        if "countries" in data:
            return CombinedFits.from_dict(data)
        fit = FitResult.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DomainError):
            raise
        raise ParseError(f"malformed fit file: {e!r}") from e
    if fit.model == "frontier":
        return CombinedFits(reference=fit, countries=(), t0_year=fit.t0_year)
    return CombinedFits(reference=None, countries=(fit,), t0_year=fit.t0_year)


# =============================================================================
# Projection tables and curve samples
# =============================================================================


def write_projection_table(table: ProjectionTable, format: Literal["csv", "json"] = "csv") -> bytes:
    """Six significant digits; row order is preserved."""
    if format == "csv":
        frame = pd.DataFrame([row.to_dict() for row in table.rows], columns=table.columns)
        return _frame_to_csv(frame, float_format="%.6g")
    if format == "json":
        rows = [
            {k: float(f"{v:.6g}") if isinstance(v, float) else v for k, v in row.to_dict().items()}
            for row in table.rows
        ]
        payload = {"years": list(table.years), "rows": rows}
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    raise DomainError(f"unknown table format {format!r}; use csv or json", component="data")


def emit_curve_samples(
    specs: Sequence[CurveSpec], grid: Sequence[float], origin: TimeOrigin
) -> bytes:
    """Long-format `series,year,value` samples of each curve on the calendar-year grid."""
    records = []
    for spec in specs:
        curve = get_curve(spec)
        for year in grid:
            value = curve.evaluate(origin.time_of(year))
            records.append((spec.name, format(float(year), ".10g"), value))
    return _frame_to_csv(pd.DataFrame(records, columns=["series", "year", "value"]))


def read_curve_specs(text: bytes | str) -> tuple[list[CurveSpec], TimeOrigin]:
    """
    Curve spec file: {"t0_year": 1995, "curves": [{"name", "kind", "params"}, ...]}.
    t0_year defaults to 0, so the grid is model time.
    """
    try:
        data = json.loads(_decode(text))
        specs = [CurveSpec.from_dict(d) for d in data["curves"]]
        origin = TimeOrigin(t0_year=int(data.get("t0_year", 0)))
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed curve spec file: {e!r}") from e
    return specs, origin


def dataset_frame(dataset: Dataset) -> pd.DataFrame:
    """Wide frame (years x countries) for quick inspection."""
    columns = {
        country: pd.Series(np.array(dataset[country].values), index=list(dataset[country].years))
        for country in dataset
    }
    return pd.DataFrame(columns)
