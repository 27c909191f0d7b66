"""
Synthetic TFP panels drawn from the model itself, for exercising the calibration
pipeline without external data.
"""

from collections.abc import Mapping, Sequence

import numpy as np

from tfpdiff.core.model import eval_a_moving, eval_frontier
from tfpdiff.core.types import CatchUpParams, Dataset, FrontierParams, Seed, TfpSeries, TimeOrigin
from tfpdiff.errors import DomainError
from tfpdiff.simulation.abm import derive_seed


def synthesize_dataset(
    frontier: FrontierParams,
    reference: str,
    countries: Mapping[str, CatchUpParams],
    origin: TimeOrigin,
    years: Sequence[int],
    noise: float = 0.0,
    seed: Seed | int = 0,
) -> Dataset:
    """
    The reference country follows the frontier exactly. Each catching-up country
    follows the moving-frontier solution, scaled by exp(noise * z) with z standard
    normal; country i draws from run i of the seed.
    """
    if not 0.0 <= noise < 1.0:
        raise DomainError(f"noise must lie in [0, 1), got {noise}", component="data")
    if reference in countries:
        raise DomainError(f"{reference!r} is both reference and catch-up country", component="data")
    years = sorted(int(y) for y in years)
    if not years or years[0] < origin.t0_year:
        raise DomainError("years must be non-empty and start at or after t0_year", component="data")

    series = {
        reference: TfpSeries(
            country=reference,
            years=tuple(years),
            values=tuple(eval_frontier(frontier, origin.time_of(y)) for y in years),
        )
    }
    for i, (country, c) in enumerate(sorted(countries.items())):
        clean = np.array([eval_a_moving(frontier, c, origin.time_of(y)) for y in years])
        if noise > 0:
            z = np.random.default_rng(derive_seed(seed, i)).standard_normal(len(years))
            clean = clean * np.exp(noise * z)
        series[country] = TfpSeries(country=country, years=tuple(years), values=tuple(clean.tolist()))
    return Dataset(series=series)
