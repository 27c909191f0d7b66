import math
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from tfpdiff.errors import DomainError

CurveKind = Literal["fixed", "moving", "frontier", "adoption", "non_adopters", "kremer"]
FitModel = Literal["frontier", "catchup", "generic"]


def _require(condition: bool, message: str, component: str = "model") -> None:
    if not condition:
        raise DomainError(message, component=component)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def _serialize_value(value: Any) -> Any:
    """Convert a value to a JSON-serializable representation."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_serialize_value(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_serialize_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _serialize_value(v) for k, v in value.items()}
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return repr(value)


########################################################
########    Types for closed-form models        #########
########################################################


@dataclass(frozen=True)
class AdoptionParams:
    """Idiosyncratic rate sigma and herding rate h of one-directional adoption."""

    sigma: float
    h: float

    def __post_init__(self):
        _require(_finite(self.sigma, self.h), "sigma and h must be finite")
        _require(self.sigma >= 0, f"sigma must be >= 0, got {self.sigma}")
        _require(self.h >= 0, f"h must be >= 0, got {self.h}")


@dataclass(frozen=True)
class FixedFrontierParams:
    a0: float
    a_m: float
    h: float

    def __post_init__(self):
        _require(_finite(self.a0, self.a_m, self.h), "parameters must be finite")
        _require(self.a0 > 0, f"a0 must be > 0, got {self.a0}")
        _require(self.a_m > 0, f"a_m must be > 0, got {self.a_m}")
        _require(self.h > 0, f"h must be > 0, got {self.h}")
        _require(self.a0 <= self.a_m, f"a0 ({self.a0}) must not exceed a_m ({self.a_m})")


@dataclass(frozen=True)
class FrontierParams:
    """Exponential frontier a_m0 * exp(gamma_m * t)."""

    a_m0: float
    gamma_m: float

    def __post_init__(self):
        _require(_finite(self.a_m0, self.gamma_m), "frontier parameters must be finite")
        _require(self.a_m0 > 0, f"a_m0 must be > 0, got {self.a_m0}")

    def to_dict(self):
        return {"a_m0": self.a_m0, "gamma_m": self.gamma_m}

    @classmethod
    def from_dict(cls, data: dict) -> "FrontierParams":
        return cls(a_m0=float(data["a_m0"]), gamma_m=float(data["gamma_m"]))


@dataclass(frozen=True)
class CatchUpParams:
    """Initial TFP and diffusion-driven growth rate of a catching-up economy."""

    a0: float
    gamma: float

    def __post_init__(self):
        _require(_finite(self.a0, self.gamma), "catch-up parameters must be finite")
        _require(self.a0 > 0, f"a0 must be > 0, got {self.a0}")
        _require(self.gamma > 0, f"gamma must be > 0, got {self.gamma}")

    def converges_to(self, frontier: FrontierParams) -> bool:
        """True when the relative gap to the frontier closes in the long run."""
        return self.gamma > frontier.gamma_m

    def to_dict(self):
        return {"a0": self.a0, "gamma": self.gamma}

    @classmethod
    def from_dict(cls, data: dict) -> "CatchUpParams":
        return cls(a0=float(data["a0"]), gamma=float(data["gamma"]))


@dataclass(frozen=True)
class KremerParams:
    a0: float
    gamma: float
    n: float

    def __post_init__(self):
        _require(_finite(self.a0, self.gamma, self.n), "parameters must be finite")
        _require(
            self.a0 > 0 and self.gamma > 0 and self.n > 0,
            "a0, gamma and n must all be strictly positive",
        )


########################################################
########    Types for the ODE oracle            #########
########################################################


@dataclass(frozen=True)
class OdeProblem:
    """Scalar initial value problem dy/dt = rhs(t, y), y(t_start) = y0."""

    rhs: Callable[[float, float], float]
    y0: float
    t_span: tuple[float, float]

    def __post_init__(self):
        t_start, t_end = self.t_span
        _require(_finite(t_start, t_end, self.y0), "t_span and y0 must be finite", "ode")
        _require(t_start <= t_end, f"t_span must be ordered, got {self.t_span}", "ode")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        _require(times.ndim == 1 and times.shape == values.shape, "times/values shape mismatch", "ode")
        _require(len(times) >= 1, "a trajectory needs at least one point", "ode")
        _require(bool(np.all(np.diff(times) > 0)), "times must be strictly increasing", "ode")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> float:
        return float(self.values[-1])

    def value_at(self, t: float | np.ndarray) -> float | np.ndarray:
        """Linear interpolation between stored points."""
        return np.interp(t, self.times, self.values)


########################################################
########    Types for agent-based simulation    #########
########################################################


@dataclass(frozen=True)
class DiffusionParams:
    """One-directional adoption with herding rate scaled by 1/n (local interaction)."""

    sigma: float
    h: float
    n: int

    def __post_init__(self):
        _require(_finite(self.sigma, self.h), "sigma and h must be finite", "abm")
        _require(int(self.n) == self.n and self.n >= 1, f"n must be an integer >= 1, got {self.n}", "abm")
        _require(self.sigma >= 0 and self.h >= 0, "sigma and h must be >= 0", "abm")
        _require(self.sigma + self.h > 0, "sigma + h must be > 0", "abm")
        object.__setattr__(self, "n", int(self.n))

    def birth_rate(self, x: int) -> float:
        """Adoption rate (N - X)(sigma + h X / N)."""
        return (self.n - x) * (self.sigma + self.h * x / self.n)

    def death_rate(self, x: int) -> float:
        return 0.0

    @property
    def adoption(self) -> AdoptionParams:
        return AdoptionParams(sigma=self.sigma, h=self.h)


@dataclass(frozen=True)
class KirmanParams:
    """
    Bidirectional herding chain with birth rate (N - X)(sigma1 + h X) and
    death rate X (sigma2 + h (N - X)).
    """

    sigma1: float
    sigma2: float
    h: float
    n: int

    def __post_init__(self):
        _require(_finite(self.sigma1, self.sigma2, self.h), "rates must be finite", "abm")
        _require(int(self.n) == self.n and self.n >= 1, f"n must be an integer >= 1, got {self.n}", "abm")
        _require(
            self.sigma1 >= 0 and self.sigma2 >= 0 and self.h >= 0, "rates must be >= 0", "abm"
        )
        _require(
            self.sigma1 > 0 or self.sigma2 > 0 or self.h > 0,
            "at least one of sigma1, sigma2, h must be > 0",
            "abm",
        )
        object.__setattr__(self, "n", int(self.n))

    def birth_rate(self, x: int) -> float:
        return (self.n - x) * (self.sigma1 + self.h * x)

    def death_rate(self, x: int) -> float:
        return x * (self.sigma2 + self.h * (self.n - x))

    @classmethod
    def from_non_extensive(cls, sigma1: float, sigma2: float, h: float, n: int) -> "KirmanParams":
        """
        Rates given as per-unit-time transition rates pi(x) with sigma/N idiosyncratic
        terms. Multiplying by N^2 recovers the one-step form with the same sigma and h.
        """
        return cls(sigma1=sigma1, sigma2=sigma2, h=h, n=n)

    @classmethod
    def from_local_herding(cls, sigma1: float, sigma2: float, h: float, n: int) -> "KirmanParams":
        """Herding rate h/N per pair, the scaling used by DiffusionParams."""
        return cls(sigma1=sigma1, sigma2=sigma2, h=h / n, n=n)


@dataclass(frozen=True)
class Seed:
    master: int

    def __post_init__(self):
        _require(
            isinstance(self.master, (int, np.integer)) and 0 <= self.master < 2**64,
            f"seed must be an unsigned 64-bit integer, got {self.master!r}",
            "abm",
        )


@dataclass(frozen=True, eq=False)
class JumpPath:
    """Event times and adopter counts after each event; entry 0 is the initial state."""

    times: np.ndarray
    states: np.ndarray
    n: int
    t_max: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=np.int64)
        _require(times.ndim == 1 and times.shape == states.shape, "times/states shape mismatch", "abm")
        _require(len(times) >= 1 and times[0] == 0.0, "a path starts at time 0", "abm")
        _require(bool(np.all(np.diff(times) > 0)), "event times must be strictly increasing", "abm")
        _require(bool(np.all((states >= 0) & (states <= self.n))), "states must lie in [0, n]", "abm")
        _require(times[-1] <= self.t_max, "events must not exceed t_max", "abm")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def event_count(self) -> int:
        return len(self.times) - 1

    def state_at(self, t: float | np.ndarray) -> np.ndarray:
        """Right-continuous step interpolation X(t)."""
        idx = np.searchsorted(self.times, t, side="right") - 1
        return self.states[np.clip(idx, 0, None)]


########################################################
########    Types for calibration               #########
########################################################


@dataclass(frozen=True)
class TfpSeries:
    """Annual TFP levels (USD per hour worked, PPP) for one country."""

    country: str
    years: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        values = tuple(float(v) for v in self.values)
        _require(bool(self.country), "country identifier must be non-empty", "data")
        _require(len(years) == len(values), "years and values must have the same length", "data")
        _require(
            all(b > a for a, b in zip(years, years[1:])),
            f"{self.country}: years must be strictly increasing",
            "data",
        )
        _require(
            all(math.isfinite(v) and v > 0 for v in values),
            f"{self.country}: TFP values must be finite and > 0",
            "data",
        )
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.years)

    def times(self, origin: "TimeOrigin") -> np.ndarray:
        return np.array([origin.time_of(y) for y in self.years], dtype=float)

    def to_dict(self):
        return {"country": self.country, "years": list(self.years), "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: dict) -> "TfpSeries":
        return cls(country=data["country"], years=data["years"], values=data["values"])


@dataclass(frozen=True)
class TimeOrigin:
    """Calendar year mapped to model time t = 0."""

    t0_year: int

    def time_of(self, year: float) -> float:
        return float(year - self.t0_year)

    def check_series(self, series: TfpSeries) -> None:
        _require(
            len(series) > 0 and self.t0_year <= series.years[0],
            f"t0_year {self.t0_year} is after the first year of {series.country}",
            "calibration",
        )

    @classmethod
    def from_series(cls, series: TfpSeries) -> "TimeOrigin":
        _require(len(series) > 0, f"{series.country}: empty series", "calibration")
        return cls(t0_year=series.years[0])


@dataclass(frozen=True)
class LmOptions:
    initial_damping: float = 1e-3
    damping_factor: float = 10.0
    max_iterations: int = 200
    ftol: float = 1e-10
    gtol: float = 1e-10
    jac_step: float = 1e-6

    def __post_init__(self):
        _require(
            self.initial_damping > 0
            and self.max_iterations > 0
            and self.ftol > 0
            and self.gtol > 0
            and self.jac_step > 0,
            "LM options must all be positive",
            "calibration",
        )
        _require(self.damping_factor > 1, "damping factor must exceed 1", "calibration")


@dataclass(frozen=True, eq=False)
class FitResult:
    params: dict[str, float]
    stderr: dict[str, float]
    covariance: np.ndarray
    ssr: float
    n_obs: int
    iterations: int
    converged: bool
    model: FitModel = "generic"
    country: str | None = None
    t0_year: int | None = None
    frontier: FrontierParams | None = None
    flags: tuple[str, ...] = ()
    ssr_history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        k = len(self.params)
        _require(cov.shape == (k, k), f"covariance must be {k}x{k}", "calibration")
        _require(bool(np.allclose(cov, cov.T, rtol=1e-10, atol=0.0)), "covariance must be symmetric", "calibration")
        _require(self.n_obs > k, "n_obs must exceed the number of parameters", "calibration")
        _require(set(self.stderr) == set(self.params), "stderr names must match params", "calibration")
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "flags", tuple(self.flags))
        object.__setattr__(self, "ssr_history", tuple(self.ssr_history))

    @property
    def param_names(self) -> list[str]:
        return list(self.params)

    def frontier_params(self) -> FrontierParams:
        return FrontierParams(a_m0=self.params["a_m0"], gamma_m=self.params["gamma_m"])

    def catchup_params(self) -> CatchUpParams:
        return CatchUpParams(a0=self.params["a0"], gamma=self.params["gamma"])

    def to_dict(self):
        return {
            "country": self.country,
            "model": self.model,
            "params": dict(self.params),
            "stderr": dict(self.stderr),
            "covariance": {
                "dim": len(self.params),
                "values": _serialize_value(self.covariance.ravel()),
            },
            "ssr": self.ssr,
            "n_obs": self.n_obs,
            "iterations": self.iterations,
            "converged": self.converged,
            "t0_year": self.t0_year,
            "frontier": self.frontier.to_dict() if self.frontier else None,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FitResult":
        cov = data.get("covariance") or {}
        dim = int(cov.get("dim", len(data["params"])))
        values = cov.get("values")
        if values is None:
            # Only standard errors are known: diagonal covariance.
            matrix = np.diag([float(data["stderr"][k]) ** 2 for k in data["params"]])
        else:
            matrix = np.asarray(values, dtype=float).reshape(dim, dim)
        frontier = data.get("frontier")
        return cls(
            params={k: float(v) for k, v in data["params"].items()},
            stderr={k: float(v) for k, v in data["stderr"].items()},
            covariance=matrix,
            ssr=float(data.get("ssr", 0.0)),
            n_obs=int(data.get("n_obs", len(data["params"]) + 1)),
            iterations=int(data.get("iterations", 0)),
            converged=bool(data.get("converged", True)),
            model=data.get("model", "generic"),
            country=data.get("country"),
            t0_year=data.get("t0_year"),
            frontier=FrontierParams.from_dict(frontier) if frontier else None,
            flags=tuple(data.get("flags", ())),
        )


########################################################
########    Types for data input and output     #########
########################################################


@dataclass(frozen=True)
class Dataset:
    """Country identifier -> TfpSeries. Immutable after construction."""

    series: Mapping[str, TfpSeries]

    def __post_init__(self):
        for key, s in self.series.items():
            _require(key == s.country, f"key {key!r} does not match series {s.country!r}", "data")
        object.__setattr__(self, "series", dict(sorted(self.series.items())))

    def __getitem__(self, country: str) -> TfpSeries:
        try:
            return self.series[country]
        except KeyError:
            raise DomainError(f"unknown country {country!r}", component="data") from None

    def __contains__(self, country: object) -> bool:
        return country in self.series

    def __iter__(self) -> Iterator[str]:
        return iter(self.series)

    def __len__(self) -> int:
        return len(self.series)

    @property
    def countries(self) -> list[str]:
        return list(self.series)


@dataclass(frozen=True)
class ProjectionRow:
    country: str
    a0: float
    stderr_a0: float
    gamma: float
    stderr_gamma: float
    projections: dict[int, float]

    def to_dict(self):
        return {
            "country": self.country,
            "a0": self.a0,
            "stderr_a0": self.stderr_a0,
            "gamma": self.gamma,
            "stderr_gamma": self.stderr_gamma,
            **{f"a{year}": value for year, value in self.projections.items()},
        }


@dataclass(frozen=True)
class ProjectionTable:
    """Rows ordered by descending gamma, one per country."""

    rows: tuple[ProjectionRow, ...]
    years: tuple[int, ...] = (2030, 2050)

    def __post_init__(self):
        rows = tuple(self.rows)
        countries = [r.country for r in rows]
        _require(len(set(countries)) == len(countries), "one row per country", "data")
        _require(
            all(a.gamma >= b.gamma for a, b in zip(rows, rows[1:])),
            "rows must be ordered by descending gamma",
            "data",
        )
        _require(
            all(set(r.projections) == set(self.years) for r in rows),
            "every row must carry a projection for each year",
            "data",
        )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "years", tuple(int(y) for y in self.years))

    @property
    def columns(self) -> list[str]:
        return ["country", "a0", "stderr_a0", "gamma", "stderr_gamma"] + [
            f"a{year}" for year in self.years
        ]


@dataclass
class RunMetadata:
    """First record of a fit log: which command ran and with what settings."""

    command: str
    options: LmOptions
    t0_year: int | None = None
    reference: str | None = None
    countries: list[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "command": self.command,
            "options": {k: _serialize_value(v) for k, v in self.options.__dict__.items()},
            "t0_year": self.t0_year,
            "reference": self.reference,
            "countries": list(self.countries),
        }


@dataclass(frozen=True)
class CurveSpec:
    """A named closed-form curve to sample, e.g. kind='moving' with frontier and catch-up params."""

    name: str
    kind: CurveKind
    params: dict[str, float]

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "CurveSpec":
        return cls(
            name=str(data["name"]),
            kind=data["kind"],
            params={k: float(v) for k, v in data.get("params", {}).items()},
        )
