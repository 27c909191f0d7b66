"""
Exact event-driven simulation of the herding adoption chains.

Waiting times are drawn by inverse CDF, -log(u) / rate, from uniforms u in (0, 1)
produced by numpy's PCG64 generator. Run i of an ensemble seeded with master seed m
uses SeedSequence(entropy=m, spawn_key=(i,)), so ensembles reproduce regardless of
how runs are scheduled.
"""

import math
from collections.abc import Iterator, Sequence

import numpy as np

from tfpdiff.core.types import DiffusionParams, JumpPath, KirmanParams, Seed, Trajectory
from tfpdiff.errors import DomainError

SeedLike = Seed | int | np.random.SeedSequence
ChainParams = DiffusionParams | KirmanParams

_BLOCK = 4096


# =============================================================================
# Seeding
# =============================================================================


def _master(seed: Seed | int) -> int:
    return (seed if isinstance(seed, Seed) else Seed(int(seed))).master


def derive_seed(seed: Seed | int, run: int) -> np.random.SeedSequence:
    """Per-run seed: a deterministic mix of the master seed and the run index."""
    return np.random.SeedSequence(entropy=_master(seed), spawn_key=(int(run),))


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(entropy=_master(seed)))


def _open_uniforms(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms strictly inside (0, 1)."""
    u = rng.random(size)
    zero = u == 0.0
    while zero.any():
        u[zero] = rng.random(int(zero.sum()))
        zero = u == 0.0
    return u


# =============================================================================
# Event kernel
# =============================================================================


def _check_start(n: int, x0: int, t_max: float) -> None:
    if int(x0) != x0 or not 0 <= x0 <= n:
        raise DomainError(f"x0 must be an integer in [0, {n}], got {x0}", component="abm")
    if not (t_max > 0 and math.isfinite(t_max)):
        raise DomainError(f"t_max must be finite and > 0, got {t_max}", component="abm")


def _rate_tables(p: ChainParams) -> tuple[list[float], list[float]]:
    states = range(p.n + 1)
    return [p.birth_rate(x) for x in states], [p.death_rate(x) for x in states]


def _jumps(
    birth: list[float], death: list[float], x0: int, t_max: float, rng: np.random.Generator
) -> Iterator[tuple[float, int]]:
    """Yield (time, state after event) until the next event would pass t_max or the chain freezes."""
    t = 0.0
    x = x0
    waits: list[float] = []
    picks: list[float] = []
    i = 0
    while True:
        total = birth[x] + death[x]
        if total <= 0.0:
            return
        if i == len(waits):
            waits = (-np.log(_open_uniforms(rng, _BLOCK))).tolist()
            picks = rng.random(_BLOCK).tolist()
            i = 0
        t += waits[i] / total
        if t > t_max:
            return
        if picks[i] * total < birth[x]:
            x += 1
        else:
            x -= 1
        i += 1
        yield t, x


def _run(p: ChainParams, x0: int, t_max: float, seed: SeedLike) -> JumpPath:
    _check_start(p.n, x0, t_max)
    birth, death = _rate_tables(p)
    times = [0.0]
    states = [int(x0)]
    for t, x in _jumps(birth, death, int(x0), t_max, _rng(seed)):
        times.append(t)
        states.append(x)
    return JumpPath(times=np.array(times), states=np.array(states), n=p.n, t_max=float(t_max))


# =============================================================================
# Simulators
# =============================================================================


def simulate_adoption(p: DiffusionParams, x0: int, t_max: float, seed: SeedLike) -> JumpPath:
    """Pure-birth adoption chain with rate (N - X)(sigma + h X / N)."""
    return _run(p, x0, t_max, seed)


def simulate_kirman(p: KirmanParams, x0: int, t_max: float, seed: SeedLike) -> JumpPath:
    """Birth-death herding chain; the event type is chosen with probability lambda+/(lambda+ + lambda-)."""
    return _run(p, x0, t_max, seed)


def simulate_adoption_ensemble(
    p: DiffusionParams, x0: int, t_max: float, runs: int, seed: Seed | int
) -> list[JumpPath]:
    if runs < 1:
        raise DomainError(f"runs must be >= 1, got {runs}", component="abm")
    return [simulate_adoption(p, x0, t_max, derive_seed(seed, i)) for i in range(runs)]


def simulate_discrete(
    p: ChainParams, x0: int, t_max: float, dt: float, seed: SeedLike
) -> JumpPath:
    """
    Small-time-step scheme: in each step of length dt the chain moves up with
    probability lambda+(X) dt, down with probability lambda-(X) dt, else stays.
    Only state changes are recorded.
    """
    _check_start(p.n, x0, t_max)
    if not 0 < dt <= t_max:
        raise DomainError(f"dt must lie in (0, t_max], got {dt}", component="abm")
    birth, death = _rate_tables(p)
    worst = max(b + d for b, d in zip(birth, death))
    if worst * dt > 1.0:
        raise DomainError(
            f"dt={dt} too large: max transition probability per step is {worst * dt:.3g}",
            component="abm",
        )
    rng = _rng(seed)
    steps = math.floor(t_max / dt)
    times = [0.0]
    states = [int(x0)]
    x = int(x0)
    for start in range(0, steps, _BLOCK):
        u = rng.random(min(_BLOCK, steps - start)).tolist()
        for j, draw in enumerate(u):
            up = birth[x] * dt
            if draw < up:
                x += 1
            elif draw < up + death[x] * dt:
                x -= 1
            else:
                continue
            times.append(min((start + j + 1) * dt, t_max))
            states.append(x)
    return JumpPath(times=np.array(times), states=np.array(states), n=p.n, t_max=float(t_max))


# =============================================================================
# Stationary distribution and path statistics
# =============================================================================


def stationary_oracle(p: KirmanParams) -> np.ndarray:
    """Detailed balance: pi(X+1) = pi(X) lambda+(X) / lambda-(X+1), normalized."""
    birth, death = _rate_tables(p)
    if any(d <= 0 for d in death[1:]):
        raise DomainError(
            "death rate vanishes for some X >= 1; the chain is absorbing", component="abm"
        )
    with np.errstate(divide="ignore"):
        log_up = np.log(np.array(birth[:-1]))
    log_pi = np.concatenate(([0.0], np.cumsum(log_up - np.log(np.array(death[1:])))))
    pi = np.exp(log_pi - np.max(log_pi))
    return pi / pi.sum()


def time_weighted_occupancy(path: JumpPath) -> np.ndarray:
    """Fraction of [0, t_max] spent in each state 0..n."""
    durations = np.diff(np.append(path.times, path.t_max))
    occupancy = np.bincount(path.states, weights=durations, minlength=path.n + 1)
    return occupancy / path.t_max


def kirman_occupancy(p: KirmanParams, x0: int, t_max: float, seed: SeedLike) -> np.ndarray:
    """
    time_weighted_occupancy(simulate_kirman(p, x0, t_max, seed)) without storing
    the events, for runs with tens of millions of jumps.
    """
    _check_start(p.n, x0, t_max)
    birth, death = _rate_tables(p)
    occupancy = [0.0] * (p.n + 1)
    t_prev = 0.0
    x_prev = int(x0)
    for t, x in _jumps(birth, death, int(x0), t_max, _rng(seed)):
        occupancy[x_prev] += t - t_prev
        t_prev, x_prev = t, x
    occupancy[x_prev] += t_max - t_prev
    return np.array(occupancy) / t_max


def ensemble_mean_on_grid(paths: Sequence[JumpPath], grid: Sequence[float]) -> np.ndarray:
    """Mean adopter fraction X(t)/n across paths at each grid time."""
    if not paths:
        raise DomainError("need at least one path", component="abm")
    n = paths[0].n
    if any(path.n != n for path in paths):
        raise DomainError("all paths must share n", component="abm")
    grid = np.asarray(grid, dtype=float)
    horizon = min(path.t_max for path in paths)
    if grid.size and (grid[0] < 0 or grid[-1] > horizon or np.any(np.diff(grid) <= 0)):
        raise DomainError(f"grid must be increasing within [0, {horizon}]", component="abm")
    counts = np.stack([path.state_at(grid) for path in paths])
    return counts.mean(axis=0) / n


def coupled_tfp_path(path: JumpPath, gamma: float, a0: float) -> Trajectory:
    """
    TFP growing at rate gamma (1 - X/n) between events. Exact: log A is piecewise
    linear, sampled at every event time and at t_max.
    """
    if not gamma > 0 or not a0 > 0:
        raise DomainError(f"gamma and a0 must be > 0, got {gamma}, {a0}", component="abm")
    times = path.times
    states = path.states
    if path.t_max > times[-1]:
        times = np.append(times, path.t_max)
        states = np.append(states, states[-1])
    rates = gamma * (1.0 - states[:-1] / path.n)
    log_growth = np.concatenate(([0.0], np.cumsum(rates * np.diff(times))))
    return Trajectory(times=times, values=a0 * np.exp(log_growth))
