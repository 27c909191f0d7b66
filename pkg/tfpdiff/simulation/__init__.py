from tfpdiff.simulation.abm import (
    coupled_tfp_path,
    derive_seed,
    ensemble_mean_on_grid,
    kirman_occupancy,
    simulate_adoption,
    simulate_adoption_ensemble,
    simulate_discrete,
    simulate_kirman,
    stationary_oracle,
    time_weighted_occupancy,
)

__all__ = [
    "coupled_tfp_path",
    "derive_seed",
    "ensemble_mean_on_grid",
    "kirman_occupancy",
    "simulate_adoption",
    "simulate_adoption_ensemble",
    "simulate_discrete",
    "simulate_kirman",
    "stationary_oracle",
    "time_weighted_occupancy",
]
