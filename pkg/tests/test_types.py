"""Tests for core types."""

import numpy as np
import pytest

from tfpdiff.core.types import (
    AdoptionParams,
    CatchUpParams,
    CurveSpec,
    Dataset,
    DiffusionParams,
    FitResult,
    FixedFrontierParams,
    FrontierParams,
    JumpPath,
    KirmanParams,
    KremerParams,
    LmOptions,
    ProjectionRow,
    ProjectionTable,
    RunMetadata,
    Seed,
    TfpSeries,
    TimeOrigin,
    _serialize_value,
)
from tfpdiff.errors import DomainError


class TestSerializeValue:
    """Tests for _serialize_value helper."""

    def test_primitives(self):
        assert _serialize_value(None) is None
        assert _serialize_value(True) is True
        assert _serialize_value(42) == 42
        assert _serialize_value(3.14) == 3.14
        assert _serialize_value("DEU") == "DEU"

    def test_numpy(self):
        assert _serialize_value(np.float64(0.5)) == 0.5
        assert isinstance(_serialize_value(np.int64(3)), int)
        assert _serialize_value(np.eye(2)) == [[1.0, 0.0], [0.0, 1.0]]

    def test_nested(self):
        value = {"a": (1, np.float64(2.0)), 3: [FrontierParams(1.0, 0.1)]}
        assert _serialize_value(value) == {"a": [1, 2.0], "3": [{"a_m0": 1.0, "gamma_m": 0.1}]}

    def test_unknown_falls_back_to_repr(self):
        class Opaque:
            def __repr__(self):
                return "<opaque>"

        assert _serialize_value(Opaque()) == "<opaque>"


class TestModelParams:
    """Validation of closed-form parameter types."""

    def test_adoption_rejects_negative(self):
        with pytest.raises(DomainError):
            AdoptionParams(sigma=-0.1, h=0.5)

    def test_fixed_frontier_requires_a0_below_a_m(self):
        with pytest.raises(DomainError):
            FixedFrontierParams(a0=3.0, a_m=2.0, h=0.1)
        FixedFrontierParams(a0=2.0, a_m=2.0, h=0.1)

    def test_frontier_allows_zero_growth(self):
        assert FrontierParams(a_m0=1.0, gamma_m=0.0).gamma_m == 0.0
        with pytest.raises(DomainError):
            FrontierParams(a_m0=0.0, gamma_m=0.01)

    def test_catchup_requires_positive_values(self):
        with pytest.raises(DomainError):
            CatchUpParams(a0=1.0, gamma=0.0)
        with pytest.raises(DomainError):
            CatchUpParams(a0=float("nan"), gamma=0.1)

    def test_converges_to(self):
        frontier = FrontierParams(a_m0=28.7205, gamma_m=0.0381261)
        assert CatchUpParams(3.0, 0.15).converges_to(frontier)
        assert not CatchUpParams(3.0, 0.03).converges_to(frontier)

    def test_kremer(self):
        with pytest.raises(DomainError):
            KremerParams(a0=1.0, gamma=0.1, n=0.0)

    def test_round_trips(self):
        assert FrontierParams.from_dict(FrontierParams(28.7, 0.038).to_dict()) == FrontierParams(28.7, 0.038)
        assert CatchUpParams.from_dict({"a0": "3.5", "gamma": 0.1}) == CatchUpParams(3.5, 0.1)


class TestSimulationTypes:
    """Validation of agent-based simulation types."""

    def test_diffusion_rates(self):
        p = DiffusionParams(sigma=0.1, h=0.5, n=10)
        assert p.birth_rate(0) == pytest.approx(1.0)
        assert p.birth_rate(10) == 0.0
        assert p.birth_rate(4) == pytest.approx(6 * (0.1 + 0.5 * 0.4))
        assert p.death_rate(4) == 0.0
        assert p.adoption == AdoptionParams(0.1, 0.5)

    def test_diffusion_needs_some_rate(self):
        with pytest.raises(DomainError):
            DiffusionParams(sigma=0.0, h=0.0, n=10)
        with pytest.raises(DomainError):
            DiffusionParams(sigma=0.1, h=0.0, n=0)
        with pytest.raises(DomainError):
            DiffusionParams(sigma=0.1, h=0.0, n=2.5)

    def test_kirman_rates(self):
        p = KirmanParams(sigma1=0.01, sigma2=0.02, h=0.1, n=10)
        assert p.birth_rate(3) == pytest.approx(7 * (0.01 + 0.3))
        assert p.death_rate(3) == pytest.approx(3 * (0.02 + 0.7))
        assert p.birth_rate(10) == 0.0
        assert p.death_rate(0) == 0.0

    def test_kirman_constructors(self):
        assert KirmanParams.from_non_extensive(0.01, 0.01, 0.1, 50).h == 0.1
        assert KirmanParams.from_local_herding(0.01, 0.01, 0.1, 50).h == pytest.approx(0.002)

    def test_seed_range(self):
        Seed(0)
        Seed(2**64 - 1)
        with pytest.raises(DomainError):
            Seed(-1)
        with pytest.raises(DomainError):
            Seed(2**64)

    def test_jump_path_validation(self):
        path = JumpPath(times=[0.0, 0.5, 1.2], states=[0, 1, 2], n=5, t_max=2.0)
        assert path.event_count == 2
        assert path.state_at(0.5).item() == 1
        assert path.state_at(np.array([0.0, 0.49, 1.9])).tolist() == [0, 0, 2]
        with pytest.raises(DomainError):
            JumpPath(times=[0.0, 3.0], states=[0, 1], n=5, t_max=2.0)
        with pytest.raises(DomainError):
            JumpPath(times=[0.0, 1.0], states=[0, 6], n=5, t_max=2.0)


class TestCalibrationTypes:
    """Validation of calibration types."""

    def test_series_validation(self):
        with pytest.raises(DomainError):
            TfpSeries("DEU", (1996, 1995), (1.0, 2.0))
        with pytest.raises(DomainError):
            TfpSeries("DEU", (1995,), (-1.0,))
        with pytest.raises(DomainError):
            TfpSeries("", (1995,), (1.0,))

    def test_time_origin(self):
        series = TfpSeries("DEU", (1995, 1996), (1.0, 2.0))
        origin = TimeOrigin.from_series(series)
        assert origin.t0_year == 1995
        assert series.times(origin).tolist() == [0.0, 1.0]
        with pytest.raises(DomainError):
            TimeOrigin(1996).check_series(series)

    def test_lm_options(self):
        with pytest.raises(DomainError):
            LmOptions(damping_factor=1.0)
        with pytest.raises(DomainError):
            LmOptions(ftol=0.0)

    def test_fit_result_validation(self):
        with pytest.raises(DomainError):
            FitResult(
                params={"a": 1.0, "b": 2.0},
                stderr={"a": 0.1, "b": 0.1},
                covariance=np.array([[1.0, 0.5], [0.4, 1.0]]),
                ssr=1.0,
                n_obs=10,
                iterations=1,
                converged=True,
            )
        with pytest.raises(DomainError):
            FitResult(
                params={"a": 1.0, "b": 2.0},
                stderr={"a": 0.1, "b": 0.1},
                covariance=np.eye(2),
                ssr=1.0,
                n_obs=2,
                iterations=1,
                converged=True,
            )

    def test_fit_result_round_trip(self):
        fit = FitResult(
            params={"a0": 3.0, "gamma": 0.1},
            stderr={"a0": 0.2, "gamma": 0.01},
            covariance=np.array([[0.04, -0.001], [-0.001, 0.0001]]),
            ssr=1.5,
            n_obs=30,
            iterations=4,
            converged=True,
            model="catchup",
            country="Romania",
            t0_year=1995,
            frontier=FrontierParams(28.7205, 0.0381261),
            flags=("gamma<=gamma_m",),
        )
        again = FitResult.from_dict(fit.to_dict())
        assert again.params == fit.params
        assert again.frontier == fit.frontier
        assert again.flags == fit.flags
        np.testing.assert_array_equal(again.covariance, fit.covariance)

    def test_dataset_is_sorted(self):
        dataset = Dataset({"POL": TfpSeries("POL", (1995,), (1.0,)), "DEU": TfpSeries("DEU", (1995,), (2.0,))})
        assert list(dataset) == ["DEU", "POL"]
        assert "DEU" in dataset
        with pytest.raises(DomainError):
            dataset["XYZ"]

    def test_dataset_key_must_match(self):
        with pytest.raises(DomainError):
            Dataset({"DEU": TfpSeries("POL", (1995,), (1.0,))})

    def test_projection_table_order(self):
        high = ProjectionRow("A", 1.0, 0.1, 0.2, 0.01, {2030: 5.0, 2050: 9.0})
        low = ProjectionRow("B", 1.0, 0.1, 0.1, 0.01, {2030: 4.0, 2050: 7.0})
        assert ProjectionTable(rows=(high, low)).columns[-1] == "a2050"
        with pytest.raises(DomainError):
            ProjectionTable(rows=(low, high))
        with pytest.raises(DomainError):
            ProjectionTable(rows=(high,), years=(2030,))

    def test_run_metadata(self):
        record = RunMetadata(command="fit-all", options=LmOptions(max_iterations=5), countries=["SYN"]).to_dict()
        assert record["options"]["max_iterations"] == 5
        assert record["countries"] == ["SYN"]

    def test_curve_spec_round_trip(self):
        spec = CurveSpec("Romania", "moving", {"a_m0": 28.7205, "gamma_m": 0.0381261, "a0": 3.25, "gamma": 0.149})
        assert CurveSpec.from_dict(spec.to_dict()) == spec
