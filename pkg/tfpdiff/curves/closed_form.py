from tfpdiff.core.model import (
    eval_a_fixed,
    eval_a_moving,
    eval_frontier,
    eval_s,
    eval_x,
    kremer_tfp,
)
from tfpdiff.core.types import (
    AdoptionParams,
    CatchUpParams,
    FixedFrontierParams,
    FrontierParams,
    KremerParams,
)
from tfpdiff.curves.base_curve import BaseCurve


class FixedFrontierCurve(BaseCurve):
    """Catch-up toward a constant frontier. Params: a0, a_m, h."""

    def __init__(self, name: str, a0: float, a_m: float, h: float):
        super().__init__(name, a0=a0, a_m=a_m, h=h)
        self.model = FixedFrontierParams(a0=a0, a_m=a_m, h=h)

    def evaluate(self, t: float) -> float:
        return eval_a_fixed(self.model, t)


class FrontierCurve(BaseCurve):
    """Exponential frontier. Params: a_m0, gamma_m."""

    def __init__(self, name: str, a_m0: float, gamma_m: float):
        super().__init__(name, a_m0=a_m0, gamma_m=gamma_m)
        self.frontier = FrontierParams(a_m0=a_m0, gamma_m=gamma_m)

    def evaluate(self, t: float) -> float:
        return eval_frontier(self.frontier, t)


class MovingFrontierCurve(BaseCurve):
    """Catch-up toward an exponential frontier. Params: a_m0, gamma_m, a0, gamma."""

    def __init__(self, name: str, a_m0: float, gamma_m: float, a0: float, gamma: float):
        super().__init__(name, a_m0=a_m0, gamma_m=gamma_m, a0=a0, gamma=gamma)
        self.frontier = FrontierParams(a_m0=a_m0, gamma_m=gamma_m)
        self.catchup = CatchUpParams(a0=a0, gamma=gamma)

    def evaluate(self, t: float) -> float:
        return eval_a_moving(self.frontier, self.catchup, t)


class AdoptionCurve(BaseCurve):
    """Adopter share x(t). Params: sigma, h."""

    def __init__(self, name: str, sigma: float, h: float):
        super().__init__(name, sigma=sigma, h=h)
        self.adoption = AdoptionParams(sigma=sigma, h=h)

    def evaluate(self, t: float) -> float:
        return eval_x(self.adoption, t)


class NonAdopterCurve(AdoptionCurve):
    """Non-adopter share s(t). Params: sigma, h."""

    def evaluate(self, t: float) -> float:
        return eval_s(self.adoption, t)


class KremerCurve(BaseCurve):
    """Innovator-driven exponential growth. Params: a0, gamma, n."""

    def __init__(self, name: str, a0: float, gamma: float, n: float):
        super().__init__(name, a0=a0, gamma=gamma, n=n)
        self.kremer = KremerParams(a0=a0, gamma=gamma, n=n)

    def evaluate(self, t: float) -> float:
        return kremer_tfp(self.kremer, t)
