from abc import ABC, abstractmethod


class BaseCurve(ABC):
    """
    Base class for every closed-form curve that can be sampled for plotting. Curves are
    evaluated in model time t (years since the time origin).
    """

    def __init__(self, name: str, **params: float):
        self.name = name
        self.params = params

    @abstractmethod
    def evaluate(self, t: float) -> float:
        raise NotImplementedError

    def sample(self, times: list[float]) -> list[float]:
        return [self.evaluate(t) for t in times]
