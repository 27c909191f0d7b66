from tfpdiff.core.types import CurveSpec
from tfpdiff.curves.base_curve import BaseCurve
from tfpdiff.errors import DomainError

__all__ = ["BaseCurve", "get_curve"]

_SUPPORTED = ["fixed", "moving", "frontier", "adoption", "non_adopters", "kremer"]


def get_curve(spec: CurveSpec) -> BaseCurve:
    """
    Routes a curve spec (kind + params) to the matching closed-form curve.
    Currently supported kinds: ['fixed', 'moving', 'frontier', 'adoption', 'non_adopters', 'kremer']
    """
    from tfpdiff.curves.closed_form import (
        AdoptionCurve,
        FixedFrontierCurve,
        FrontierCurve,
        KremerCurve,
        MovingFrontierCurve,
        NonAdopterCurve,
    )

    classes = {
        "fixed": FixedFrontierCurve,
        "moving": MovingFrontierCurve,
        "frontier": FrontierCurve,
        "adoption": AdoptionCurve,
        "non_adopters": NonAdopterCurve,
        "kremer": KremerCurve,
    }
    if spec.kind not in classes:
        raise DomainError(
            f"Unknown curve kind: {spec.kind}. Supported kinds: {_SUPPORTED}", component="data"
        )
    try:
        return classes[spec.kind](spec.name, **spec.params)
    except TypeError as e:
        raise DomainError(f"curve {spec.name!r}: bad parameters ({e})", component="data") from e
