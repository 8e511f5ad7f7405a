"""Adaptation logics behind one interface, selectable by canonical name."""

from __future__ import annotations

import dataclasses
from typing import Any, Mapping

from .base import AdaptationContext, AdaptationLogic, Decision
from .estimators import dashjs_estimate, harmonic_mean, sliding_average, drop_reactive_weight
from .logics import DashJS, Festive, Instant, Liu, Miller, OSMF, Panda, QDash, Thang, TianLiu

LOGICS: dict[str, type[AdaptationLogic]] = {
    cls.name: cls
    for cls in (DashJS, Festive, Instant, Liu, Miller, OSMF, Panda, QDash, Thang, TianLiu)
}
LOGIC_NAMES = tuple(LOGICS)


class UnknownLogicError(KeyError):
    def __str__(self):
        return f"unknown logic {self.args[0]!r} (choose from {', '.join(LOGIC_NAMES)})"


def make_logic(name: str, seed: int = 0, params: Mapping[str, Any] | None = None) -> AdaptationLogic:
    try:
        cls = LOGICS[name]
    except KeyError:
        raise UnknownLogicError(name) from None
    params = dict(params or {})
    unknown = set(params) - set(cls.param_names())
    if unknown:
        raise ValueError(f"{name}: unknown parameter(s) {', '.join(sorted(unknown))}")
    return cls(seed=seed, **params)


def default_params() -> dict[str, dict[str, Any]]:
    """The full parameter table, keyed by logic name."""
    return {name: dataclasses.asdict(cls.Params()) for name, cls in LOGICS.items()}


__all__ = [
    "AdaptationContext", "AdaptationLogic", "Decision", "LOGICS", "LOGIC_NAMES",
    "UnknownLogicError", "make_logic", "default_params", "dashjs_estimate",
    "harmonic_mean", "sliding_average", "drop_reactive_weight",
    "DashJS", "Festive", "Instant", "Liu", "Miller", "OSMF", "Panda", "QDash",
    "Thang", "TianLiu",
]
