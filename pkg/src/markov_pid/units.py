"""Information units. Everything is computed in nats and converted on the way out."""

from __future__ import annotations

import math
from enum import Enum

from .exceptions import NegativeInformationError

LN2 = math.log(2.0)

#: Round-off allowance for quantities that are non-negative in exact arithmetic.
NEG_CLAMP_TOL = 1e-9


class InfoUnit(str, Enum):
    BITS = "bits"
    NATS = "nats"

    @property
    def per_nat(self) -> float:
        return 1.0 / LN2 if self is InfoUnit.BITS else 1.0

    def from_nats(self, value: float) -> float:
        if self is InfoUnit.NATS:
            return value
        return value / LN2

    def to_nats(self, value: float) -> float:
        if self is InfoUnit.NATS:
            return value
        return value * LN2


def as_unit(unit: InfoUnit | str) -> InfoUnit:
    return unit if isinstance(unit, InfoUnit) else InfoUnit(str(unit).lower())


def clamp_nonneg(value: float, what: str = "quantity") -> float:
    """Map tiny negative round-off to 0; raise on anything larger."""
    if value >= 0.0 or math.isnan(value):
        return value
    if value >= -NEG_CLAMP_TOL:
        return 0.0
    raise NegativeInformationError(f"{what} is negative ({value:.3e}) beyond round-off")
