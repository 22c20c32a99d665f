"""Unsymmetrized redundancy and synergy derived from a pair of unique informations."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from .units import InfoUnit


class Definition(str, Enum):
    """Which Markov chain the extractor sits on.

    ``TMXY``: ``T - M - (X, Y)``, maximize ``I(T; X)``.
    ``MYXT``: ``(M, Y) - X - T``, maximize ``I(T; M)``.
    Both require ``T`` independent of ``Y``.
    """

    TMXY = "tmxy"
    MYXT = "myxt"


def as_definition(d: Definition | str) -> Definition:
    return d if isinstance(d, Definition) else Definition(str(d).lower())


FIELDS = (
    "i_mx",
    "i_my",
    "i_mx_given_y",
    "i_my_given_x",
    "ui_x",
    "ui_y",
    "r_x",
    "r_y",
    "s_x",
    "s_y",
)


@dataclass(frozen=True)
class PIDTerms:
    """Mutual informations, unique informations and the derived R/S terms.

    ``r_x = i_mx - ui_x`` and ``s_x = i_mx_given_y - ui_x`` (likewise for Y)
    hold exactly because the derived fields are computed by that subtraction.
    Nothing is clamped here, so a negative entry is visible as such.
    """

    i_mx: float
    i_my: float
    i_mx_given_y: float
    i_my_given_x: float
    ui_x: float
    ui_y: float
    r_x: float
    r_y: float
    s_x: float
    s_y: float
    unit: InfoUnit = InfoUnit.BITS

    @classmethod
    def from_parts(cls, *, i_mx, i_my, i_mx_given_y, i_my_given_x, ui_x, ui_y, unit) -> "PIDTerms":
        return cls(
            i_mx=i_mx,
            i_my=i_my,
            i_mx_given_y=i_mx_given_y,
            i_my_given_x=i_my_given_x,
            ui_x=ui_x,
            ui_y=ui_y,
            r_x=i_mx - ui_x,
            r_y=i_my - ui_y,
            s_x=i_mx_given_y - ui_x,
            s_y=i_my_given_x - ui_y,
            unit=unit,
        )

    def values(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in FIELDS}

    def min_term(self) -> float:
        return min(self.values().values())

    def sum_axiom_residuals(self) -> dict[str, float]:
        """Residuals of the three PID sum rules under the unsymmetrized terms.

        ``I(M; X, Y)`` has two chain-rule expansions; pairing ``R_X`` with
        ``S_Y`` and ``R_Y`` with ``S_X`` turns each into the four-term sum,
        so the first residual is the disagreement between those two totals.
        """
        total_x = self.r_x + self.ui_x + self.ui_y + self.s_y
        total_y = self.r_y + self.ui_y + self.ui_x + self.s_x
        return {
            "total": total_x - total_y,
            "source_x": self.i_mx - (self.r_x + self.ui_x),
            "source_y": self.i_my - (self.r_y + self.ui_y),
        }

    def table_row(self) -> tuple[float, float, float, float]:
        """``(UI_X, UI_Y, R, S)`` with R and S taken from the X side."""
        return (self.ui_x, self.ui_y, self.r_x, self.s_x)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["unit"] = self.unit.value
        return d
