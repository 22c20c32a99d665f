"""Exact unique information for finite alphabets.

``UI(M : X \\ Y)`` under the message-side definition is the largest
``I(T; X)`` over channels ``p(t | m)`` whose output is independent of ``Y``.
The feasible channels form a polytope (see :mod:`markov_pid.polytope`) and
the objective is convex in the channel, so it is enough to evaluate the
vertices.  The source-side definition swaps the roles of ``M`` and ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .exceptions import EnumerationCapError, UsageError
from .joint import DiscreteJoint
from .measures import conditional_mutual_information, mutual_information
from .pid import Definition, PIDTerms, as_definition
from .polytope import (
    DEFAULT_MAX_VARS,
    Channel,
    build_polytope,
    enumerate_vertices,
    sample_vertices,
    source_view,
)
from .units import InfoUnit, as_unit, clamp_nonneg

TIE_TOL = 1e-12


class Method(str, Enum):
    EXHAUSTIVE = "exhaustive_vertex"
    SAMPLED = "sampled_vertex"


class Mode(str, Enum):
    EXACT = "exact"
    SAMPLE = "sample"
    #: exact when the polytope fits under the cap, sampling otherwise
    AUTO = "auto"


@dataclass(frozen=True, eq=False)
class DiscreteUIResult:
    value: float
    unit: InfoUnit
    definition: Definition
    t_card: int
    method: Method
    certified: bool
    optimal_channel: Channel
    vertices_examined: int
    #: value at ``t_card + 1`` minus value at ``t_card``, when probed
    t_card_increase: float | None = None

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "unit": self.unit.value,
            "definition": self.definition.value,
            "t_card": self.t_card,
            "method": self.method.value,
            "certified": self.certified,
            "optimal_channel": self.optimal_channel.probs.reshape(-1).tolist(),
            "optimal_channel_shape": list(self.optimal_channel.probs.shape),
            "vertices_examined": self.vertices_examined,
        }
        if self.t_card_increase is not None:
            d["t_card_increase"] = self.t_card_increase
        return d


def default_t_card(joint: DiscreteJoint, definition: Definition | str = Definition.TMXY) -> int:
    """One more than the effective (non-null) source alphabet size."""
    view = source_view(joint, as_definition(definition))
    return int(view.support_mask(0).sum()) + 1


def channel_objective(q: np.ndarray, p_st: np.ndarray) -> np.ndarray:
    """``I(T; target)`` in nats for one channel ``(t, s)`` or a stack ``(k, t, s)``."""
    q = np.asarray(q, dtype=float)
    p_tg = q @ p_st
    p_t = p_tg.sum(axis=-1, keepdims=True)
    p_g = p_st.sum(axis=0)
    denom = p_t * p_g
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p_tg > 0.0, p_tg * np.log(p_tg / denom), 0.0)
    return terms.sum(axis=(-2, -1))


def _pick(channels: list[Channel], values: np.ndarray) -> int:
    """Best value; ties within 1e-12 go to the lexicographically smallest channel."""
    best = values.max()
    cand = np.flatnonzero(values >= best - TIE_TOL)
    keys = [tuple(channels[i].probs.reshape(-1)) for i in cand]
    return int(cand[min(range(len(cand)), key=keys.__getitem__)])


def _solve(joint, definition, t_card, mode, seed, samples, max_vars):
    view = source_view(joint, definition).drop_null()
    src, tgt, _ = view.var_names
    poly = build_polytope(joint, definition, t_card)
    if view.shape[1] == 1:
        # constant target: every channel scores 0, report the constant one
        q = np.zeros((t_card, poly.source_size))
        q[0] = 1.0
        return 0.0, poly.to_channel(q.reshape(-1)), Method.EXHAUSTIVE, True, 1

    if mode is Mode.AUTO:
        mode = Mode.EXACT if poly.n_vars <= max_vars else Mode.SAMPLE
    if mode is Mode.EXACT:
        vs = enumerate_vertices(poly, max_vars=max_vars)
        channels, method, certified = vs.channels, Method.EXHAUSTIVE, vs.exhaustive
    else:
        channels = sample_vertices(poly, samples, seed)
        method, certified = Method.SAMPLED, False

    p_st = view.marginal((src, tgt))
    stack = np.stack([c.probs[:, poly.source_support] for c in channels])
    values = channel_objective(stack, p_st)
    k = _pick(channels, values)
    return float(values[k]), channels[k], method, certified, len(channels)


def ui_discrete(
    joint: DiscreteJoint,
    definition: Definition | str = Definition.TMXY,
    t_card: int | None = None,
    mode: Mode | str = Mode.EXACT,
    unit: InfoUnit | str = InfoUnit.BITS,
    seed: int = 0,
    samples: int = 64,
    max_vars: int = DEFAULT_MAX_VARS,
    probe_t_card: bool = False,
) -> DiscreteUIResult:
    """Unique information of X about M not in Y, maximized over vertex channels.

    ``certified`` is True only when every vertex at this ``t_card`` was
    examined.  With ``probe_t_card`` the problem is re-solved at
    ``t_card + 1`` and any increase is reported; a positive increase means the
    chosen ``t_card`` was too small.
    """
    definition, unit, mode = as_definition(definition), as_unit(unit), Mode(mode)
    if t_card is None:
        t_card = default_t_card(joint, definition)
    if t_card < 1:
        raise UsageError(f"t_card must be at least 1, got {t_card}")
    nats, channel, method, certified, examined = _solve(
        joint, definition, t_card, mode, seed, samples, max_vars
    )
    nats = clamp_nonneg(nats, "unique information")

    increase = None
    if probe_t_card:
        try:
            bigger, *_ = _solve(joint, definition, t_card + 1, mode, seed, samples, max_vars)
        except EnumerationCapError:
            bigger = None
        if bigger is not None:
            increase = unit.from_nats(max(bigger - nats, 0.0))

    return DiscreteUIResult(
        value=unit.from_nats(nats),
        unit=unit,
        definition=definition,
        t_card=t_card,
        method=method,
        certified=certified,
        optimal_channel=channel,
        vertices_examined=examined,
        t_card_increase=increase,
    )


class DiscreteDecomposition(NamedTuple):
    terms: PIDTerms
    ui_x: DiscreteUIResult
    ui_y: DiscreteUIResult


def decompose_discrete(
    joint: DiscreteJoint,
    definition: Definition | str = Definition.TMXY,
    t_card: int | None = None,
    mode: Mode | str = Mode.EXACT,
    unit: InfoUnit | str = InfoUnit.BITS,
    seed: int = 0,
    **kwargs,
) -> DiscreteDecomposition:
    """PID terms together with the two unique-information solutions behind them."""
    definition, unit = as_definition(definition), as_unit(unit)
    m, x, y = joint.var_names
    ux = ui_discrete(joint, definition, t_card, mode, unit, seed, **kwargs)
    uy = ui_discrete(joint.reorder((m, y, x)), definition, t_card, mode, unit, seed, **kwargs)
    terms = PIDTerms.from_parts(
        i_mx=mutual_information(joint, m, x, unit),
        i_my=mutual_information(joint, m, y, unit),
        i_mx_given_y=conditional_mutual_information(joint, m, x, y, unit),
        i_my_given_x=conditional_mutual_information(joint, m, y, x, unit),
        ui_x=ux.value,
        ui_y=uy.value,
        unit=unit,
    )
    return DiscreteDecomposition(terms, ux, uy)


def pid_terms_discrete(
    joint: DiscreteJoint,
    definition: Definition | str = Definition.TMXY,
    t_card: int | None = None,
    mode: Mode | str = Mode.EXACT,
    unit: InfoUnit | str = InfoUnit.BITS,
    seed: int = 0,
) -> PIDTerms:
    return decompose_discrete(joint, definition, t_card, mode, unit, seed).terms


# ---------------------------------------------------------------------------
# Canonical examples
# ---------------------------------------------------------------------------

CANONICAL = ("RDN", "UNQ", "XOR", "AND")


def canonical_example(name: str) -> DiscreteJoint:
    """The four two-bit gates: RDN, UNQ, XOR and AND, as ``(M, X, Y)`` joints."""
    key = str(name).upper()
    bits = (0, 1)
    if key == "RDN":
        p = np.zeros((2, 2, 2))
        p[0, 0, 0] = p[1, 1, 1] = 0.5
        return DiscreteJoint(p, ("M", "X", "Y"), (bits, bits, bits))
    if key == "UNQ":
        p = np.zeros((4, 2, 2))
        for x in bits:
            for y in bits:
                p[2 * x + y, x, y] = 0.25
        return DiscreteJoint(p, ("M", "X", "Y"), (("00", "01", "10", "11"), bits, bits))
    if key in ("XOR", "AND"):
        gate = (lambda a, b: a ^ b) if key == "XOR" else (lambda a, b: a & b)
        p = np.zeros((2, 2, 2))
        for x in bits:
            for y in bits:
                p[gate(x, y), x, y] = 0.25
        return DiscreteJoint(p, ("M", "X", "Y"), (bits, bits, bits))
    raise UsageError(f"unknown example {name!r}; choose from {', '.join(CANONICAL)}")


# ---------------------------------------------------------------------------
# Binary independence lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaB1Report:
    """Independence flags for a chain ``X - Y - Z`` with binary ``Y`` and ``Z``.

    The claim checked: ``X`` independent of ``Z`` and ``Y`` dependent on ``Z``
    force ``X`` independent of ``Y``.
    """

    mi_xz: float
    mi_yz: float
    mi_xy: float
    markov_residual: float
    tol: float
    unit: InfoUnit

    @property
    def x_indep_z(self) -> bool:
        return self.mi_xz <= self.tol

    @property
    def y_indep_z(self) -> bool:
        return self.mi_yz <= self.tol

    @property
    def x_indep_y(self) -> bool:
        return self.mi_xy <= self.tol

    @property
    def hypothesis(self) -> bool:
        return self.x_indep_z and not self.y_indep_z

    @property
    def passed(self) -> bool:
        return not self.hypothesis or self.x_indep_y


def lemma_b1_verify(
    joint: DiscreteJoint, tol: float = 1e-9, unit: InfoUnit | str = InfoUnit.BITS
) -> LemmaB1Report:
    """Check the binary independence lemma on a joint over ``(X, Y, Z)``.

    Variables are read by position.  ``Y`` and ``Z`` must be binary (two
    symbols with positive mass) and ``I(X; Z | Y)`` must be within ``tol``.
    """
    unit = as_unit(unit)
    if len(joint.var_names) != 3:
        raise UsageError("lemma check needs a joint over exactly (X, Y, Z)")
    x, y, z = joint.var_names
    eff = joint.drop_null()
    for name in (y, z):
        (ax,) = joint.axes(name)
        if joint.shape[ax] != 2:
            raise UsageError(f"{name} must be binary, has {joint.shape[ax]} symbols")
    residual = conditional_mutual_information(eff, x, z, y, unit)
    if residual > tol:
        raise UsageError(f"joint violates the chain {x}-{y}-{z}: I({x};{z}|{y}) = {residual:.3e}")
    return LemmaB1Report(
        mi_xz=mutual_information(eff, x, z, unit),
        mi_yz=mutual_information(eff, y, z, unit),
        mi_xy=mutual_information(eff, x, y, unit),
        markov_residual=residual,
        tol=tol,
        unit=unit,
    )
