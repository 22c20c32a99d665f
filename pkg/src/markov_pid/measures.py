"""Shannon measures on discrete joints and log-det measures on Gaussian joints."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .exceptions import UsageError
from .joint import DiscreteJoint, GaussianJoint, _as_names, psd_pinv, psd_whitener
from .units import InfoUnit, as_unit, clamp_nonneg

#: Whitened correlations this close to 1 mean a deterministic linear relation.
SIGMA_ONE_TOL = 1e-12


def _role_set(names, what: str, allow_empty: bool = False) -> tuple[str, ...]:
    out = _as_names(names) if names is not None else ()
    if not out and not allow_empty:
        raise UsageError(f"{what} must name at least one variable")
    if len(set(out)) != len(out):
        raise UsageError(f"{what} repeats a variable: {out}")
    return out


def _disjoint(*sets: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for s in sets:
        overlap = seen.intersection(s)
        if overlap:
            raise UsageError(f"variable sets overlap on {sorted(overlap)}")
        seen.update(s)


# ---------------------------------------------------------------------------
# Discrete
# ---------------------------------------------------------------------------


def table_entropy(p: np.ndarray) -> float:
    """Entropy in nats of a probability table of any shape (0 log 0 = 0)."""
    p = np.asarray(p, dtype=float).ravel()
    p = np.sort(p[p > 0.0])
    return float(-np.sum(p * np.log(p)))


def _h(joint: DiscreteJoint, names: tuple[str, ...]) -> float:
    if not names:
        return 0.0
    return table_entropy(joint.marginal(names))


def entropy(joint: DiscreteJoint, vars, unit: InfoUnit | str = InfoUnit.BITS) -> float:
    """H of the marginal over ``vars`` (a name or a collection of names)."""
    names = _role_set(vars, "entropy variable set")
    joint.axes(names)
    return as_unit(unit).from_nats(_h(joint, names))


def mutual_information(joint: DiscreteJoint, a, b, unit: InfoUnit | str = InfoUnit.BITS) -> float:
    a = _role_set(a, "first argument")
    b = _role_set(b, "second argument")
    _disjoint(a, b)
    # sort the pair so I(A;B) and I(B;A) run the identical float computation
    a, b = sorted((a, b))
    val = _h(joint, a) + _h(joint, b) - _h(joint, a + b)
    return as_unit(unit).from_nats(clamp_nonneg(val, "mutual information"))


def conditional_mutual_information(
    joint: DiscreteJoint, a, b, c, unit: InfoUnit | str = InfoUnit.BITS
) -> float:
    a = _role_set(a, "first argument")
    b = _role_set(b, "second argument")
    c = _role_set(c, "conditioning set", allow_empty=True)
    _disjoint(a, b, c)
    a, b = sorted((a, b))
    val = _h(joint, a + c) + _h(joint, b + c) - _h(joint, a + b + c) - _h(joint, c)
    return as_unit(unit).from_nats(clamp_nonneg(val, "conditional mutual information"))


# ---------------------------------------------------------------------------
# Gaussian
# ---------------------------------------------------------------------------


def mi_from_blocks(saa: np.ndarray, sbb: np.ndarray, sab: np.ndarray, scale_a=None, scale_b=None):
    """Gaussian MI in nats from covariance blocks; returns ``(value, sigmas)``.

    Each side is whitened on its own image, so singular blocks are fine.  The
    value is ``-1/2 sum log(1 - s_i^2)`` over the canonical correlations
    ``s_i``; a correlation of 1 gives ``inf``.
    """
    wa, _ = psd_whitener(saa, scale_a)
    wb, _ = psd_whitener(sbb, scale_b)
    if wa.shape[0] == 0 or wb.shape[0] == 0:
        return 0.0, np.zeros(0)
    s = np.linalg.svd(wa @ sab @ wb.T, compute_uv=False)
    if s.size and s[0] >= 1.0 - SIGMA_ONE_TOL:
        return math.inf, s
    return float(-0.5 * np.sum(np.log1p(-(s**2)))) + 0.0, s


def gaussian_mi(g: GaussianJoint, a, b, unit: InfoUnit | str = InfoUnit.BITS) -> float:
    a = _role_set(a, "first argument")
    b = _role_set(b, "second argument")
    _disjoint(a, b)
    val, _ = mi_from_blocks(g.block(a, a), g.block(b, b), g.block(a, b))
    return as_unit(unit).from_nats(val)


def conditional_covariance(g: GaussianJoint, a, c) -> np.ndarray:
    """Schur complement ``S_aa - S_ac S_cc^+ S_ca``."""
    a, c = _as_names(a), _as_names(c)
    if not c:
        return g.block(a, a)
    return g.block(a, a) - g.block(a, c) @ psd_pinv(g.block(c, c)) @ g.block(c, a)


def gaussian_conditional_mi(g: GaussianJoint, a, b, c=(), unit: InfoUnit | str = InfoUnit.BITS) -> float:
    a = _role_set(a, "first argument")
    b = _role_set(b, "second argument")
    c = _role_set(c, "conditioning set", allow_empty=True)
    _disjoint(a, b, c)
    if not c:
        return gaussian_mi(g, a, b, unit)
    cond = conditional_covariance(g, a + b, c)
    na = len(g.index(a))
    saa, sbb, sab = cond[:na, :na], cond[na:, na:], cond[:na, na:]
    # judge the conditional blocks against their unconditional size
    scale_a = float(np.linalg.eigvalsh(g.block(a, a))[-1]) if na else 0.0
    scale_b = float(np.linalg.eigvalsh(g.block(b, b))[-1]) if sbb.size else 0.0
    val, _ = mi_from_blocks(saa, sbb, sab, scale_a, scale_b)
    return as_unit(unit).from_nats(clamp_nonneg(val, "conditional mutual information"))


class MarkovCheck(NamedTuple):
    holds: bool
    residual: float


def markov_check_gaussian(g: GaussianJoint, chain, tol: float = 1e-9) -> MarkovCheck:
    """Test ``A - W - B`` via ``S_AB = S_AW S_W^+ S_WB``.

    ``chain`` is a triple of names or name-collections.  The residual is the
    spectral norm of the difference; it is compared against ``tol`` times the
    larger of ``|S_AB|`` and ``|S_AW S_W^+ S_WB|`` so that a chain whose
    cross-covariance is exactly zero on both sides still passes.
    """
    if len(chain) != 3:
        raise UsageError("chain must name three variable sets")
    a, w, b = (_role_set(s, "chain element") for s in chain)
    _disjoint(a, w, b)
    direct = g.block(a, b)
    through = g.block(a, w) @ psd_pinv(g.block(w, w)) @ g.block(w, b)
    residual = _norm(direct - through)
    ref = max(_norm(direct), _norm(through))
    return MarkovCheck(bool(residual <= tol * ref), residual)


def _norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2)) if m.size else 0.0
