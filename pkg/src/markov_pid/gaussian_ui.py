"""Unique information for jointly Gaussian (M, X, Y), restricted to Gaussian extractors.

For the message-side definition the extractor ``T`` is a noisy linear
function of ``M`` that must be independent of ``Y``.  After whitening, the
feasible cross-covariances ``S_MT`` are exactly the matrices whose columns lie
in the null space of ``S_YM``, and the best choice is an orthonormal basis
``V`` of that null space.  The value is then

    UI = -1/2 log det(I - V' S_MX S_XM V)

which is evaluated from the singular values of ``V' S_MX``.  The
source-side definition is the same computation with ``M`` and ``X``
exchanged.

Values from this module are the optimum over jointly Gaussian extractors.
Whether a non-Gaussian extractor can do better is not settled, and every
result carries that label in its diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import DomainError, IllConditionedError, UsageError
from .joint import RANK_RTOL, GaussianJoint, WhitenTransform, whiten
from .measures import SIGMA_ONE_TOL, gaussian_conditional_mi, gaussian_mi
from .pid import Definition, PIDTerms, as_definition
from .units import InfoUnit, as_unit

GAUSSIAN_RESTRICTION = "optimum over jointly Gaussian extractors"


def _roles(g: GaussianJoint) -> tuple[str, str, str]:
    if len(g.names) != 3:
        raise UsageError(f"expected a joint over (M, X, Y), got variables {g.names}")
    return g.names  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Orthonormal basis (as columns) of a matrix null space."""

    basis: np.ndarray
    source_shape: tuple[int, int]
    rel_tol: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def kernel_basis(m: np.ndarray, rel_tol: float = RANK_RTOL) -> KernelBasis:
    """Null space of ``m`` via SVD.

    Singular values at or below ``rel_tol`` times the largest count as zero.
    A matrix with no nonzero singular value returns the identity basis.
    Column signs are fixed so that the first entry above 1e-12 in magnitude is
    positive.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    k, n = m.shape
    if not np.all(np.isfinite(m)):
        raise UsageError("kernel_basis needs a finite matrix")
    if m.size == 0:
        return KernelBasis(np.eye(n), (k, n), rel_tol)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > rel_tol * s[0])) if s.size and s[0] > 0.0 else 0
    if rank == 0:
        return KernelBasis(np.eye(n), (k, n), rel_tol)
    basis = vt[rank:].T.copy()
    for j in range(basis.shape[1]):
        col = basis[:, j]
        lead = np.flatnonzero(np.abs(col) > 1e-12)
        if lead.size and col[lead[0]] < 0.0:
            basis[:, j] = -col
    return KernelBasis(basis, (k, n), rel_tol)


@dataclass(frozen=True, eq=False)
class GaussianUIResult:
    value: float
    unit: InfoUnit
    definition: Definition
    #: ``S_MT`` (or ``S_XT``) in whitened coordinates; equals the kernel basis.
    extractor_cross_cov: np.ndarray
    whiten_record: WhitenTransform = field(repr=False)
    kernel_dim: int
    singular_values: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "unit": self.unit.value,
            "definition": self.definition.value,
            "kernel_dim": self.kernel_dim,
            "extractor_cross_cov": self.extractor_cross_cov.reshape(-1).tolist(),
            "extractor_cross_cov_shape": list(self.extractor_cross_cov.shape),
            "diagnostics": {
                "restriction": GAUSSIAN_RESTRICTION,
                "singular_values": self.singular_values.tolist(),
                "retained_ranks": dict(self.whiten_record.ranks),
            },
        }


def _closed_form(g: GaussianJoint):
    """Message-side closed form on ``g`` read as (source, target, protected)."""
    src, tgt, prot = _roles(g)
    wg, rec = whiten(g)
    kb = kernel_basis(wg.block(prot, src))
    if kb.dim == 0:
        return 0.0, kb, rec, np.zeros(0), wg
    s = np.linalg.svd(kb.basis.T @ wg.block(src, tgt), compute_uv=False)
    if s.size and s[0] >= 1.0 - SIGMA_ONE_TOL:
        raise IllConditionedError(
            f"whitened correlation {s[0]!r} is 1 to within {SIGMA_ONE_TOL}; the unique information is unbounded"
        )
    return float(-0.5 * np.sum(np.log1p(-(s**2)))) + 0.0, kb, rec, s, wg


def _source_view(g: GaussianJoint, definition: Definition) -> GaussianJoint:
    """Reorder so the extractor's parent variable comes first."""
    m, x, y = _roles(g)
    return g if definition is Definition.TMXY else g.reorder((x, m, y))


def ui_gaussian(
    g: GaussianJoint,
    definition: Definition | str = Definition.TMXY,
    unit: InfoUnit | str = InfoUnit.BITS,
) -> GaussianUIResult:
    """Unique information of X about M not present in Y, over Gaussian extractors."""
    definition, unit = as_definition(definition), as_unit(unit)
    nats, kb, rec, s, _ = _closed_form(_source_view(g, definition))
    return GaussianUIResult(
        value=unit.from_nats(nats),
        unit=unit,
        definition=definition,
        extractor_cross_cov=kb.basis,
        whiten_record=rec,
        kernel_dim=kb.dim,
        singular_values=s,
    )


@dataclass(frozen=True, eq=False)
class GaussianExtractor:
    """Whitened joint of ``(T, M, X, Y)`` realizing the closed-form optimum."""

    joint: GaussianJoint
    definition: Definition
    degenerate: bool
    value: float
    unit: InfoUnit


def optimal_extractor(
    g: GaussianJoint,
    definition: Definition | str = Definition.TMXY,
    unit: InfoUnit | str = InfoUnit.BITS,
    t_name: str = "T",
) -> GaussianExtractor:
    """Build ``T`` with ``S_T = I`` and ``S_T,parent = V'``.

    The remaining cross blocks follow from the Markov chain through the
    parent variable, ``S_T,rest = V' S_parent,rest``.  When the kernel is
    trivial ``T`` has dimension 0 and ``degenerate`` is set.
    """
    definition, unit = as_definition(definition), as_unit(unit)
    m, x, y = _roles(g)
    if t_name in g.names:
        raise UsageError(f"extractor name {t_name!r} collides with {g.names}")
    view = _source_view(g, definition)
    nats, kb, _, _, wg = _closed_form(view)
    src, tgt, prot = view.names
    v = kb.basis
    p = v.shape[1]
    rest = (tgt, prot)
    t_src = v.T
    t_rest = v.T @ wg.block(src, rest)

    names = (t_name, src, tgt, prot)
    dims = (p,) + tuple(wg.dim(n) for n in (src, tgt, prot))
    n = sum(dims)
    cov = np.zeros((n, n))
    cov[:p, :p] = np.eye(p)
    cov[:p, p:] = np.hstack([t_src, t_rest])
    cov[p:, :p] = cov[:p, p:].T
    cov[p:, p:] = wg.cov
    joint = GaussianJoint(cov, dims, names).reorder((t_name, m, x, y))
    return GaussianExtractor(joint, definition, p == 0, unit.from_nats(nats), unit)


@dataclass(frozen=True)
class NumericVerification:
    value: float
    closed_form: float
    unit: InfoUnit
    restarts: int
    best_restart: int
    iterations: int

    @property
    def gap(self) -> float:
        """``closed_form - value``; non-negative up to optimizer slack."""
        return self.closed_form - self.value

    def within(self, below: float = 1e-6, above: float = 1e-9) -> bool:
        """True when ``closed_form - below <= value <= closed_form + above`` (nats)."""
        g = self.unit.to_nats(self.gap)
        return -above <= g <= below


def _objective(s: np.ndarray, a: np.ndarray) -> float:
    t = s.shape[1]
    sign, logdet = np.linalg.slogdet(np.eye(t) - s.T @ a @ s)
    return -0.5 * logdet if sign > 0 else -np.inf


def _project(s: np.ndarray, proj: np.ndarray) -> np.ndarray:
    s = proj @ s
    u, sv, vt = np.linalg.svd(s, full_matrices=False)
    return (u * np.clip(sv, 0.0, 1.0)) @ vt


def _ascend(a, proj, s, step0, tol, max_iter):
    f = _objective(s, a)
    step = step0
    it = 0
    for it in range(1, max_iter + 1):
        t = s.shape[1]
        k = np.linalg.inv(np.eye(t) - s.T @ a @ s)
        grad = proj @ (a @ s @ k)
        while True:
            cand = _project(s + step * grad, proj)
            fc = _objective(cand, a)
            if fc > f or step < 1e-14:
                break
            step *= 0.5
        if not fc > f:
            break
        improvement = fc - f
        s, f = cand, fc
        if improvement <= tol * max(abs(f), 1e-300):
            break
        step = min(step * 2.0, 1e6)
    return f, it


def numeric_ui_verify(
    g: GaussianJoint,
    definition: Definition | str = Definition.TMXY,
    restarts: int = 32,
    seed: int = 0,
    unit: InfoUnit | str = InfoUnit.BITS,
    step: float = 0.1,
    tol: float = 1e-10,
    max_iter: int = 5000,
) -> NumericVerification:
    """Maximize ``I(T; X)`` directly over feasible cross-covariances ``S_MT``.

    Works on the whitened joint with ``S_MT`` of full size ``d_M x d_M``.
    Feasibility (``S_YM S_MT = 0`` and ``S_TM S_MT <= I``) is enforced by
    projecting onto the null space of ``S_YM`` (from :func:`scipy.linalg.null_space`)
    and clipping singular values to ``[0, 1]``.  Each restart starts from a
    random feasible point and runs projected gradient ascent with a
    backtracking step that halves on failure and doubles on success.
    """
    definition, unit = as_definition(definition), as_unit(unit)
    view = _source_view(g, definition)
    closed, *_ = _closed_form(view)
    src, tgt, prot = view.names
    wg, _ = whiten(view)
    d = wg.dim(src)
    c = wg.block(src, tgt)
    a = c @ c.T
    cyx = wg.block(prot, src)
    if d == 0:
        return NumericVerification(0.0, unit.from_nats(closed), unit, restarts, 0, 0)
    null = scipy.linalg.null_space(cyx, rcond=RANK_RTOL) if cyx.size else np.eye(d)
    if null.shape[1] == 0:
        return NumericVerification(0.0, unit.from_nats(closed), unit, restarts, 0, 0)
    proj = null @ null.T

    best, best_k, iters = -np.inf, 0, 0
    for k in range(restarts):
        rng = np.random.default_rng([seed, k])
        s0 = proj @ rng.standard_normal((d, d))
        top = np.linalg.norm(s0, 2)
        if top > 0.0:
            s0 = s0 * (rng.uniform(0.05, 0.95) / top)
        f, it = _ascend(a, proj, s0, step, tol, max_iter)
        iters += it
        if f > best:
            best, best_k = f, k
    return NumericVerification(
        unit.from_nats(float(best)), unit.from_nats(closed), unit, restarts, best_k, iters
    )


def counterexample_family(
    definition: Definition | str = Definition.TMXY, params: tuple[float, float] = (0.6, 0.3)
) -> GaussianJoint:
    """Scalar Gaussians whose unique information vanishes while R_X != R_Y.

    ``TMXY``, params ``(rho_x, rho_y)``: X and Y independent, each correlated
    with M.  ``MYXT``, params ``(rho, eps)``: X correlated with Y (``rho``)
    and with M (``eps``), M independent of Y.  Returned in (M, X, Y) order.
    """
    definition = as_definition(definition)
    p, q = (float(v) for v in params)
    if not (p * p + q * q < 1.0):
        raise DomainError(f"need p^2 + q^2 < 1 for a valid covariance, got ({p}, {q})")
    if definition is Definition.TMXY:
        rho_x, rho_y = p, q
        cov = [[1.0, rho_x, rho_y], [rho_x, 1.0, 0.0], [rho_y, 0.0, 1.0]]
    else:
        rho, eps = p, q
        cov = [[1.0, eps, 0.0], [eps, 1.0, rho], [0.0, rho, 1.0]]
    return GaussianJoint(np.array(cov), (1, 1, 1))


def pid_terms_gaussian(
    g: GaussianJoint,
    definition: Definition | str = Definition.TMXY,
    unit: InfoUnit | str = InfoUnit.BITS,
) -> PIDTerms:
    definition, unit = as_definition(definition), as_unit(unit)
    m, x, y = _roles(g)
    ui_x = ui_gaussian(g, definition, unit).value
    ui_y = ui_gaussian(g.reorder((m, y, x)), definition, unit).value
    return PIDTerms.from_parts(
        i_mx=gaussian_mi(g, m, x, unit),
        i_my=gaussian_mi(g, m, y, unit),
        i_mx_given_y=gaussian_conditional_mi(g, m, x, y, unit),
        i_my_given_x=gaussian_conditional_mi(g, m, y, x, unit),
        ui_x=ui_x,
        ui_y=ui_y,
        unit=unit,
    )
