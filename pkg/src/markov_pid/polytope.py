"""Extractor channels, the polytope of Y-independent channels, and its vertices.

A channel ``q[t, s] = p(t | s)`` from a source variable ``S`` to ``T`` makes
``T`` independent of ``Y`` exactly when

    sum_s q[t, s] (p(s, y) - p(s) p(y)) = 0   for every t, y,

which is linear in ``q``.  Together with column-stochasticity and ``q >= 0``
this cuts out a polytope.  Mutual information is convex in the channel for a
fixed input law, so its maximum over the polytope sits at a vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from .exceptions import EnumerationCapError, UsageError
from .joint import DiscreteJoint
from .pid import Definition, as_definition

FEAS_TOL = 1e-9
DEDUP_DECIMALS = 9
DEFAULT_MAX_VARS = 24
DEFAULT_VERTEX_LIMIT = 1_000_000
_CHUNK = 65536
_LOG_SINGULAR = np.log(1e-10)


@dataclass(frozen=True, eq=False)
class Channel:
    """Column-stochastic ``t x s`` matrix ``probs[t, s] = p(t | s)``."""

    probs: np.ndarray
    source_alphabet: tuple = ()

    def __post_init__(self) -> None:
        q = np.array(self.probs, dtype=float)
        if q.ndim != 2 or q.shape[0] == 0 or q.shape[1] == 0:
            raise UsageError(f"channel must be a non-empty matrix, got shape {q.shape}")
        if q.min() < 0.0 or q.max() > 1.0:
            raise UsageError("channel entries must lie in [0, 1]")
        if np.max(np.abs(q.sum(axis=0) - 1.0)) > 1e-12:
            raise UsageError("channel columns must sum to 1")
        q.setflags(write=False)
        object.__setattr__(self, "probs", q)
        if not self.source_alphabet:
            object.__setattr__(self, "source_alphabet", tuple(range(q.shape[1])))

    @property
    def t_size(self) -> int:
        return self.probs.shape[0]

    @property
    def source_alphabet_size(self) -> int:
        return self.probs.shape[1]


def _clean_stochastic(q: np.ndarray) -> np.ndarray:
    q = np.clip(q, 0.0, 1.0)
    return np.minimum(q / q.sum(axis=0, keepdims=True), 1.0)


def source_view(joint: DiscreteJoint, definition: Definition) -> DiscreteJoint:
    """Reorder a ``(M, X, Y)`` joint into ``(source, target, protected)``."""
    if len(joint.var_names) != 3:
        raise UsageError(f"expected a joint over (M, X, Y), got {joint.var_names}")
    m, x, y = joint.var_names
    return joint if definition is Definition.TMXY else joint.reorder((x, m, y))


@dataclass(frozen=True, eq=False)
class ChannelPolytope:
    """``{q >= 0 : a_eq q = b_eq}`` over row-major flattened ``t x s`` channels.

    ``view`` is the (source, target, protected) joint with zero-mass symbols
    removed; ``source_support`` marks which symbols of the original source
    alphabet survived.
    """

    a_eq: np.ndarray = field(repr=False)
    b_eq: np.ndarray = field(repr=False)
    t_card: int
    source_size: int
    n_stochastic: int
    n_independence: int
    definition: Definition
    view: DiscreteJoint = field(repr=False)
    source_support: np.ndarray = field(repr=False)
    source_alphabet: tuple = field(repr=False, default=())

    @property
    def n_vars(self) -> int:
        return self.t_card * self.source_size

    def reshape(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float).reshape(self.t_card, self.source_size)

    def independence_residual(self, q: np.ndarray) -> float:
        """Max-abs deviation of ``p(t, y)`` from ``p(t) p(y)``."""
        q = np.asarray(q, dtype=float)
        if q.shape[1] != self.source_size:
            q = q[:, self.source_support]
        src, _, prot = self.view.var_names
        p_sy = self.view.marginal((src, prot))
        p_ty = q @ p_sy
        return float(np.max(np.abs(p_ty - np.outer(p_ty.sum(1), p_sy.sum(0)))))

    def stochasticity_residual(self, q: np.ndarray) -> float:
        return float(np.max(np.abs(np.asarray(q).sum(axis=0) - 1.0)))

    def contains(self, q: np.ndarray, tol: float = FEAS_TOL) -> bool:
        q = np.asarray(q, dtype=float)
        return bool(
            q.min() >= -tol
            and self.stochasticity_residual(q) <= tol
            and self.independence_residual(q) <= tol
        )

    def is_vertex(self, q: np.ndarray, tol: float = FEAS_TOL) -> bool:
        """Basic-feasible test: the columns on the support are independent."""
        x = np.asarray(q, dtype=float).reshape(-1)
        if x.size != self.n_vars:
            x = self._restrict(np.asarray(q)).reshape(-1)
        support = np.flatnonzero(x > tol)
        cols = self.a_eq[:, support]
        return bool(np.linalg.matrix_rank(cols, tol=1e-9) == support.size)

    def _restrict(self, q: np.ndarray) -> np.ndarray:
        return np.asarray(q)[:, self.source_support]

    def to_channel(self, x: np.ndarray) -> Channel:
        """Lift a solution on the reduced alphabet to the full source alphabet.

        Zero-mass source symbols get a deterministic column onto the first
        ``T`` symbol; they do not affect any quantity.
        """
        q = _clean_stochastic(self.reshape(x))
        full = np.zeros((self.t_card, self.source_support.size))
        full[0, :] = 1.0
        full[:, self.source_support] = q
        return Channel(full, self.source_alphabet)

    def reduced_system(self) -> tuple[np.ndarray, np.ndarray]:
        """Linearly independent subset of the equality rows."""
        a, b = self.a_eq, self.b_eq
        if a.shape[0] == 0:
            return a, b
        _, r, piv = scipy.linalg.qr(a.T, mode="economic", pivoting=True)
        d = np.abs(np.diag(r))
        rank = int(np.sum(d > 1e-10 * d[0])) if d.size and d[0] > 0 else 0
        rows = np.sort(piv[:rank])
        return a[rows], b[rows]


def build_polytope(
    joint: DiscreteJoint, definition: Definition | str = Definition.TMXY, t_card: int = 2
) -> ChannelPolytope:
    """Linear description of the channels that keep ``T`` independent of ``Y``.

    Rows: one stochasticity equation per source symbol, then
    ``t_card * (|Y| - 1)`` independence equations (the last ``y`` is implied).
    Zero-mass symbols are removed first.
    """
    definition = as_definition(definition)
    if int(t_card) < 1:
        raise UsageError(f"t_card must be at least 1, got {t_card}")
    t_card = int(t_card)
    full_view = source_view(joint, definition)
    support = full_view.support_mask(0)
    view = full_view.drop_null()
    src, _, prot = view.var_names
    p_sy = view.marginal((src, prot))
    n_s, n_y = p_sy.shape
    coef = p_sy - np.outer(p_sy.sum(1), p_sy.sum(0))

    rows, rhs = [], []
    for s in range(n_s):
        r = np.zeros((t_card, n_s))
        r[:, s] = 1.0
        rows.append(r.reshape(-1))
        rhs.append(1.0)
    for t in range(t_card):
        for y in range(n_y - 1):
            r = np.zeros((t_card, n_s))
            r[t, :] = coef[:, y]
            rows.append(r.reshape(-1))
            rhs.append(0.0)
    a = np.array(rows).reshape(len(rows), t_card * n_s)
    return ChannelPolytope(
        a_eq=a,
        b_eq=np.array(rhs),
        t_card=t_card,
        source_size=n_s,
        n_stochastic=n_s,
        n_independence=t_card * (n_y - 1),
        definition=definition,
        view=view,
        source_support=support,
        source_alphabet=full_view.alphabets[0],
    )


class VertexSet(NamedTuple):
    channels: list[Channel]
    exhaustive: bool
    bases_examined: int


def enumerate_vertices(
    p: ChannelPolytope,
    limit: int = DEFAULT_VERTEX_LIMIT,
    max_vars: int = DEFAULT_MAX_VARS,
) -> VertexSet:
    """All basic feasible solutions, by brute force over column bases.

    Every size-``rank`` column subset is tried; nonsingular ones with a
    non-negative solution are vertices.  Duplicates (degenerate bases) are
    merged at 1e-9 and the result is sorted lexicographically in row-major
    channel order.  ``exhaustive`` is False if the ``limit`` cut the list.
    """
    if p.n_vars > max_vars:
        raise EnumerationCapError(
            f"polytope has {p.n_vars} variables, above the exhaustive cap of {max_vars}; "
            "use mode='sample' (or raise max_vars)"
        )
    a, b = p.reduced_system()
    # equilibrate rows: independence rows can be orders of magnitude smaller
    # than the stochasticity rows, which would swamp the singularity test
    norms = np.linalg.norm(a, axis=1)
    a, b = a / norms[:, None], b / norms
    n, r = p.n_vars, a.shape[0]
    found: list[np.ndarray] = []
    examined = 0
    combos = itertools.combinations(range(n), r)
    while True:
        chunk = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, _CHUNK)), dtype=np.intp
        )
        if chunk.size == 0:
            break
        idx = chunk.reshape(-1, r)
        examined += idx.shape[0]
        mats = np.transpose(a[:, idx], (1, 0, 2))
        # |det| over the product of column norms: scale-free, 0 when singular
        sign, logdet = np.linalg.slogdet(mats)
        col_norms = np.linalg.norm(mats, axis=1)
        with np.errstate(divide="ignore"):
            hadamard = logdet - np.log(col_norms).sum(axis=1)
        ok = (sign != 0) & (hadamard > _LOG_SINGULAR)
        if not np.any(ok):
            continue
        idx, mats = idx[ok], mats[ok]
        xb = np.linalg.solve(mats, np.broadcast_to(b, (idx.shape[0], r))[..., None])[..., 0]
        feas = np.all(xb >= -FEAS_TOL, axis=1)
        for cols, vals in zip(idx[feas], xb[feas]):
            x = np.zeros(n)
            x[cols] = np.maximum(vals, 0.0)
            found.append(x)
    if not found:
        raise RuntimeError("no vertex found; the polytope should always be non-empty")
    xs = np.array(found)
    xs = xs[np.max(np.abs(p.a_eq @ xs.T - p.b_eq[:, None]), axis=0) <= FEAS_TOL]
    keys = np.round(xs, DEDUP_DECIMALS) + 0.0
    _, first = np.unique(keys, axis=0, return_index=True)
    xs = xs[first]  # np.unique sorts, so this is lexicographic order
    exhaustive = len(xs) < limit
    xs = xs[:limit]
    return VertexSet([p.to_channel(x) for x in xs], exhaustive, examined)


def sample_vertices(p: ChannelPolytope, n: int, seed: int = 0) -> list[Channel]:
    """Vertices found by ``n`` LPs with random objectives (HiGHS dual simplex)."""
    if n < 1:
        raise UsageError("need at least one sample")
    a, b = p.reduced_system()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        c = rng.standard_normal(p.n_vars)
        res = linprog(c, A_eq=a, b_eq=b, bounds=(0, None), method="highs-ds")
        if res.status != 0:
            raise RuntimeError(f"LP solver failed on a feasible polytope: {res.message}")
        out.append(p.to_channel(res.x))
    return out


def basis_count(p: ChannelPolytope) -> int:
    """Number of column subsets exhaustive enumeration would try."""
    a, _ = p.reduced_system()
    return comb(p.n_vars, a.shape[0])
