"""Discrete and Gaussian joint distributions over named variables.

Both types put the message variable first by convention, so a three-variable
joint reads ``(M, X, Y)``.  Role swaps (``M <-> X`` for the source-extractor
definition, ``X <-> Y`` for the second unique-information term) are done by
reordering variables, which carries the names along with the data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import UsageError, ValidationError

#: Singular values at or below this fraction of the largest are treated as zero.
RANK_RTOL = 1e-10

PROB_SUM_TOL = 1e-9
SYM_RTOL = 1e-12
PSD_RTOL = 1e-10

Names = Sequence[str]


def _as_names(names: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(names, str):
        return (names,)
    return tuple(names)


# ---------------------------------------------------------------------------
# Discrete
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiscreteJoint:
    """Dense probability tensor ``probs[i0][i1]...`` over named variables.

    ``alphabets[k]`` lists the symbols of axis ``k``; it defaults to
    ``0..n-1``.  The tensor is copied and frozen on construction.
    """

    probs: np.ndarray
    var_names: tuple[str, ...] = ("M", "X", "Y")
    alphabets: tuple[tuple, ...] | None = None

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=float)
        names = tuple(self.var_names)
        if p.ndim != len(names):
            raise ValidationError(
                f"probability tensor has {p.ndim} axes but {len(names)} variable names"
            )
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate variable names {names}")
        if p.size == 0 or any(n == 0 for n in p.shape):
            raise ValidationError("every alphabet must be non-empty")
        if not np.all(np.isfinite(p)):
            raise ValidationError("probabilities must be finite")
        if p.min() < 0.0:
            raise ValidationError(f"negative probability {p.min():.3e}")
        if p.max() > 1.0 + PROB_SUM_TOL:
            raise ValidationError(f"probability {p.max():.3e} exceeds 1")
        total = p.sum()
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        if self.alphabets is None:
            alphabets = tuple(tuple(range(n)) for n in p.shape)
        else:
            alphabets = tuple(tuple(a) for a in self.alphabets)
            if len(alphabets) != p.ndim:
                raise ValidationError("one alphabet is required per variable")
            for name, a, n in zip(names, alphabets, p.shape):
                if len(a) != n:
                    raise ValidationError(
                        f"alphabet of {name} has {len(a)} symbols but the tensor axis has {n}"
                    )
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "var_names", names)
        object.__setattr__(self, "alphabets", alphabets)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.probs.shape

    def axes(self, names: str | Iterable[str]) -> tuple[int, ...]:
        out = []
        for name in _as_names(names):
            try:
                out.append(self.var_names.index(name))
            except ValueError:
                raise UsageError(f"unknown variable {name!r}; have {self.var_names}") from None
        return tuple(out)

    def marginal(self, names: str | Iterable[str]) -> np.ndarray:
        """Marginal table over ``names``, axes in the order given."""
        axes = self.axes(names)
        drop = [i for i in range(self.probs.ndim) if i not in axes]
        moved = np.transpose(self.probs, list(axes) + drop)
        flat = moved.reshape(moved.shape[: len(axes)] + (-1,))
        # summing sorted terms makes the marginal independent of symbol order
        return np.sort(flat, axis=-1).sum(axis=-1)

    def reorder(self, names: Sequence[str]) -> "DiscreteJoint":
        """Same distribution with variables permuted into ``names`` order."""
        axes = self.axes(names)
        if sorted(axes) != list(range(self.probs.ndim)):
            raise UsageError(f"{names} is not a permutation of {self.var_names}")
        return DiscreteJoint(
            np.transpose(self.probs, axes),
            tuple(self.var_names[a] for a in axes),
            tuple(self.alphabets[a] for a in axes),
        )

    def swap(self, a: str, b: str) -> "DiscreteJoint":
        names = list(self.var_names)
        i, j = self.axes([a, b])
        names[i], names[j] = names[j], names[i]
        return self.reorder(names)

    def support_mask(self, axis: int) -> np.ndarray:
        other = tuple(i for i in range(self.probs.ndim) if i != axis)
        return self.probs.sum(axis=other) > 0.0

    def drop_null(self) -> "DiscreteJoint":
        """Remove symbols that carry zero probability mass."""
        p = self.probs
        alphabets = []
        for axis in range(p.ndim):
            keep = self.support_mask(axis)
            p = np.compress(keep, p, axis=axis)
            alphabets.append(tuple(s for s, k in zip(self.alphabets[axis], keep) if k))
        return DiscreteJoint(p, self.var_names, tuple(alphabets))

    def permute_alphabet(self, name: str, perm: Sequence[int]) -> "DiscreteJoint":
        (axis,) = self.axes(name)
        p = np.take(self.probs, list(perm), axis=axis)
        alphabets = list(self.alphabets)
        alphabets[axis] = tuple(self.alphabets[axis][i] for i in perm)
        return DiscreteJoint(p, self.var_names, tuple(alphabets))

    def product(self, other: "DiscreteJoint") -> "DiscreteJoint":
        """Joint of two independent copies; variable k pairs ``self_k`` with ``other_k``."""
        if len(self.var_names) != len(other.var_names):
            raise UsageError("product needs joints over the same number of variables")
        k = self.probs.ndim
        outer = np.multiply.outer(self.probs, other.probs)
        # interleave axes (a0, b0, a1, b1, ...) then merge pairs
        order = [ax for i in range(k) for ax in (i, k + i)]
        outer = np.transpose(outer, order)
        shape = tuple(self.shape[i] * other.shape[i] for i in range(k))
        alphabets = tuple(
            tuple((a, b) for a in self.alphabets[i] for b in other.alphabets[i]) for i in range(k)
        )
        return DiscreteJoint(outer.reshape(shape), self.var_names, alphabets)

    def to_dict(self) -> dict:
        return {
            "variables": {
                n: [_jsonable(s) for s in a] for n, a in zip(self.var_names, self.alphabets)
            },
            "p": self.probs.tolist(),
        }


def _jsonable(symbol):
    if isinstance(symbol, tuple):
        return [_jsonable(s) for s in symbol]
    if isinstance(symbol, np.generic):
        return symbol.item()
    return symbol


# ---------------------------------------------------------------------------
# Gaussian
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaussianJoint:
    """Zero-mean Gaussian described by a block-partitioned covariance.

    ``dims[k]`` is the dimension of variable ``names[k]``; blocks are stacked
    in that order.  Zero-dimensional blocks are allowed (a degenerate extractor
    is represented that way).
    """

    cov: np.ndarray
    dims: tuple[int, ...]
    names: tuple[str, ...] = ("M", "X", "Y")

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        names = tuple(self.names)
        if len(dims) != len(names):
            raise ValidationError(f"{len(dims)} block dims for {len(names)} names")
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate variable names {names}")
        if any(d < 0 for d in dims):
            raise ValidationError(f"negative block dimension in {dims}")
        n = sum(dims)
        cov = np.array(self.cov, dtype=float).reshape(n, n) if n else np.zeros((0, 0))
        if not np.all(np.isfinite(cov)):
            raise ValidationError("covariance must be finite")
        check_covariance(cov, SYM_RTOL, PSD_RTOL)
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "names", names)

    @property
    def size(self) -> int:
        return int(sum(self.dims))

    def dim(self, name: str) -> int:
        return self.dims[self._pos(name)]

    def _pos(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"unknown variable {name!r}; have {self.names}") from None

    def index(self, names: str | Iterable[str]) -> np.ndarray:
        """Row/column indices of the stacked blocks for ``names``."""
        starts = np.concatenate([[0], np.cumsum(self.dims)])
        idx = []
        for name in _as_names(names):
            k = self._pos(name)
            idx.extend(range(starts[k], starts[k + 1]))
        return np.asarray(idx, dtype=int)

    def block(self, a: str | Iterable[str], b: str | Iterable[str]) -> np.ndarray:
        return self.cov[np.ix_(self.index(a), self.index(b))]

    def reorder(self, names: Sequence[str]) -> "GaussianJoint":
        names = tuple(names)
        if sorted(names) != sorted(self.names):
            raise UsageError(f"{names} is not a permutation of {self.names}")
        idx = self.index(names)
        return GaussianJoint(self.cov[np.ix_(idx, idx)], tuple(self.dim(n) for n in names), names)

    def swap(self, a: str, b: str) -> "GaussianJoint":
        names = list(self.names)
        i, j = self._pos(a), self._pos(b)
        names[i], names[j] = names[j], names[i]
        return self.reorder(names)

    def transform(self, mats: dict[str, np.ndarray]) -> "GaussianJoint":
        """Apply ``v -> A v`` blockwise; ``mats`` maps names to square matrices."""
        t = np.zeros((self.size, self.size))
        for name in self.names:
            idx = self.index(name)
            a = np.asarray(mats.get(name, np.eye(len(idx))), dtype=float)
            if a.shape != (len(idx), len(idx)):
                raise UsageError(f"transform for {name} must be {len(idx)}x{len(idx)}")
            t[np.ix_(idx, idx)] = a
        return GaussianJoint(t @ self.cov @ t.T, self.dims, self.names)

    @property
    def rank_deficient(self) -> bool:
        if self.size == 0:
            return False
        s = np.linalg.eigvalsh(self.cov)
        return bool(s[0] <= RANK_RTOL * max(s[-1], 0.0))

    def to_dict(self) -> dict:
        return {
            "dims": dict(zip(self.names, self.dims)),
            "cov": self.cov.reshape(-1).tolist(),
        }


def check_covariance(cov: np.ndarray, sym_rtol: float, psd_rtol: float) -> None:
    if cov.size == 0:
        return
    scale = float(np.max(np.abs(cov)))
    if np.max(np.abs(cov - cov.T)) > sym_rtol * max(scale, np.finfo(float).tiny):
        raise ValidationError("covariance not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (cov + cov.T))
    if eig[0] < -psd_rtol * max(eig[-1], 0.0) or (eig[-1] <= 0.0 and eig[0] < 0.0):
        raise ValidationError(
            f"covariance not positive semidefinite (min eigenvalue {eig[0]:.3e})"
        )


# ---------------------------------------------------------------------------
# Whitening
# ---------------------------------------------------------------------------


def psd_whitener(s: np.ndarray, scale: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(W, W_inv)`` with ``W s W.T = I_r`` on the retained image of ``s``.

    ``W`` is ``r x d`` and ``W_inv`` is ``d x r``.  Eigenvalues at or below
    ``RANK_RTOL * max(lambda_max, scale)`` are dropped; passing ``scale`` lets
    a nearly-zero conditional covariance be judged against its unconditional
    size instead of against itself.
    """
    d = s.shape[0]
    if d == 0:
        return np.zeros((0, 0)), np.zeros((0, 0))
    lam, u = np.linalg.eigh(0.5 * (s + s.T))
    ref = max(float(lam[-1]), scale or 0.0)
    keep = lam > RANK_RTOL * ref if ref > 0.0 else np.zeros(d, dtype=bool)
    lam, u = lam[keep], u[:, keep]
    w = (u / np.sqrt(lam)).T
    w_inv = u * np.sqrt(lam)
    return w, w_inv


def psd_pinv(s: np.ndarray) -> np.ndarray:
    """Pseudo-inverse of a PSD matrix at the package rank tolerance."""
    w, _ = psd_whitener(s)
    return w.T @ w


@dataclass(frozen=True, eq=False)
class WhitenTransform:
    """Per-variable whitening maps recorded by :func:`whiten`.

    ``forward[name]`` is ``r x d`` and ``inverse[name]`` is ``d x r`` where
    ``r = ranks[name]`` is the retained rank of that variable's covariance.
    """

    names: tuple[str, ...]
    forward: dict[str, np.ndarray] = field(repr=False)
    inverse: dict[str, np.ndarray] = field(repr=False)
    ranks: dict[str, int]

    def reconstruct(self, white: GaussianJoint) -> np.ndarray:
        """Map a whitened covariance back to original coordinates (on the image)."""
        inv = _block_diag([self.inverse[n] for n in self.names])
        return inv @ white.cov @ inv.T

    def apply(self, g: GaussianJoint) -> np.ndarray:
        fwd = _block_diag([self.forward[n] for n in self.names])
        return fwd @ g.cov @ fwd.T


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols))
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def whiten(g: GaussianJoint) -> tuple[GaussianJoint, WhitenTransform]:
    """Whiten every variable separately.

    Rank-deficient blocks are projected onto their image, so the whitened
    joint can have smaller block dimensions than ``g``.  Cross blocks are
    computed pairwise, which keeps results identical under block reordering.
    """
    fwd, inv, ranks = {}, {}, {}
    for name in g.names:
        w, w_inv = psd_whitener(g.block(name, name))
        fwd[name], inv[name], ranks[name] = w, w_inv, w.shape[0]

    dims = tuple(ranks[n] for n in g.names)
    starts = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    out = np.zeros((sum(dims), sum(dims)))
    for i, a in enumerate(g.names):
        ia = slice(starts[i], starts[i + 1])
        out[ia, ia] = np.eye(dims[i])
        for j in range(i + 1, len(g.names)):
            b = g.names[j]
            ib = slice(starts[j], starts[j + 1])
            c = fwd[a] @ g.block(a, b) @ fwd[b].T
            out[ia, ib] = c
            out[ib, ia] = c.T
    return GaussianJoint(out, dims, g.names), WhitenTransform(g.names, fwd, inv, ranks)
