"""Random instances for the verification suites and tests.

Every generator takes a ``numpy.random.Generator``; the suites seed one per
trial from ``(seed, trial)`` so any instance can be rebuilt from those two
numbers.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .joint import DiscreteJoint, GaussianJoint

NAMES = ("M", "X", "Y")


def _unit_diagonal(cov: np.ndarray) -> np.ndarray:
    d = 1.0 / np.sqrt(np.diag(cov))
    out = cov * d[:, None] * d[None, :]
    np.fill_diagonal(out, 1.0)
    return 0.5 * (out + out.T)


def wishart_gaussian(rng: np.random.Generator, dims) -> GaussianJoint:
    """``G G' + 1e-6 I`` for square standard-normal ``G``, rescaled to unit diagonal."""
    n = int(sum(dims))
    g = rng.standard_normal((n, n))
    return GaussianJoint(_unit_diagonal(g @ g.T + 1e-6 * np.eye(n)), tuple(dims), NAMES)


def lowrank_gaussian(rng: np.random.Generator, dims) -> GaussianJoint:
    """Singular covariance: one coordinate of the largest block is a copy of another.

    The factor is ``n x (n - 1)``, so the joint has rank ``n - 1``; the
    duplicated pair lies inside a single variable, which keeps every pairwise
    information finite while exercising the rank-reducing whitening path.
    """
    dims = tuple(int(d) for d in dims)
    n = sum(dims)
    k = int(np.argmax(dims))
    if dims[k] < 2:
        return wishart_gaussian(rng, dims)
    start = sum(dims[:k])
    embed = np.zeros((n, n - 1))
    embed[: start + dims[k] - 1, : start + dims[k] - 1] = np.eye(start + dims[k] - 1)
    embed[start + dims[k] - 1, start] = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    rest = n - start - dims[k]
    if rest:
        embed[start + dims[k] :, start + dims[k] - 1 :] = np.eye(rest)
    g = rng.standard_normal((n - 1, n - 1))
    base = g @ g.T + 0.1 * np.eye(n - 1)
    cov = embed @ base @ embed.T
    return GaussianJoint(_unit_diagonal(cov), dims, NAMES)


def structured_gaussian(rng: np.random.Generator, dims, parent: str = "M") -> GaussianJoint:
    """Latent-variable model with a rank-deficient parent-to-Y cross-covariance.

    ``parent`` (``"M"`` or ``"X"``) is standard normal; ``Y = C parent + H z +
    noise`` and ``other = D parent + K z + noise`` with a shared latent ``z``.
    ``C`` has rank below ``d_parent`` when possible, so the null space that the
    closed form works on is usually non-trivial.
    """
    dm, dx, dy = (int(d) for d in dims)
    other = "X" if parent == "M" else "M"
    dp, do = (dm, dx) if parent == "M" else (dx, dm)
    rank_c = int(rng.integers(0, max(dp, 1))) if dp > 0 else 0
    rank_c = min(rank_c, dy)
    c = rng.standard_normal((dy, rank_c)) @ rng.standard_normal((rank_c, dp))
    d = rng.standard_normal((do, dp))
    k = int(rng.integers(1, 3))
    h = rng.standard_normal((dy, k))
    kk = rng.standard_normal((do, k))
    nu_y, nu_o = rng.uniform(0.2, 1.0, size=2)

    blocks = {
        (parent, parent): np.eye(dp),
        ("Y", parent): c,
        (other, parent): d,
        ("Y", "Y"): c @ c.T + h @ h.T + nu_y * np.eye(dy),
        (other, other): d @ d.T + kk @ kk.T + nu_o * np.eye(do),
        (other, "Y"): d @ c.T + kk @ h.T,
    }
    sizes = {"M": dm, "X": dx, "Y": dy}
    starts = {"M": 0, "X": dm, "Y": dm + dx}
    n = dm + dx + dy
    cov = np.zeros((n, n))
    for (a, b), blk in blocks.items():
        ia = slice(starts[a], starts[a] + sizes[a])
        ib = slice(starts[b], starts[b] + sizes[b])
        cov[ia, ib] = blk
        cov[ib, ia] = blk.T
    return GaussianJoint(_unit_diagonal(cov), (dm, dx, dy), NAMES)


def gaussian_product(g1: GaussianJoint, g2: GaussianJoint) -> GaussianJoint:
    """Independent pair stacked variable-by-variable: ``M = (M1, M2)`` and so on."""
    blocks1 = [g1.index(n) for n in g1.names]
    blocks2 = [g2.index(n) for n in g2.names]
    dims = tuple(a + b for a, b in zip(g1.dims, g2.dims))
    n = sum(dims)
    cov = np.zeros((n, n))
    order1, order2 = [], []
    pos = 0
    for b1, b2 in zip(blocks1, blocks2):
        order1.extend(range(pos, pos + len(b1)))
        pos += len(b1)
        order2.extend(range(pos, pos + len(b2)))
        pos += len(b2)
    i1, i2 = np.array(order1, dtype=int), np.array(order2, dtype=int)
    cov[np.ix_(i1, i1)] = g1.cov
    cov[np.ix_(i2, i2)] = g2.cov
    return GaussianJoint(cov, dims, g1.names)


def random_discrete(rng: np.random.Generator, shape, sparse: bool = False) -> DiscreteJoint:
    """Normalized ``exp(normal)`` tensor; ``sparse`` zeroes about 30% of atoms."""
    p = np.exp(rng.standard_normal(tuple(int(s) for s in shape)))
    if sparse:
        p = p * (rng.random(p.shape) >= 0.3)
        if p.sum() == 0.0:
            p.flat[int(rng.integers(p.size))] = 1.0
    return DiscreteJoint(p / p.sum(), NAMES)


def fingerprint(*arrays: np.ndarray) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=float)
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]
