import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markov_pid import DiscreteJoint, GaussianJoint, ValidationError, UsageError, whiten
from markov_pid.generators import lowrank_gaussian, wishart_gaussian
from markov_pid.joint import psd_whitener


def test_discrete_rejects_bad_sums_and_negatives():
    with pytest.raises(ValidationError, match="sum"):
        DiscreteJoint(np.full((2, 2, 2), 0.2))
    p = np.full((2, 2, 2), 0.125)
    p[0, 0, 0] = -0.125
    p[1, 1, 1] = 0.375
    with pytest.raises(ValidationError, match="negative"):
        DiscreteJoint(p)


def test_discrete_alphabet_length_checked():
    with pytest.raises(ValidationError, match="alphabet"):
        DiscreteJoint(np.full((2, 2, 2), 0.125), alphabets=((0, 1), (0, 1), (0, 1, 2)))


def test_marginal_axis_order_follows_request():
    p = np.arange(1, 13, dtype=float).reshape(2, 3, 2)
    j = DiscreteJoint(p / p.sum())
    np.testing.assert_allclose(j.marginal(("Y", "M")), j.marginal(("M", "Y")).T)
    assert j.marginal("X").shape == (3,)


def test_reorder_and_swap_carry_alphabets():
    p = np.full((2, 3, 2), 1 / 12)
    j = DiscreteJoint(p, alphabets=(("a", "b"), (0, 1, 2), (0, 1)))
    s = j.swap("M", "X")
    assert s.var_names == ("X", "M", "Y")
    assert s.alphabets[0] == (0, 1, 2)
    with pytest.raises(UsageError):
        j.reorder(("M", "X"))


def test_drop_null_removes_zero_mass_symbols():
    p = np.zeros((3, 2, 2))
    p[0] = p[2] = 0.125
    j = DiscreteJoint(p, alphabets=(("a", "b", "c"), (0, 1), (0, 1))).drop_null()
    assert j.shape == (2, 2, 2)
    assert j.alphabets[0] == ("a", "c")


def test_product_pairs_alphabets():
    a = DiscreteJoint(np.full((2, 2, 2), 0.125))
    b = DiscreteJoint(np.full((3, 1, 2), 1 / 6))
    prod = a.product(b)
    assert prod.shape == (6, 2, 4)
    assert prod.alphabets[0][1] == (0, 1)
    np.testing.assert_allclose(prod.marginal("M"), np.full(6, 1 / 6))


def test_gaussian_validation_messages():
    with pytest.raises(ValidationError, match="not symmetric"):
        GaussianJoint(np.array([[1.0, 0.5], [0.4, 1.0]]), (1, 1), ("A", "B"))
    with pytest.raises(ValidationError, match="positive semidefinite"):
        GaussianJoint(np.array([[1.0, 2.0], [2.0, 1.0]]), (1, 1), ("A", "B"))


def test_gaussian_blocks_and_reorder(rng):
    g = wishart_gaussian(rng, (2, 1, 3))
    r = g.reorder(("Y", "M", "X"))
    np.testing.assert_array_equal(r.block("M", "Y"), g.block("M", "Y"))
    assert r.dims == (3, 2, 1)


def test_zero_dimensional_block_allowed():
    g = GaussianJoint(np.eye(2), (0, 1, 1))
    assert g.block("M", "X").shape == (0, 1)


@given(st.integers(0, 2**31 - 1))
def test_whiten_gives_identity_diagonal_blocks(seed):
    rng = np.random.default_rng(seed)
    g = (lowrank_gaussian if seed % 2 else wishart_gaussian)(rng, tuple(rng.integers(1, 4, size=3)))
    wg, rec = whiten(g)
    for n in wg.names:
        np.testing.assert_array_equal(wg.block(n, n), np.eye(wg.dim(n)))
    np.testing.assert_allclose(rec.reconstruct(wg), g.cov, atol=1e-8)


def test_psd_whitener_drops_null_directions():
    s = np.diag([2.0, 0.0, 0.5])
    w, w_inv = psd_whitener(s)
    assert w.shape == (2, 3)
    np.testing.assert_allclose(w @ s @ w.T, np.eye(2), atol=1e-14)
