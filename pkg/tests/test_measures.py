import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markov_pid import (
    DiscreteJoint,
    GaussianJoint,
    NegativeInformationError,
    canonical_example,
    conditional_mutual_information,
    entropy,
    gaussian_conditional_mi,
    gaussian_mi,
    markov_check_gaussian,
    mutual_information,
)
from markov_pid.generators import random_discrete, wishart_gaussian
from markov_pid.units import InfoUnit, clamp_nonneg


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_entropy_of_quarter_biased_bit():
    p = np.zeros((2, 1, 1))
    p[:, 0, 0] = (0.25, 0.75)
    assert entropy(DiscreteJoint(p), "M") == pytest.approx(h2(0.25), abs=1e-12)
    assert h2(0.25) == pytest.approx(0.8113, abs=1e-4)


def test_and_gate_informations():
    j = canonical_example("AND")
    # M=1 with prob 1/4; knowing X=0 pins M=0, X=1 leaves a fair bit
    oracle = h2(0.25) - 0.5 * 1.0
    assert mutual_information(j, "M", "X") == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.311278, abs=1e-6)
    assert conditional_mutual_information(j, "M", "X", "Y") == pytest.approx(0.5, abs=1e-12)


def test_units_convert():
    j = canonical_example("XOR")
    assert conditional_mutual_information(j, "M", "X", "Y", InfoUnit.NATS) == pytest.approx(math.log(2))


@given(st.integers(0, 2**31 - 1), st.booleans())
def test_discrete_mi_symmetric_and_chain_rule(seed, sparse):
    rng = np.random.default_rng(seed)
    j = random_discrete(rng, rng.integers(2, 4, size=3), sparse)
    assert mutual_information(j, "M", "X") == mutual_information(j, "X", "M")
    lhs = mutual_information(j, "M", ("X", "Y"))
    rhs = mutual_information(j, "M", "Y") + conditional_mutual_information(j, "M", "X", "Y")
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert mutual_information(j, "M", "X") <= entropy(j, "M") + 1e-12


def test_clamp_nonneg():
    assert clamp_nonneg(-1e-12) == 0.0
    with pytest.raises(NegativeInformationError):
        clamp_nonneg(-1e-6)


def test_scalar_gaussian_mi_oracle():
    rho = 0.6
    g = GaussianJoint(np.array([[1, rho, 0], [rho, 1, 0], [0, 0, 1.0]]), (1, 1, 1))
    oracle = -0.5 * math.log2(1 - rho**2)
    assert gaussian_mi(g, "M", "X") == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.321928, abs=1e-6)


def test_gaussian_conditional_mi_matches_logdet(rng):
    g = wishart_gaussian(rng, (2, 2, 1))
    def ld(names):
        return np.linalg.slogdet(g.block(names, names))[1]
    oracle = 0.5 * (ld(("M", "Y")) + ld(("X", "Y")) - ld(("M", "X", "Y")) - ld("Y"))
    assert gaussian_conditional_mi(g, "M", "X", "Y", InfoUnit.NATS) == pytest.approx(oracle, abs=1e-10)


def test_deterministic_gaussian_relation_is_infinite():
    g = GaussianJoint(np.ones((2, 2)), (1, 1), ("A", "B"))
    assert gaussian_mi(g, "A", "B") == math.inf


def test_markov_check():
    # Y = a X + noise, M = b X + noise: M - X - Y holds
    a, b = 0.7, -0.4
    cov = np.array([[b * b + 0.5, b, a * b], [b, 1.0, a], [a * b, a, a * a + 0.3]])
    g = GaussianJoint(cov, (1, 1, 1))
    assert markov_check_gaussian(g, ("M", "X", "Y")).holds
    assert not markov_check_gaussian(g, ("M", "Y", "X")).holds


@given(st.integers(0, 2**31 - 1))
def test_discrete_measures_exactly_invariant_under_relabeling(seed):
    rng = np.random.default_rng(seed)
    j = random_discrete(rng, (3, 3, 2), sparse=bool(seed % 2))
    k = j.permute_alphabet("X", rng.permutation(3)).permute_alphabet("M", rng.permutation(3))
    assert mutual_information(j, "M", "X") == mutual_information(k, "M", "X")
    assert conditional_mutual_information(j, "M", "Y", "X") == conditional_mutual_information(k, "M", "Y", "X")
    assert entropy(j, ("M", "X", "Y")) == entropy(k, ("M", "X", "Y"))


@given(st.integers(0, 2**31 - 1))
def test_gaussian_mi_invariant_under_transforms_and_whitening(seed):
    from markov_pid import whiten

    rng = np.random.default_rng(seed)
    g = wishart_gaussian(rng, (2, 2, 1))
    mats = {n: rng.standard_normal((g.dim(n), g.dim(n))) + 3 * np.eye(g.dim(n)) for n in g.names}
    base = gaussian_mi(g, "M", ("X", "Y"))
    assert gaussian_mi(g.transform(mats), "M", ("X", "Y")) == pytest.approx(base, rel=1e-8)
    assert gaussian_mi(whiten(g)[0], "M", ("X", "Y")) == pytest.approx(base, rel=1e-8)


@given(st.integers(0, 2**31 - 1))
def test_markov_check_accepts_linear_channels(seed):
    # T = A M + noise independent of everything else gives T - M - (X, Y)
    rng = np.random.default_rng(seed)
    g = wishart_gaussian(rng, (2, 2, 2))
    a = rng.standard_normal((2, 2))
    s = g.cov
    top = np.hstack([a @ s[:2, :2] @ a.T + np.eye(2), a @ s[:2, :]])
    cov = np.vstack([top, np.hstack([top[:, 2:].T, s])])
    j = GaussianJoint(cov, (2, 2, 2, 2), ("T", "M", "X", "Y"))
    assert markov_check_gaussian(j, ("T", "M", ("X", "Y"))).holds
