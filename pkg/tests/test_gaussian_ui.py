import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markov_pid import (
    Definition,
    DomainError,
    GaussianJoint,
    IllConditionedError,
    counterexample_family,
    gaussian_mi,
    kernel_basis,
    markov_check_gaussian,
    numeric_ui_verify,
    optimal_extractor,
    pid_terms_gaussian,
    ui_gaussian,
)
from markov_pid.generators import lowrank_gaussian, structured_gaussian, wishart_gaussian
from markov_pid.units import InfoUnit


def two_dim_message(c1, c2, r):
    """M = (M1, M2) white, Y correlated with M1 only, X correlated with both."""
    cov = np.array(
        [
            [1.0, 0.0, c1, r],
            [0.0, 1.0, c2, 0.0],
            [c1, c2, 1.0, 0.0],
            [r, 0.0, 0.0, 1.0],
        ]
    )
    return GaussianJoint(cov, (2, 1, 1))


def test_kernel_only_direction_oracle():
    g = two_dim_message(0.3, 0.5, 0.4)
    oracle = -0.5 * math.log2(1 - 0.5**2)
    res = ui_gaussian(g, "tmxy")
    assert res.value == pytest.approx(oracle, abs=1e-12)
    assert res.kernel_dim == 1


def test_independent_protected_gives_full_mutual_information(rng):
    cov = wishart_gaussian(rng, (2, 2, 2)).cov.copy()
    cov[:4, 4:] = cov[4:, :4] = 0.0
    g = GaussianJoint(cov, (2, 2, 2))
    for d in Definition:
        assert ui_gaussian(g, d).value == pytest.approx(gaussian_mi(g, "M", "X"), abs=1e-10)


def test_scalar_message_correlated_with_y_has_no_unique_information():
    terms = pid_terms_gaussian(counterexample_family("tmxy"))
    assert terms.ui_x == 0.0 and terms.ui_y == 0.0
    assert terms.r_x == pytest.approx(-0.5 * math.log2(1 - 0.36), abs=1e-12)
    assert terms.r_y == pytest.approx(-0.5 * math.log2(1 - 0.09), abs=1e-12)


def test_counterexample_family_domain():
    with pytest.raises(DomainError):
        counterexample_family("tmxy", (0.8, 0.6))


def test_kernel_basis_is_orthonormal_and_annihilates():
    m = np.array([[1.0, 2.0, 3.0]])
    kb = kernel_basis(m)
    assert kb.dim == 2
    np.testing.assert_allclose(kb.basis.T @ kb.basis, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(m @ kb.basis, 0.0, atol=1e-14)


def test_perfect_correlation_in_kernel_raises():
    cov = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(IllConditionedError):
        ui_gaussian(GaussianJoint(cov, (1, 1, 1)))


@given(st.integers(0, 2**31 - 1), st.sampled_from(list(Definition)))
def test_invariant_under_blockwise_invertible_maps(seed, definition):
    rng = np.random.default_rng(seed)
    g = structured_gaussian(rng, tuple(rng.integers(1, 4, size=3)), parent="M" if seed % 2 else "X")
    mats = {n: rng.standard_normal((g.dim(n), g.dim(n))) + 3 * np.eye(g.dim(n)) for n in g.names}
    a = ui_gaussian(g, definition, InfoUnit.NATS).value
    b = ui_gaussian(g.transform(mats), definition, InfoUnit.NATS).value
    assert a == pytest.approx(b, abs=1e-8)


@given(st.integers(0, 2**31 - 1))
def test_bounded_by_mutual_informations(seed):
    rng = np.random.default_rng(seed)
    g = lowrank_gaussian(rng, tuple(rng.integers(1, 4, size=3)))
    for d in Definition:
        t = pid_terms_gaussian(g, d, InfoUnit.NATS)
        assert t.ui_x <= t.i_mx + 1e-9
        assert t.ui_x <= t.i_mx_given_y + 1e-9
        assert min(t.values().values()) >= -1e-9


def test_duality_is_exact(rng):
    g = structured_gaussian(rng, (2, 3, 2), parent="X")
    assert ui_gaussian(g, "myxt").value == ui_gaussian(g.swap("M", "X"), "tmxy").value


@pytest.mark.parametrize("definition", list(Definition))
def test_extractor_realizes_closed_form(rng, definition):
    parent = "M" if definition is Definition.TMXY else "X"
    g = structured_gaussian(rng, (3, 3, 1), parent=parent)
    ex = optimal_extractor(g, definition, InfoUnit.NATS)
    assert not ex.degenerate
    rest = tuple(n for n in ("M", "X", "Y") if n != parent)
    target = "X" if parent == "M" else "M"
    assert np.max(np.abs(ex.joint.block("T", "Y"))) <= 1e-9
    assert markov_check_gaussian(ex.joint, ("T", parent, rest)).holds
    assert gaussian_mi(ex.joint, "T", target, InfoUnit.NATS) == pytest.approx(ex.value, abs=1e-9)


def test_degenerate_extractor_is_zero_dimensional():
    ex = optimal_extractor(counterexample_family("tmxy"))
    assert ex.degenerate and ex.joint.dim("T") == 0 and ex.value == 0.0


@pytest.mark.parametrize("definition", list(Definition))
def test_numeric_verifier_agrees(rng, definition):
    g = structured_gaussian(rng, (3, 2, 2), parent="M" if definition is Definition.TMXY else "X")
    nv = numeric_ui_verify(g, definition, restarts=8, unit=InfoUnit.NATS)
    assert nv.within(1e-6, 1e-9)


def test_result_serializes_restriction_label():
    d = ui_gaussian(two_dim_message(0.3, 0.5, 0.4)).to_dict()
    assert "jointly Gaussian" in d["diagnostics"]["restriction"]


def test_family_conditional_information_schur_formula():
    t = pid_terms_gaussian(counterexample_family("tmxy", (0.6, 0.3)))
    oracle = 0.5 * math.log2((1 - 0.09) / (1 - 0.36 - 0.09))
    assert t.i_mx_given_y == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.363217, abs=1e-6)
