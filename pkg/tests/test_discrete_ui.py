import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markov_pid import (
    Definition,
    DiscreteJoint,
    canonical_example,
    decompose_discrete,
    lemma_b1_verify,
    mutual_information,
    ui_discrete,
)
from markov_pid.discrete_ui import channel_objective, default_t_card
from markov_pid.generators import random_discrete
from markov_pid.verify import random_binary_chain

TABLE = {
    "RDN": (0.0, 0.0, 1.0, 0.0),
    "UNQ": (1.0, 1.0, 0.0, 0.0),
    "XOR": (0.0, 0.0, 0.0, 1.0),
    "AND": (0.0, 0.0, 0.311278, 0.5),
}


@pytest.mark.parametrize("name", list(TABLE))
def test_gate_rows_message_side(name):
    row = decompose_discrete(canonical_example(name), "tmxy").terms.table_row()
    np.testing.assert_allclose(row, TABLE[name], atol=1e-6)


@pytest.mark.parametrize("name", ["RDN", "UNQ", "XOR"])
def test_gate_rows_source_side(name):
    row = decompose_discrete(canonical_example(name), "myxt").terms.table_row()
    np.testing.assert_allclose(row, TABLE[name], atol=1e-6)


def test_and_source_side_uses_x_itself():
    # X and Y are independent in AND, so T = X is feasible and UI >= I(M;X)
    j = canonical_example("AND")
    res = ui_discrete(j, "myxt")
    assert res.value == pytest.approx(mutual_information(j, "M", "X"), abs=1e-12)


def test_single_symbol_extractor_gives_zero():
    res = ui_discrete(canonical_example("UNQ"), "tmxy", t_card=1)
    assert res.value == 0.0 and res.certified


def test_default_t_card_counts_effective_alphabet():
    assert default_t_card(canonical_example("UNQ")) == 5
    assert default_t_card(canonical_example("UNQ"), "myxt") == 3


def test_channel_objective_identity_is_mi():
    j = canonical_example("AND")
    p_mx = j.marginal(("M", "X"))
    assert channel_objective(np.eye(2), p_mx) == pytest.approx(mutual_information(j, "M", "X", "nats"))


def test_optimal_channel_is_independent_of_y():
    j = canonical_example("UNQ")
    res = ui_discrete(j, "tmxy")
    q = res.optimal_channel.probs
    p_ty = q @ j.marginal(("M", "Y"))
    np.testing.assert_allclose(p_ty, np.outer(p_ty.sum(1), p_ty.sum(0)), atol=1e-12)


@given(st.integers(0, 2**31 - 1))
def test_symbol_relabeling_invariance(seed):
    rng = np.random.default_rng(seed)
    j = random_discrete(rng, (3, 2, 2))
    perm = rng.permutation(3)
    a = ui_discrete(j, "tmxy", 3, unit="nats").value
    b = ui_discrete(j.permute_alphabet("M", perm), "tmxy", 3, unit="nats").value
    assert a == pytest.approx(b, abs=1e-9)


@given(st.integers(0, 2**31 - 1))
def test_duality_discrete(seed):
    rng = np.random.default_rng(seed)
    j = random_discrete(rng, rng.integers(2, 4, size=3))
    a = ui_discrete(j, "myxt", 3, unit="nats").value
    b = ui_discrete(j.swap("M", "X"), "tmxy", 3, unit="nats").value
    assert a == pytest.approx(b, abs=1e-9)


def test_sample_mode_lower_bounds_exact(rng):
    j = random_discrete(rng, (3, 3, 2))
    exact = ui_discrete(j, "tmxy", 3, mode="exact")
    sampled = ui_discrete(j, "tmxy", 3, mode="sample", samples=16)
    assert not sampled.certified
    assert sampled.value <= exact.value + 1e-9


def test_t_card_probe_reports_increase():
    res = ui_discrete(canonical_example("UNQ"), "tmxy", t_card=2, probe_t_card=True)
    assert res.t_card_increase is not None and res.t_card_increase >= 0.0


def test_deterministic_tie_break():
    a = ui_discrete(canonical_example("XOR"), "tmxy").optimal_channel.probs
    b = ui_discrete(canonical_example("XOR"), "tmxy").optimal_channel.probs
    np.testing.assert_array_equal(a, b)


def test_lemma_b1_on_chains(rng):
    checked = 0
    for _ in range(20000):
        rep = lemma_b1_verify(random_binary_chain(rng, 3))
        if rep.hypothesis:
            checked += 1
            assert rep.passed
    assert checked > 0


def test_lemma_b1_rejects_non_binary():
    from markov_pid import UsageError

    with pytest.raises(UsageError):
        lemma_b1_verify(DiscreteJoint(np.full((2, 3, 2), 1 / 12), ("X", "Y", "Z")))


@given(st.integers(0, 2**31 - 1))
def test_vertex_optimality_against_interior_points(seed):
    from markov_pid import build_polytope, enumerate_vertices

    rng = np.random.default_rng(seed)
    j = random_discrete(rng, (3, 2, 2), sparse=bool(seed % 2))
    res = ui_discrete(j, "tmxy", 3, unit="nats")
    p = build_polytope(j, "tmxy", 3)
    qs = np.stack([c.probs for c in enumerate_vertices(p).channels])
    p_mx = j.marginal(("M", "X"))
    for _ in range(20):
        w = rng.dirichlet(np.ones(len(qs)))
        q = np.tensordot(w, qs, axes=1)
        assert channel_objective(q, p_mx) <= res.value + 1e-9


@given(st.integers(0, 2**31 - 1), st.sampled_from(list(Definition)))
def test_monotone_in_t_card_and_argmax_feasible(seed, definition):
    from markov_pid import build_polytope

    rng = np.random.default_rng(seed)
    j = random_discrete(rng, (2, 2, 3))
    prev = -1.0
    for t in (1, 2, 3, 4):
        res = ui_discrete(j, definition, t, unit="nats")
        assert res.value >= prev - 1e-12
        prev = res.value
        q = res.optimal_channel.probs
        np.testing.assert_allclose(q.sum(axis=0), 1.0, atol=1e-12)
        assert build_polytope(j, definition, t).independence_residual(q) <= 1e-9


def test_constant_source_short_circuits():
    p = np.zeros((2, 1, 2))
    p[:, 0, :] = 0.25
    assert ui_discrete(DiscreteJoint(p), "tmxy").value == 0.0
