import warnings

import numpy as np
import pytest
from hypothesis import given

from caepp.adaptive import hadamard_relabel
from caepp.exceptions import ZeroSuccessError
from caepp.oracle import enumerate_single_round
from caepp.single_carrier import (
    RoundOutcome,
    Trajectory,
    closed_form_fidelity,
    converges,
    limit_fidelity,
    round_update,
    satisfies_hypothesis,
    trajectory,
)
from caepp.state_model import (
    depolarizing,
    from_marginal_params,
    make_bell_table,
    marginals,
    pure_target,
    random_table,
)

from conftest import tables

NOISELESS = pure_target(3)


def test_noiseless_carrier_filters_shift_rows():
    shared = make_bell_table(3, [[0.6, 0.2, 0], [0.2, 0, 0], [0, 0, 0]])
    out = round_update(shared, NOISELESS)
    assert out.success_probability == pytest.approx(0.8)
    assert out.posterior.p[0, 0] == pytest.approx(0.75)
    assert out.posterior.p[0, 1] == pytest.approx(0.25)
    assert out.fidelity == out.posterior.p[0, 0]


def test_first_round_asymmetric_example():
    ch = from_marginal_params(0.5, 0.6)
    assert np.allclose(marginals(ch).u, [0.5, 0.3, 0.2])
    out = round_update(ch, ch)
    assert out.fidelity == pytest.approx(0.25 / 0.38, abs=1e-12)
    assert out.fidelity == pytest.approx(enumerate_single_round(ch, ch).posterior.fidelity, abs=1e-12)


def test_pure_target_is_kept():
    out = round_update(NOISELESS, NOISELESS)
    assert out.success_probability == 1.0 and out.posterior == NOISELESS


def test_zero_success_is_reported():
    shared = make_bell_table(3, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(ZeroSuccessError):
        round_update(shared, NOISELESS)
    with pytest.raises(ValueError):
        round_update(shared, depolarizing(2, 0.5))


def test_closed_form_examples():
    assert closed_form_fidelity(0.33, [0.33, 0.335, 0.335], 500) < 1e-3
    assert closed_form_fidelity(0.34, [0.34, 0.33, 0.33], 5000) > 0.999
    assert closed_form_fidelity(0.7, [0.7, 0.0, 0.0], 0) == 1.0
    assert closed_form_fidelity(0.34, marginals(from_marginal_params(0.34, 0.5)), 0) == pytest.approx(0.34)
    # far past under/overflow of the plain power
    assert closed_form_fidelity(0.3, [0.3, 0.35, 0.35], 10**6) < 1e-300
    assert closed_form_fidelity(0.4, [0.4, 0.3, 0.3], 10**6) == 1.0
    with pytest.raises(ValueError):
        closed_form_fidelity(0.0, [0, 0.5, 0.5], 3)
    with pytest.raises(ValueError):
        closed_form_fidelity(0.5, [0.5, 0.25, 0.25], -1)


def test_converges_examples():
    assert not converges(from_marginal_params(0.34, 0.48))
    assert converges(from_marginal_params(0.51, 0.01))
    assert converges(from_marginal_params(0.34, 0.5))


def test_converges_warns_outside_hypothesis():
    with pytest.warns(RuntimeWarning):
        converges(depolarizing(3, 0.5))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        converges(from_marginal_params(0.4, 0.5))


def test_limit_fidelity():
    assert limit_fidelity(from_marginal_params(0.4, 0.5)) == 1.0
    assert limit_fidelity(from_marginal_params(0.3, 0.5)) == 0.0
    tie = make_bell_table(3, [[0.4, 0, 0], [0.4, 0, 0], [0.2, 0, 0]])
    assert limit_fidelity(tie) == 0.5
    assert limit_fidelity(depolarizing(3, 0.5)) is None


@pytest.mark.parametrize("p0,A,direction", [(0.33, 0.5, -1), (0.51, 0.01, +1)])
def test_trajectory_direction(p0, A, direction):
    f = trajectory(from_marginal_params(p0, A), 100).fidelities
    assert np.all(direction * np.diff(f) > 0)


def test_two_noiseless_rounds_with_relabel_purify():
    shared = random_table(3, np.random.default_rng(5))
    q = round_update(shared, NOISELESS).posterior
    q = round_update(hadamard_relabel(q), NOISELESS).posterior
    assert q.fidelity == pytest.approx(1.0, abs=1e-15)


def test_trajectory_object():
    ch = from_marginal_params(0.4, 0.5)
    traj = trajectory(ch, 5)
    assert len(traj) == 5 and traj.rounds == 5
    assert traj.converged_fidelity == 1.0
    assert traj.initial == ch
    assert np.allclose(traj.cumulative_success, np.cumprod(traj.success_probabilities))
    assert traj.outcomes[2].label == "round:3"
    with pytest.raises(ValueError):
        trajectory(ch, 0)
    with pytest.raises(ValueError):
        Trajectory((), 0.5)
    with pytest.raises(ValueError):
        Trajectory((RoundOutcome(0.0, ch),), 0.5)


@given(ch=tables(zero_phase_row=True))
def test_iterated_rounds_match_closed_form(ch):
    assert satisfies_hypothesis(ch)
    u = marginals(ch).u
    for n, out in enumerate(trajectory(ch, 20).outcomes, start=1):
        assert abs(out.fidelity - closed_form_fidelity(ch.fidelity, u, n)) < 1e-10


@given(ch=tables(zero_phase_row=True))
def test_monotone_when_convergent(ch):
    if not converges(ch) or ch.fidelity == 1.0:
        return
    f = np.concatenate([[ch.fidelity], trajectory(ch, 30).fidelities])
    assert np.all(np.diff(f) >= 0)
    assert np.all((np.diff(f) > 0) | (f[1:] > 1 - 1e-15))


@given(shared=tables())
def test_noiseless_filter_exact(shared):
    try:
        out = round_update(shared, NOISELESS)
    except ZeroSuccessError:
        assert shared.p[0].sum() == 0
        return
    assert np.all(out.posterior.p[1:] == 0.0)


def test_matches_enumeration(rng):
    for _ in range(200):
        a, b = random_table(3, rng), random_table(3, rng)
        x, y = round_update(a, b), enumerate_single_round(a, b)
        assert abs(x.success_probability - y.success_probability) < 1e-12
        assert np.abs(x.posterior.p - y.posterior.p).max() < 1e-12
