import itertools

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from caepp.phase_space import PhasePoint, SymplecticMap
from caepp.state_model import make_bell_table

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

PRIMES = (2, 3, 5, 7)


@st.composite
def tables(draw, d=3, zero_phase_row=False):
    """Random Bell tables; ``zero_phase_row`` forces p01 = ... = p0,d-1 = 0."""
    raw = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=d * d, max_size=d * d)))
    raw = raw.reshape(d, d)
    if zero_phase_row:
        raw[0, 1:] = 0.0
    raw[0, 0] += 1e-3  # keep the total away from zero
    return make_bell_table(d, raw / raw.sum())


@st.composite
def points(draw, d):
    return PhasePoint(draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1)), d)


def symplectic_maps(d):
    every = [
        SymplecticMap(a, b, c, e, d)
        for a, b, c, e in itertools.product(range(d), repeat=4)
        if (a * e - b * c) % d == 1
    ]
    return st.sampled_from(every)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def table_with_fidelity(rng, d, low, high=1.0):
    """Random table with p00 drawn uniformly from (low, high)."""
    p00 = rng.uniform(low, high)
    rest = rng.dirichlet(np.ones(d * d - 1)) * (1 - p00)
    return make_bell_table(d, np.concatenate([[p00], rest]))
