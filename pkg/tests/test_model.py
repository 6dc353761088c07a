import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import langcompete as lc
from conftest import random_simplex


def params3(beta=0.726, ma=0.283, s=(0.35, 0.29, 0.36)):
    return lc.ModelParams(beta=beta, minority_aversion=ma,
                          utilities=np.asarray(s))


def derivative_reference(params, x):
    """Independent oracle: explicit gain/loss sums over transition_rate."""
    n = params.n
    out = np.zeros(n)
    for i in range(n):
        gain = sum(x[j] * lc.transition_rate(params, x, i, j)
                   for j in range(n) if j != i)
        loss = x[i] * sum(lc.transition_rate(params, x, j, i)
                          for j in range(n) if j != i)
        out[i] = gain - loss
    return out


# ---------------------------------------------------------------- params

def test_params_validation():
    with pytest.raises(ValueError):
        params3(beta=-0.1)
    with pytest.raises(ValueError):
        params3(ma=-0.1)
    with pytest.raises(ValueError):
        params3(s=(0.5, 0.5, 0.0))          # utility not > 0
    with pytest.raises(ValueError):
        params3(s=(0.4, 0.4, 0.4))          # sum != 1
    with pytest.raises(ValueError):
        lc.ModelParams(beta=1, minority_aversion=1,
                       utilities=np.array([0.5, 0.5]),
                       language_names=("a", "b", "c"))
    with pytest.raises(ValueError):
        lc.ModelParams(beta=1, minority_aversion=1, utilities=np.array([1.0]))


def test_params_utilities_immutable():
    p = params3()
    with pytest.raises(ValueError):
        p.utilities[0] = 0.9


def test_validate_state():
    lc.validate_state([0.2, 0.3, 0.5])
    with pytest.raises(ValueError):
        lc.validate_state([0.2, 0.3, 0.6])   # sum 1.1
    with pytest.raises(ValueError):
        lc.validate_state([-0.1, 0.6, 0.5])
    with pytest.raises(ValueError):
        lc.validate_state([np.nan, 0.5, 0.5])
    with pytest.raises(ValueError):
        lc.validate_state([0.5, 0.5], n=3)


# ---------------------------------------------------------- transition rate

def test_rate_zero_base_positive_exponent():
    p = params3(beta=0.5, ma=0.3)
    assert lc.transition_rate(p, [0.0, 0.4, 0.6], dest=0, src=1) == 0.0


def test_rate_hand_value():
    # s_dest=0.6, beta=1, ma=1, x_dest=0.5, x_src=0.5 -> 0.6*0.5*0.5
    p = lc.ModelParams(beta=1.0, minority_aversion=1.0,
                       utilities=np.array([0.6, 0.4]))
    r = lc.transition_rate(p, [0.5, 0.5], dest=0, src=1)
    assert r == pytest.approx(0.15, abs=1e-15)


def test_rate_zero_exponents_returns_bare_utility():
    p = params3(beta=0.0, ma=0.0)
    for x in ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.2, 0.3, 0.5]):
        assert lc.transition_rate(p, x, dest=0, src=1) == 0.35


def test_rate_domain_errors():
    p = params3()
    x = [0.2, 0.3, 0.5]
    with pytest.raises(ValueError):
        lc.transition_rate(p, x, dest=1, src=1)
    with pytest.raises(ValueError):
        lc.transition_rate(p, x, dest=3, src=0)
    with pytest.raises(ValueError):
        lc.transition_rate(p, x, dest=0, src=-1)


def test_rate_nonnegative_random(rng):
    for _ in range(200):
        n = int(rng.integers(2, 6))
        p = lc.ModelParams(beta=float(rng.uniform(0, 2)),
                           minority_aversion=float(rng.uniform(0, 2)),
                           utilities=random_simplex(rng, n))
        x = random_simplex(rng, n)
        i, j = rng.choice(n, size=2, replace=False)
        assert lc.transition_rate(p, x, int(i), int(j)) >= 0.0


# ------------------------------------------------------------- derivative

def test_derivative_symmetric_fixed_point():
    p = lc.ModelParams(beta=0.7, minority_aversion=0.4,
                       utilities=np.array([0.5, 0.5]))
    dx = lc.derivative(p, [0.5, 0.5])
    assert np.abs(dx).max() < 1e-15


def test_derivative_vertex_absorbing():
    p = params3(beta=1.0, ma=0.3)
    dx = lc.derivative(p, [1.0, 0.0, 0.0])
    assert np.abs(dx).max() < 1e-15


def test_derivative_hand_value():
    p = lc.ModelParams(beta=1.0, minority_aversion=1.0,
                       utilities=np.array([0.6, 0.4]))
    dx = lc.derivative(p, [0.5, 0.5])
    # gain/loss hand evaluation: rates 0.15 and 0.10 at the midpoint
    assert dx == pytest.approx([0.025, -0.025], abs=1e-15)


def test_derivative_matches_rate_sum_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        p = lc.ModelParams(beta=float(rng.uniform(0, 2)),
                           minority_aversion=float(rng.uniform(0, 2)),
                           utilities=random_simplex(rng, n))
        x = random_simplex(rng, n)
        assert lc.derivative(p, x) == pytest.approx(
            derivative_reference(p, x), abs=1e-13)


@given(
    n=st.integers(2, 6),
    seed=st.integers(0, 2**32 - 1),
    beta=st.floats(0.0, 2.0),
    ma=st.floats(0.0, 2.0),
)
@settings(max_examples=150, deadline=None)
def test_derivative_conserves_population(n, seed, beta, ma):
    r = np.random.default_rng(seed)
    p = lc.ModelParams(beta=beta, minority_aversion=ma,
                       utilities=random_simplex(r, n))
    dx = lc.derivative(p, random_simplex(r, n))
    assert abs(dx.sum()) < 1e-12


def test_all_vertices_absorbing(rng):
    for _ in range(50):
        n = int(rng.integers(2, 6))
        p = lc.ModelParams(beta=float(rng.uniform(0.01, 2)),
                           minority_aversion=float(rng.uniform(0.01, 2)),
                           utilities=random_simplex(rng, n))
        for k in range(n):
            x = np.zeros(n)
            x[k] = 1.0
            assert np.abs(lc.derivative(p, x)).max() < 1e-15


def test_positivity_at_zero_component(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        p = lc.ModelParams(beta=float(rng.uniform(0.01, 2)),
                           minority_aversion=float(rng.uniform(0, 2)),
                           utilities=random_simplex(rng, n))
        x = random_simplex(rng, n)
        k = int(rng.integers(0, n))
        x[(k + 1) % n] += x[k]
        x[k] = 0.0
        assert lc.derivative(p, x)[k] >= 0.0


def test_two_language_reduction_grid():
    # rate(2 -> 1) with x2 = 1 - x1 collapses to s1 * x1**(beta + ma)
    for beta in (0.0, 0.3, 0.726, 1.0, 1.7):
        for ma in (0.0, 0.283, 0.5, 1.0):
            p = lc.ModelParams(beta=beta, minority_aversion=ma,
                               utilities=np.array([0.6, 0.4]))
            for x1 in np.arange(0.1, 0.95, 0.1):
                r = lc.transition_rate(p, [x1, 1.0 - x1], dest=0, src=1)
                assert abs(r - 0.6 * x1 ** (beta + ma)) < 1e-12


def test_permutation_equivariance(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        s = random_simplex(rng, n)
        beta = float(rng.uniform(0, 2))
        ma = float(rng.uniform(0, 2))
        x = random_simplex(rng, n)
        perm = rng.permutation(n)
        p = lc.ModelParams(beta=beta, minority_aversion=ma, utilities=s)
        pp = lc.ModelParams(beta=beta, minority_aversion=ma, utilities=s[perm])
        assert lc.derivative(pp, x[perm]) == pytest.approx(
            lc.derivative(p, x)[perm], abs=1e-13)
