from dataclasses import replace
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwprobe.fisher import (
    DetectorWindow,
    PositionDensity,
    classical_fi,
    cramer_rao_bound,
    full_qfi,
    limited_fi,
    position_qfi_exact,
    position_qfi_paper,
    probability_derivative,
    reduce_position,
)
from qwprobe.tangent import evolve_tangent, new_tangent, step_with_tangent
from qwprobe.walk import PLUS, Bounded, InitialSpin, Unbounded, probability, evolve

import oracles

PI = math.pi


def fi_of(ts, window=None):
    d, dd = probability(ts.base), probability_derivative(ts)
    return classical_fi(d, dd) if window is None else limited_fi(d, dd, window)


def random_pure(rng, n):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi /= np.linalg.norm(psi)
    dpsi = rng.normal(size=n) + 1j * rng.normal(size=n)
    dpsi -= np.vdot(psi, dpsi).real * psi  # keep the norm stationary
    return psi, dpsi


# full_qfi

@given(st.floats(0, PI))
def test_full_qfi_vanishes_at_t1(theta):
    ts = step_with_tangent(new_tangent(PLUS, Unbounded(2)), theta)
    assert full_qfi(ts) == pytest.approx(0, abs=1e-9)


def test_full_qfi_vanishes_at_t0():
    assert full_qfi(new_tangent(PLUS, Unbounded(2))) == 0


def test_full_qfi_rejects_unnormalized():
    ts = evolve_tangent(0.3, 4)
    bad = replace(ts, base=replace(ts.base, up=2 * ts.base.up))
    with pytest.raises(ValueError):
        full_qfi(bad)


@pytest.mark.parametrize("bounded", [False, True])
@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("theta", [0.2, PI / 4, 2.0])
def test_full_qfi_matches_explicit_density_matrices(bounded, t, theta):
    n = 3
    psi, dpsi = oracles.standard_trajectory(theta, t, n, bounded)
    ts = evolve_tangent(theta, t, Bounded(n) if bounded else Unbounded(n))
    assert full_qfi(ts) == pytest.approx(oracles.pure_qfi_from_matrices(psi, dpsi), abs=1e-10)


@pytest.mark.parametrize("theta", [PI / 8, PI / 4, 3 * PI / 8])
def test_full_qfi_topology_independent_until_2a(theta):
    a = 20
    ub, b = new_tangent(PLUS, Unbounded(3 * a)), new_tangent(PLUS, Bounded(a))
    for _ in range(2 * a):
        ub, b = step_with_tangent(ub, theta), step_with_tangent(b, theta)
        assert full_qfi(b) == pytest.approx(full_qfi(ub), rel=1e-9, abs=1e-9)


def test_full_qfi_grows_quadratically():
    ts = new_tangent(PLUS, Unbounded(200))
    t_vals, h = [], []
    for t in range(1, 201):
        ts = step_with_tangent(ts, PI / 4)
        if t >= 50:
            t_vals.append(t)
            h.append(full_qfi(ts))
    t_vals, h = np.array(t_vals, float), np.array(h)
    kappa = np.sum(h * t_vals**2) / np.sum(t_vals**4)
    assert np.max(np.abs(h - kappa * t_vals**2) / h) < 0.05


# reduce_position

def test_reduce_position_t1():
    pd = reduce_position(step_with_tangent(new_tangent(PLUS, Unbounded(3)), 0.7))
    assert list(pd.sites) == [-1, 0, 1]
    np.testing.assert_allclose(pd.rho, np.diag([0.5, 0, 0.5]), atol=1e-15)
    np.testing.assert_allclose(pd.drho, 0, atol=1e-15)


def test_reduce_position_t0():
    pd = reduce_position(new_tangent(InitialSpin(0.6, 0.8j), Unbounded(3)))
    assert list(pd.sites) == [0]
    np.testing.assert_allclose(pd.rho, [[1]])
    np.testing.assert_allclose(pd.drho, [[0]])


def test_reduce_position_invariants_t200():
    pd = reduce_position(evolve_tangent(3 * PI / 8, 200))
    pd.check()
    assert np.trace(pd.rho).real == pytest.approx(1, abs=1e-10)
    assert abs(np.trace(pd.drho)) < 1e-10
    assert len(pd.sites) <= 401


@pytest.mark.parametrize("bounded", [False, True])
def test_reduce_position_is_a_partial_trace(bounded):
    n, t, theta = 3, 3, 0.9
    psi, dpsi = oracles.standard_trajectory(theta, t, n, bounded)
    rho, drho = oracles.full_rho(psi, dpsi)
    pd = reduce_position(evolve_tangent(theta, t, Bounded(n) if bounded else Unbounded(n)))
    lo = pd.sites[0] + n
    sl = slice(lo, lo + len(pd.sites))
    np.testing.assert_allclose(pd.rho, oracles.coin_trace(rho, n)[sl, sl], atol=1e-14)
    np.testing.assert_allclose(pd.drho, oracles.coin_trace(drho, n)[sl, sl], atol=1e-14)


def test_position_density_check_rejects_bad_trace():
    with pytest.raises(ValueError):
        PositionDensity(0, np.array([0]), np.array([[0.5 + 0j]]), np.zeros((1, 1), complex)).check()


# position QFI

@pytest.mark.parametrize("t", [0, 1])
def test_position_qfi_zero_early(t):
    ts = evolve_tangent(1.0, t)
    pd = reduce_position(ts)
    assert position_qfi_paper(pd) == pytest.approx(0, abs=1e-12)
    assert position_qfi_exact(pd) == pytest.approx(0, abs=1e-12)


def test_exact_qfi_zero_derivative():
    rho = np.diag([0.2, 0.3, 0.5]).astype(complex)
    pd = PositionDensity(0, np.arange(3), rho, np.zeros_like(rho))
    assert position_qfi_exact(pd) == 0


@pytest.mark.parametrize("seed", range(5))
def test_qfi_forms_agree_for_pure_states(seed):
    psi, dpsi = random_pure(np.random.default_rng(seed), 3)
    rho, drho = oracles.full_rho(psi, dpsi)
    pd = PositionDensity(0, np.arange(3), rho, drho)
    expected = 4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2)
    assert position_qfi_exact(pd) == pytest.approx(expected, rel=1e-10)
    # (I - rho) removes exactly the pure direction, so the approximate form is exact here
    assert position_qfi_paper(pd) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_exact_qfi_matches_sld_solution(seed):
    rng = np.random.default_rng(seed)
    n = 6
    # rank-2 state, like the coin-traced walker
    vs = [random_pure(rng, n) for _ in range(2)]
    w = [0.7, 0.3]
    rho = sum(wk * np.outer(p, p.conj()) for wk, (p, _) in zip(w, vs))
    drho = sum(wk * (np.outer(d, p.conj()) + np.outer(p, d.conj())) for wk, (p, d) in zip(w, vs))
    drho -= np.trace(drho) * rho  # keep trace(drho) = 0
    pd = PositionDensity(0, np.arange(n), rho, drho)
    assert position_qfi_exact(pd) == pytest.approx(oracles.sld_qfi(rho, drho), rel=1e-9)


def test_exact_qfi_walk_matches_sld_solution():
    pd = reduce_position(evolve_tangent(PI / 4, 12))
    assert position_qfi_exact(pd) == pytest.approx(oracles.sld_qfi(pd.rho, pd.drho), rel=1e-9)


def test_exact_qfi_eps_sensitivity():
    pd = reduce_position(evolve_tangent(PI / 4, 100))
    base = position_qfi_exact(pd, 1e-12)
    for eps in (1e-11, 1e-13):
        assert position_qfi_exact(pd, eps) == pytest.approx(base, rel=1e-9)


def test_position_qfi_bounds_at_t50():
    ts = evolve_tangent(PI / 4, 50)
    he = position_qfi_exact(reduce_position(ts))
    assert fi_of(ts) <= he + 1e-8
    assert he <= full_qfi(ts) + 1e-8


def test_position_qfi_kappa_plateau():
    ts = new_tangent(PLUS, Unbounded(200))
    kappa = []
    for t in range(1, 201):
        ts = step_with_tangent(ts, PI / 4)
        kappa.append(position_qfi_paper(reduce_position(ts)) / t**2)
    last = np.array(kappa[150:])
    assert (last.max() - last.min()) / last.mean() < 0.05


# classical FI

def test_probability_derivative_matches_finite_difference():
    theta, t, h = 0.8, 30, 1e-6
    ts = evolve_tangent(theta, t)
    fd = (probability(evolve(theta + h, t)).probs - probability(evolve(theta - h, t)).probs) / (2 * h)
    dd = probability_derivative(ts)
    np.testing.assert_allclose(dd, fd, atol=1e-7)
    assert abs(dd.sum()) < 1e-9


@pytest.mark.parametrize("t", [0, 1])
def test_classical_fi_zero_early(t):
    assert fi_of(evolve_tangent(0.4, t)) == pytest.approx(0, abs=1e-12)


def test_classical_fi_bounded_by_qfi_t100():
    ts = evolve_tangent(PI / 4, 100)
    fx = fi_of(ts)
    he = position_qfi_exact(reduce_position(ts))
    assert 0 < fx <= he + 1e-8 <= full_qfi(ts) + 2e-8


def test_classical_fi_brute_force_sum():
    ts = evolve_tangent(0.5, 20)
    p = probability(ts.base).probs
    dp = probability_derivative(ts)
    total = sum(dp[i] ** 2 / p[i] for i in range(len(p)) if p[i] > 1e-15)
    assert fi_of(ts) == pytest.approx(total, rel=1e-12)


def test_classical_fi_rejects_negative_probability():
    ts = evolve_tangent(0.5, 3)
    d = probability(ts.base)
    bad = replace(d, probs=d.probs - 1e-6)
    with pytest.raises(ValueError):
        classical_fi(bad, probability_derivative(ts))


def test_limited_fi_full_window_equals_full_fi():
    ts = evolve_tangent(PI / 4, 40)
    assert fi_of(ts, DetectorWindow.interval(-40, 40)) == fi_of(ts)


def test_limited_fi_window_at_origin_odd_time():
    ts = evolve_tangent(PI / 4, 31)
    assert fi_of(ts, DetectorWindow([0])) == 0


def test_limited_fi_tracks_then_falls():
    w = DetectorWindow.interval(-25, 25)
    ts = new_tangent(PLUS, Unbounded(200))
    fx, fxl = {}, {}
    for t in range(1, 201):
        ts = step_with_tangent(ts, PI / 4)
        fx[t], fxl[t] = fi_of(ts), fi_of(ts, w)
    for t in range(1, 26):
        assert fxl[t] == pytest.approx(fx[t], abs=1e-9)
    assert all(fxl[t] <= fx[t] + 1e-9 for t in fx)
    assert fxl[175] < fxl[50]
    assert fx[175] > fx[50]


def test_empty_window_rejected():
    with pytest.raises(ValueError):
        DetectorWindow([])


# Cramer-Rao

@pytest.mark.parametrize("F,M,expected", [(4, 1, 0.25), (4, 100, 0.0025), (0.5, 2, 1.0)])
def test_cramer_rao(F, M, expected):
    assert cramer_rao_bound(F, M) == pytest.approx(expected)


def test_cramer_rao_no_information():
    assert cramer_rao_bound(0.0) == math.inf
    assert cramer_rao_bound(-1e-12) == math.inf
    with pytest.raises(ValueError):
        cramer_rao_bound(1.0, 0)


# invariants

@settings(max_examples=10, deadline=None)
@given(st.floats(0.05, PI / 2 - 0.05), st.integers(2, 60), st.booleans())
def test_mirror_symmetry(theta, t, bounded):
    topo = (lambda: Bounded(12)) if bounded else (lambda: Unbounded(t))
    a, b = evolve_tangent(theta, t, topo()), evolve_tangent(PI - theta, t, topo())
    pa, pb = reduce_position(a), reduce_position(b)
    pairs = [
        (full_qfi(a), full_qfi(b)),
        (position_qfi_paper(pa), position_qfi_paper(pb)),
        (position_qfi_exact(pa), position_qfi_exact(pb)),
        (fi_of(a), fi_of(b)),
    ]
    for x, y in pairs:
        assert x == pytest.approx(y, rel=1e-6, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.01, PI - 0.01), st.integers(2, 80))
def test_information_chain(theta, t):
    ts = evolve_tangent(theta, t)
    w = DetectorWindow.interval(-t // 3, t // 3)
    fxl, fx = fi_of(ts, w), fi_of(ts)
    he, hf = position_qfi_exact(reduce_position(ts)), full_qfi(ts)
    assert -1e-9 <= fxl <= fx + 1e-9
    assert fx <= he + 1e-8
    assert he <= hf + 1e-8
