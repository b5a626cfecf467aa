"""Tests for the field evaluators, Fibonacci helpers, series, and tail bound."""

import math

import numpy as np
import pytest

import pentawave as pw

TAU = (1.0 + math.sqrt(5.0)) / 2.0

# Reference values computed independently with mpmath at 40 significant
# digits, then rounded to the nearest double.
S5_K1_HALFPI_0 = 0.022453571232578215
S5_K1_07_03 = -0.0002854023462858399
P5_K1_05_05 = -0.006326304609325629
E1 = (0.30901699437494745, 0.9510565162951535)
RAW_BOUND_1_1_0 = 0.003772341036933013
GRAD_S5_K1_03_08 = (0.0008824532110866910, 0.0065934892473002385)


def _disk_points(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    th = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def test_direction_basis_unit_vectors():
    e = pw.direction_basis()
    assert e.shape == (5, 2)
    assert np.allclose(np.hypot(e[:, 0], e[:, 1]), 1.0, rtol=0, atol=1e-15)
    assert e[0, 0] == 1.0 and e[0, 1] == 0.0
    assert abs(e[1, 0] - E1[0]) <= 1e-15
    assert abs(e[1, 1] - E1[1]) <= 1e-15


def test_direction_basis_pairwise_angles():
    e = pw.direction_basis()
    for i in range(5):
        for j in range(5):
            want = math.cos(2.0 * math.pi * (i - j) / 5.0)
            assert abs(float(e[i] @ e[j]) - want) <= 1e-14


def test_direction_basis_sums_to_zero():
    e = pw.direction_basis()
    assert np.abs(e.sum(axis=0)).max() <= 1e-15


def test_direction_basis_returns_independent_copy():
    e = pw.direction_basis()
    e[0, 0] = 99.0
    assert pw.direction_basis()[0, 0] == 1.0


def test_project_examples():
    a = pw.project((1.0, 0.0))
    assert a.shape == (5,)
    assert a[0] == 1.0
    # a0 + a1 = -tau * a3 at (1, 0)
    assert abs((a[0] + a[1]) + TAU * a[3]) <= 1e-15
    assert np.all(pw.project((0.0, 0.0)) == 0.0)


def test_project_components_sum_to_zero():
    rng = np.random.default_rng(3)
    pts = _disk_points(rng, 10000, 20.0)
    a = pw.project(pts)
    norms = np.hypot(pts[:, 0], pts[:, 1])
    assert np.all(np.abs(a.sum(axis=-1)) <= 1e-12 * norms)


def test_project_batch_shapes():
    pts = np.zeros((4, 3, 2))
    assert pw.project(pts).shape == (4, 3, 5)
    with pytest.raises(ValueError):
        pw.project((1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        pw.project((np.nan, 0.0))


def test_s5_reference_values():
    assert pw.s5(1.0, (0.0, 0.0)) == 0.0
    assert abs(pw.s5(1.0, (math.pi / 2.0, 0.0)) - S5_K1_HALFPI_0) <= 5e-15
    assert abs(pw.s5(1.0, (0.7, 0.3)) - S5_K1_07_03) <= 5e-15


def test_s5_odd_and_rotation_invariant():
    rng = np.random.default_rng(17)
    pts = _disk_points(rng, 2000, 20.0)
    ks = rng.uniform(0.1, 10.0, 2000)
    assert np.abs(pw.s5(ks, -pts) + pw.s5(ks, pts)).max() <= 1e-12
    c, s = math.cos(2.0 * math.pi / 5.0), math.sin(2.0 * math.pi / 5.0)
    rot = pts @ np.array([[c, s], [-s, c]])
    assert np.abs(pw.s5(ks, rot) - pw.s5(ks, pts)).max() <= 1e-12


def test_p5_reference_values():
    assert pw.p5(1.0, (0.0, 0.0)) == 0.0
    # first factor is sin(pi) up to rounding of pi itself
    assert abs(pw.p5(1.0, (math.pi, 0.0))) <= 1e-15
    assert abs(pw.p5(1.0, (0.5, 0.5)) - P5_K1_05_05) <= 1e-15


def test_p5_odd_and_rotation_invariant():
    rng = np.random.default_rng(18)
    pts = _disk_points(rng, 2000, 20.0)
    ks = rng.uniform(0.1, 10.0, 2000)
    assert np.abs(pw.p5(ks, -pts) + pw.p5(ks, pts)).max() <= 1e-12
    c, s = math.cos(2.0 * math.pi / 5.0), math.sin(2.0 * math.pi / 5.0)
    rot = pts @ np.array([[c, s], [-s, c]])
    assert np.abs(pw.p5(ks, rot) - pw.p5(ks, pts)).max() <= 1e-12


def test_s2_values():
    assert abs(pw.s2(1.0, (math.pi / 2.0, math.pi / 2.0)) - 2.0) <= 1e-15
    assert pw.s2(1.0, (0.0, 0.0)) == 0.0
    got = pw.s2(2.0, (0.3, -0.4))
    want = math.sin(0.6) + math.sin(-0.8)
    assert abs(got - want) <= 1e-15


def test_field_broadcasting_and_scalar_return():
    pts = np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]])
    ks = np.array([1.0, 2.0, 3.0])
    batch = pw.s5(ks, pts)
    assert batch.shape == (3,)
    # batched and single-point evaluation may route through different BLAS
    # kernels; agreement is to rounding, not bit-for-bit
    for i in range(3):
        assert abs(batch[i] - pw.s5(float(ks[i]), pts[i])) <= 1e-14
    assert isinstance(pw.s5(1.0, (0.1, 0.2)), float)
    assert isinstance(pw.p5(1.0, (0.1, 0.2)), float)


def test_wavenumber_validation():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            pw.s5(bad, (0.1, 0.2))
    with pytest.raises(ValueError):
        pw.s5(np.array([1.0, -2.0]), np.zeros((2, 2)))


def test_fib_small_values():
    assert [pw.fib(n) for n in range(5)] == [1, 1, 2, 3, 5]
    assert pw.fib(10) == 89


def test_fib_recurrence_matches_closed_form():
    sqrt5 = math.sqrt(5.0)
    for n in range(41):
        closed = round((TAU ** (n + 1) - (-1.0 / TAU) ** (n + 1)) / sqrt5)
        assert pw.fib(n) == closed
        if n >= 2:
            assert pw.fib(n) == pw.fib(n - 1) + pw.fib(n - 2)


def test_fib_closed_form_helper_tracks_exact_values():
    for n in range(0, 71, 7):
        exact = pw.fib(n)
        assert abs(pw.fib_closed_form(n) - exact) <= 1e-9 * exact


def test_fib_rejects_bad_input():
    with pytest.raises(ValueError):
        pw.fib(-1)
    with pytest.raises(ValueError):
        pw.fib(2.5)
    with pytest.raises(ValueError):
        pw.fib(True)


def test_series_spec_validation():
    with pytest.raises(ValueError):
        pw.SeriesSpec(k=0.0, num_terms=3)
    with pytest.raises(ValueError):
        pw.SeriesSpec(k=1.0, num_terms=-1)
    with pytest.raises(ValueError):
        pw.SeriesSpec(k=1.0, num_terms=2.5)


def test_series_partial_edge_cases():
    spec = pw.SeriesSpec(k=1.0, num_terms=0)
    assert pw.series_partial(spec, (0.4, -0.2)) == 0.0
    spec = pw.SeriesSpec(k=1.0, num_terms=12)
    assert pw.series_partial(spec, (0.0, 0.0)) == 0.0
    pts = np.zeros((7, 2)) + 0.25
    assert pw.series_partial(spec, pts).shape == (7,)


def test_series_partial_converges_within_bound():
    rng = np.random.default_rng(5)
    pts = _disk_points(rng, 500, 10.0)
    norms = np.hypot(pts[:, 0], pts[:, 1])
    target = pw.s5(1.0, pts)
    for n in (0, 2, 5, 8):
        approx = pw.series_partial(pw.SeriesSpec(k=1.0, num_terms=n), pts)
        bounds = np.array(
            [pw.tail_bound(1.0, float(r), n).scaled_bound for r in norms]
        )
        assert np.all(np.abs(target - approx) <= bounds)


def test_tail_bound_reference_value():
    tb = pw.tail_bound(1.0, 1.0, 0)
    assert abs(tb.raw_bound - RAW_BOUND_1_1_0) <= 1e-17
    assert tb.scaled_bound == 16.0 * tb.raw_bound
    assert abs(tb.C - (1.0 / math.sqrt(5.0)) * 0.5**5) <= 1e-18
    assert tb.radius == 1.0


def test_tail_bound_zero_radius():
    tb = pw.tail_bound(1.0, 0.0, 3)
    assert tb.raw_bound == 0.0
    assert tb.scaled_bound == 0.0


def test_tail_bound_geometric_decay():
    prev = None
    for n in range(20):
        raw = pw.tail_bound(2.0, 5.0, n).raw_bound
        if prev is not None:
            assert raw <= prev * TAU**-4 * (1.0 + 1e-12)
        prev = raw


def test_tail_bound_validation():
    with pytest.raises(ValueError):
        pw.tail_bound(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        pw.tail_bound(1.0, -1.0, 0)
    with pytest.raises(ValueError):
        pw.tail_bound(1.0, 1.0, -1)


def test_terms_for_tolerance_minimal():
    assert pw.terms_for_tolerance(1.0, 0.0, 1e-12) == 0
    n = pw.terms_for_tolerance(1.0, 1.0, 1e-6)
    assert n == 6
    for k, r, eps in ((1.0, 5.0, 1e-8), (3.0, 10.0, 1e-4), (0.5, 2.0, 1e-10)):
        n = pw.terms_for_tolerance(k, r, eps)
        assert pw.tail_bound(k, r, n).scaled_bound <= eps
        if n > 0:
            assert pw.tail_bound(k, r, n - 1).scaled_bound > eps
    with pytest.raises(ValueError):
        pw.terms_for_tolerance(1.0, 1.0, 0.0)


def test_grad_s5_reference_value():
    g = pw.grad_s5(1.0, (0.3, 0.8))
    assert abs(g[0] - GRAD_S5_K1_03_08[0]) <= 2e-15
    assert abs(g[1] - GRAD_S5_K1_03_08[1]) <= 2e-15
    assert np.abs(pw.grad_s5(1.0, (0.0, 0.0))).max() <= 1e-15


def test_grad_s5_matches_finite_differences():
    rng = np.random.default_rng(101)
    pts = _disk_points(rng, 100, 3.0)
    ks = rng.uniform(0.5, 2.0, 100)
    h = 1e-6
    for p, k in zip(pts, ks):
        g = pw.grad_s5(float(k), p)
        fx = (pw.s5(float(k), p + [h, 0]) - pw.s5(float(k), p - [h, 0])) / (2 * h)
        fy = (pw.s5(float(k), p + [0, h]) - pw.s5(float(k), p - [0, h])) / (2 * h)
        assert abs(g[0] - fx) <= 1e-6
        assert abs(g[1] - fy) <= 1e-6


def test_hess_s5_matches_finite_differences():
    rng = np.random.default_rng(102)
    pts = _disk_points(rng, 100, 3.0)
    ks = rng.uniform(0.5, 2.0, 100)
    h = 1e-5
    for p, k in zip(pts, ks):
        kf = float(k)
        hess = pw.hess_s5(kf, p)
        assert hess.shape == (2, 2)
        assert abs(hess[0, 1] - hess[1, 0]) <= 1e-15
        for i, j in ((0, 0), (0, 1), (1, 1)):
            ei = np.array([h if i == 0 else 0.0, h if i == 1 else 0.0])
            gp = pw.grad_s5(kf, p + ei)
            gm = pw.grad_s5(kf, p - ei)
            assert abs(hess[i, j] - (gp[j] - gm[j]) / (2 * h)) <= 1e-5


def test_hess_s5_trace_identity():
    # trace H = -k^2 * s5 because each direction is a unit vector
    rng = np.random.default_rng(103)
    pts = _disk_points(rng, 200, 5.0)
    for p in pts:
        hess = pw.hess_s5(1.3, p)
        assert abs(np.trace(hess) + 1.3**2 * pw.s5(1.3, p)) <= 1e-12


def test_grad_hess_s2_match_finite_differences():
    rng = np.random.default_rng(104)
    pts = _disk_points(rng, 100, 3.0)
    h = 1e-6
    for p in pts:
        g = pw.grad_s2(1.0, p)
        fx = (pw.s2(1.0, p + [h, 0]) - pw.s2(1.0, p - [h, 0])) / (2 * h)
        fy = (pw.s2(1.0, p + [0, h]) - pw.s2(1.0, p - [0, h])) / (2 * h)
        assert abs(g[0] - fx) <= 1e-6
        assert abs(g[1] - fy) <= 1e-6
        hess = pw.hess_s2(1.0, p)
        assert hess[0, 1] == 0.0 and hess[1, 0] == 0.0
        assert abs(hess[0, 0] + math.sin(p[0])) <= 1e-15
        assert abs(hess[1, 1] + math.sin(p[1])) <= 1e-15


def test_grad_batch_shapes():
    pts = np.zeros((6, 2)) + 0.3
    assert pw.grad_s5(1.0, pts).shape == (6, 2)
    assert pw.hess_s5(1.0, pts).shape == (6, 2, 2)
    assert pw.grad_s2(1.0, pts).shape == (6, 2)
    assert pw.hess_s2(1.0, pts).shape == (6, 2, 2)
