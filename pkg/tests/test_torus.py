from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasilab.spaces import FURSTENBERG, GOLDEN_ALPHA, SystemSpec, TorusPoint
from quasilab.torus import (
    approach_distances, identity_scores, random_torus_points, search_identity_times,
    seed_for_target, skew_inverse_step, skew_power, skew_power_many, skew_power_signed,
    skew_step, to_fixed, torus_distance_along, verify_dT_density,
)

from oracles import circle, skew_iterate

unit = st.floats(0, 1, exclude_max=True)
ALPHA = Fraction(GOLDEN_ALPHA)


def torus_gap(p: TorusPoint, x, y) -> float:
    return max(circle(p.x - float(x)), circle(p.y - float(y)))


@given(unit, unit, st.integers(0, 150))
def test_closed_form_matches_exact_iteration(x, y, n):
    ex, ey = skew_iterate(ALPHA, Fraction(x), Fraction(y), n)
    assert torus_gap(skew_power(FURSTENBERG, n, TorusPoint(x, y)), ex, ey) < 1e-15


@given(unit, unit, st.integers(-10 ** 6, 10 ** 6))
def test_signed_power_inverts(x, y, n):
    p = TorusPoint(x, y)
    q = skew_power_signed(FURSTENBERG, -n, skew_power_signed(FURSTENBERG, n, p))
    # the intermediate point is rounded to doubles; undoing n steps scales that by |n|
    assert torus_gap(q, p.x, p.y) <= (abs(n) + 2) * 2.0 ** -52


def test_steps_and_inverse():
    p = TorusPoint(0.3, 0.9)
    q = skew_inverse_step(FURSTENBERG, skew_step(FURSTENBERG, p))
    assert torus_gap(q, p.x, p.y) < 1e-15
    r = skew_inverse_step(FURSTENBERG, p)
    assert torus_gap(skew_power_signed(FURSTENBERG, -1, p), r.x, r.y) < 1e-15
    with pytest.raises(ValueError):
        skew_power(FURSTENBERG, -1, p)
    with pytest.raises(ValueError):
        skew_step(SystemSpec.subshift({0: "0110", 1: "1001"}), p)


def test_closed_form_against_float_iteration_long():
    rng = np.random.default_rng(0)
    for x, y in rng.random((5, 2)):
        p = TorusPoint(x, y)
        xs, ys = skew_power_many(FURSTENBERG, np.arange(10 ** 4 + 1), x, y)
        worst = 0.0
        for n in range(10 ** 4 + 1):
            worst = max(worst, circle(xs[n] - p.x), circle(ys[n] - p.y))
            p = skew_step(FURSTENBERG, p)
        assert worst < 1e-6


@given(unit, unit, st.lists(st.integers(0, 10 ** 9), min_size=1, max_size=20))
def test_vectorised_power_matches_exact(x, y, ns):
    xs, ys = skew_power_many(FURSTENBERG, np.array(ns), x, y)
    for n, u, v in zip(ns, xs, ys):
        q = skew_power_signed(FURSTENBERG, n, TorusPoint(x, y))
        # x is rounded to 2**-64 in fixed point, then multiplied by n
        tol = (n + 2) * 2.0 ** -63 + 2.0 ** -52
        assert circle(u - q.x) <= tol and circle(v - q.y) <= tol


@given(unit, unit, st.integers(1, 10 ** 7))
def test_seed_lands_where_promised(x, y, n):
    xn = Fraction(seed_for_target(FURSTENBERG, x, y, n))
    fx = (xn + n * ALPHA) % 1
    fy = (n * xn + Fraction(n * (n - 1), 2) * ALPHA) % 1
    want_x = Fraction(x) + (Fraction(y) - Fraction(x)) / n + Fraction(n + 1, 2) * ALPHA
    want_y = n * Fraction(x) + Fraction(y) - Fraction(x)
    # x_n is rounded to a double, and multiplying by n magnifies that rounding
    assert circle(float(fx - want_x)) < 1e-12
    assert circle(float(fy - want_y)) < n * 2.0 ** -52 + 1e-15


def test_seed_requires_positive_time():
    with pytest.raises(ValueError):
        seed_for_target(FURSTENBERG, 0.1, 0.2, 0)


def brute_identity_times(x: float, horizon: int, tol: float):
    X, H = Fraction(x), ALPHA / 2
    out = []
    for n in range(2, horizon + 1):
        s = max(circle(float(((n - 1) * X) % 1)), circle(float(((n + 1) * H) % 1)))
        if s <= tol:
            out.append(n)
    return out


@pytest.mark.parametrize("x", [0.0, 0.123, 0.5, 0.87])
def test_identity_search_matches_brute_scan(x):
    res = search_identity_times(FURSTENBERG, x, 3000, 0.05)
    assert res.times.tolist() == brute_identity_times(x, 3000, 0.05)
    assert np.all(res.scores <= 0.05)


def test_identity_search_is_thread_count_independent():
    a = search_identity_times(FURSTENBERG, 0.31, 3 * 2 ** 20 + 17, 0.01, workers=1)
    b = search_identity_times(FURSTENBERG, 0.31, 3 * 2 ** 20 + 17, 0.01, workers=4)
    assert a.times.tolist() == b.times.tolist()
    assert a.scores.tobytes() == b.scores.tobytes()
    assert a.best == b.best


def test_identity_search_records_are_running_minima():
    res = search_identity_times(FURSTENBERG, 0.7, 10 ** 5, 0.05)
    t, s = res.records()
    assert len(t) and np.all(np.diff(s) <= 0) and np.all(np.diff(t) > 0)
    empty = search_identity_times(FURSTENBERG, 0.7, 3, 1e-9)
    assert not empty.found and empty.best[0] in (2, 3)
    with pytest.raises(ValueError):
        search_identity_times(FURSTENBERG, 0.7, 1, 0.1)


@given(unit, unit, st.lists(st.integers(1, 10 ** 7), min_size=1, max_size=10))
def test_approach_distances_match_exact(x, y, ns):
    got = approach_distances(FURSTENBERG, x, y, np.array(ns))
    for n, d in zip(ns, got):
        xn = Fraction(x) + (Fraction(y) - Fraction(x)) / n - Fraction(n - 1, 2) * ALPHA
        fx = xn + n * ALPHA
        fy = n * xn + Fraction(n * (n - 1), 2) * ALPHA
        want = max(circle(float((fx - Fraction(x)) % 1)), circle(float((fy - Fraction(y)) % 1)))
        assert abs(d - want) < 1e-9


def test_density_pipeline_small():
    targets = [(0.2, 0.7), (0.9, 0.1)]
    recs = verify_dT_density(FURSTENBERG, targets, 2 * 10 ** 5, 0.05)
    for r in recs:
        assert r.found and r.approach <= 0.1
        # end-to-end check with exact arithmetic
        p = skew_power_signed(FURSTENBERG, r.n, TorusPoint(r.seed, 0.0))
        assert abs(torus_gap(p, *r.target) - r.approach) < 1e-9
        assert set(r.as_dict()) >= {"target", "found", "n", "approach", "seed", "hits"}
    miss = verify_dT_density(FURSTENBERG, [(0.3, 0.3)], 3, 1e-9)[0]
    assert not miss.found and miss.n is None


def test_identity_scores_and_pair_distances():
    panel = random_torus_points(3, 1)
    times = np.array([1, 5, 40, 12345])
    sc = identity_scores(FURSTENBERG, panel, times)
    for n, s in zip(times, sc):
        worst = circle(float(n * ALPHA))
        for p in panel:
            q = skew_power_signed(FURSTENBERG, int(n), p)
            worst = max(worst, torus_gap(q, p.x, p.y))
        assert abs(s - worst) < 1e-12
    d = torus_distance_along(FURSTENBERG, TorusPoint(0.3, 0.1), TorusPoint(0.3, 0.6), 100)
    assert np.allclose(d, 0.5)
    assert to_fixed(0.5) == 2 ** 63
