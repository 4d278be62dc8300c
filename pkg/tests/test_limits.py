import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasilab.hyperspace import (
    closed_set, covering_radius, hausdorff, induced_step, subshift_standin, torus_grid,
)
from quasilab.limits import (
    IDEMPOTENT, RAW, EmptyNetError, TimeNet, ap_set_test, cluster_set, compose_nets, constant_net,
    d_star_catalog_check, d_star_estimate, net_catalog, pair_distances, point_record,
    prolongation_point, proximal_pair, quasifactor_check, recurrence_report, snap_image,
    timenet_for_idempotent, torus_identity_net,
)
from quasilab.spaces import BASE_SEEDS, FURSTENBERG, TorusPoint, complement, point_distance, shift_point
from quasilab.symbolic import (
    A, ABAR, B, BASES, BBAR, IDENTITY, TABLES, U1, V1, apply_to_finite_set, base_point,
    offorbit_panel, panel_shifts,
)

from oracles import dyadic_distance, morse_letter

EPS = 2 ** -6


def oracle_agrees(src_seed, src_shift, dst_seed, n, w):
    return all(morse_letter(src_seed, src_shift + n + k) == morse_letter(dst_seed, k + 0) for k in range(-w, w))


def constraints_hold(table, n, w):
    for b in BASES:
        if not oracle_agrees(BASE_SEEDS[b], 0, BASE_SEEDS[table.mapping[b]], n, w):
            return False
    for N in panel_shifts():
        if not all(morse_letter((1, 1), N + n + k) == morse_letter((1, 1), N + k) for k in range(-w, w)):
            return False
    return True


def test_u1_net_first_time_against_scan_oracle():
    net = timenet_for_idempotent(U1, [2])
    (n,) = net.times
    assert net.kind == IDEMPOTENT and net.certificate == ((2, n),)
    assert constraints_hold(U1, n, 2)
    # nothing closer to 0 works, on either side
    assert not any(constraints_hold(U1, s * m, 2) for m in range(1, abs(n)) for s in (1, -1))
    assert all(base_point(b, n).letters(-2, 2).tolist() == base_point(U1.mapping[b]).letters(-2, 2).tolist()
               for b in BASES)


@pytest.mark.parametrize("name", list(TABLES))
def test_default_nets_are_certified(name):
    net = timenet_for_idempotent(TABLES[name])
    assert net.truncation is None and len(net) == 5
    assert [abs(t) for t in net.times] == sorted(abs(t) for t in net.times)
    for w, n in net.certificate:
        assert constraints_hold(TABLES[name], n, w)


def test_identity_table_has_no_net():
    # a and b differ exactly on the negative indices, so no nonzero shift fixes both on a window
    with pytest.raises(EmptyNetError) as err:
        timenet_for_idempotent(IDENTITY, [2], horizon=4 ** 6)
    best = err.value.best
    assert best["radius"] == 2 and best["satisfied"] < best["total"] == 12 and best["failed"]


def test_empty_and_truncated_nets():
    empty = timenet_for_idempotent(U1, [])
    assert empty.empty and empty.kind == IDEMPOTENT
    with pytest.raises(EmptyNetError):
        timenet_for_idempotent(U1, [2], horizon=1000)
    short = timenet_for_idempotent(U1, [2, 4], horizon=20000)
    assert short.times == (1616,) and "radius 4" in short.truncation
    with pytest.raises(ValueError):
        timenet_for_idempotent(U1, [4, 2])
    with pytest.raises(ValueError):
        cluster_set(closed_set([A]), empty, EPS)


def test_time_net_validation():
    with pytest.raises(ValueError):
        TimeNet((3, 0, 5), IDEMPOTENT)
    with pytest.raises(ValueError):
        TimeNet((3, -2), IDEMPOTENT)
    with pytest.raises(ValueError):
        TimeNet((1,), "weird")
    assert TimeNet((5, -5, 0), RAW).times == (5, -5, 0)


sets = st.lists(st.tuples(st.sampled_from(BASES), st.integers(-6, 6)), min_size=1, max_size=4).map(
    lambda spec: closed_set([base_point(n, s) for n, s in spec]))


@given(sets, st.integers(-8, 8))
def test_constant_net_is_exact(S, t):
    c = cluster_set(S, constant_net(t), EPS)
    assert hausdorff(c.result, induced_step(S, t)) == 0.0 and c.converged


@given(st.lists(st.tuples(st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True)), min_size=1, max_size=5),
       st.integers(-8, 8))
def test_constant_net_is_exact_on_torus(xy, t):
    S = closed_set([TorusPoint(x, y) for x, y in xy])
    c = cluster_set(S, constant_net(t), 1e-6)
    assert hausdorff(c.result, induced_step(S, t)) <= 1e-12


def test_constant_compositions():
    S = closed_set([A, base_point("bbar", 3)])
    for pairing in ("iterated", "levelwise"):
        net = compose_nets(constant_net(3), constant_net(-5), pairing)
        assert cluster_set(S, net, EPS).result == induced_step(S, -2)
    assert compose_nets(constant_net(3), constant_net(4), "levelwise").times == (7,)
    with pytest.raises(ValueError):
        compose_nets(constant_net(1), constant_net(2), "sideways")


def test_composed_idempotent_nets():
    u1, v1 = timenet_for_idempotent(U1), timenet_for_idempotent(V1)
    assert cluster_set(closed_set([A]), compose_nets(u1, v1), EPS).result == closed_set([BBAR])
    assert cluster_set(closed_set([A]), compose_nets(v1, u1), EPS).result == closed_set([B])
    assert cluster_set(closed_set([A]), compose_nets(u1, u1), EPS).result == closed_set([B])


def test_cluster_set_examples():
    u1 = timenet_for_idempotent(U1)
    c = cluster_set(closed_set([A]), u1, EPS)
    assert c.result == closed_set([B]) and c.converged and c.witness[-1] == 0.0
    assert cluster_set(closed_set([A, ABAR]), u1, EPS).result == closed_set([B, BBAR])


def test_non_convergence_is_flagged():
    c = cluster_set(closed_set([A]), TimeNet((1, 1000), RAW), EPS)
    assert not c.converged and c.witness[-1] > EPS
    assert c.as_dict()["converged"] is False


@settings(max_examples=25)
@given(sets, st.sampled_from(list(TABLES)))
def test_table_image_contained_in_cluster(S, name):
    c = cluster_set(S, timenet_for_idempotent(TABLES[name]), EPS)
    image = apply_to_finite_set(TABLES[name], S)
    for p in image.points:
        assert min(point_distance(None, p, q) for q in c.result.points) <= EPS


def test_snap_image_only_for_late_times():
    assert snap_image(A, 5, EPS) == shift_point(A, 5)
    n = timenet_for_idempotent(U1).times[-1]
    assert snap_image(A, n, EPS) == B
    far = base_point("a", panel_shifts()[0])
    # late net times fix the panel points on growing windows, so the image snaps back onto the point
    assert point_distance(None, shift_point(far, n), far) <= EPS / 4
    assert snap_image(far, n, EPS) == far


def test_panel_points_are_fixed_by_every_net():
    for t in TABLES:
        net = timenet_for_idempotent(TABLES[t])
        for N in panel_shifts():
            p = base_point("a", N)
            assert cluster_set(closed_set([p]), net, 2 ** -5).result == closed_set([p])
    assert len(offorbit_panel()) == 8


def test_torus_grid_cluster_stays_dense():
    net = torus_identity_net()
    eps = 0.05
    G = torus_grid(20)
    c = cluster_set(G, net, eps)
    assert c.converged
    assert covering_radius(c.result, torus_grid(40)) <= 3 * eps


def oracle_returns(points, eps, horizon):
    """Return times of the set via letter comparisons only."""
    out = []
    for n in range(1, horizon + 1):
        d = 0.0
        for p in points:
            d = max(d, min(dyadic_distance(p.seed, q.seed, p.shift + n, q.shift, horizon=12) for q in points))
        for q in points:
            d = max(d, min(dyadic_distance(p.seed, q.seed, p.shift + n, q.shift, horizon=12) for p in points))
        if d <= eps:
            out.append(n)
    return out


def test_recurrence_matches_oracle_prefix():
    r = recurrence_report(closed_set([B, BBAR]), 2 ** -4, 4 ** 5)
    assert r.return_times[:40] == oracle_returns([B, BBAR], 2 ** -4, 4 ** 5)[:40]
    assert r.gaps == list(np.diff([0] + r.return_times))
    rows = list(r.rows())
    assert rows[0][0] == 1 and len(rows) == 4 ** 5


def test_recurrence_dichotomy():
    good = recurrence_report(closed_set([B, BBAR]), 2 ** -4, 4 ** 8)
    assert good.syndetic and good.max_gap <= 4 ** 5
    bad = recurrence_report(closed_set([A, B]), 2 ** -4, 4 ** 8)
    assert bad.verdict == "gap-growth"
    assert bad.second_half_max_gap >= 4 * bad.first_half_max_gap
    with pytest.raises(ValueError):
        recurrence_report(closed_set([A]), 2 ** -4, 8)


def test_recurrence_of_space_standins():
    X = subshift_standin(2 ** -4)
    r = recurrence_report(X, 2 ** -4, 4 ** 5)
    assert r.syndetic and set(r.gaps) == {1}
    T = recurrence_report(torus_grid(10), 0.1, 256)
    assert T.syndetic


def test_ap_set_examples():
    assert ap_set_test([B, BBAR], 2 ** -4, 4 ** 7).syndetic
    assert ap_set_test([A], 2 ** -4, 4 ** 7).syndetic
    assert ap_set_test([A, B], 2 ** -4, 4 ** 7).verdict == "gap-growth"
    with pytest.raises(ValueError):
        ap_set_test([A, TorusPoint(0, 0)], 0.1, 100)
    with pytest.raises(ValueError):
        ap_set_test([], 0.1, 100)


def test_proximality_examples():
    r = proximal_pair(A, B, 10 ** 4)
    assert r.verdict == "proximal-at-horizon"
    d = pair_distances(A, B, 40)
    assert all(d[n] == 2.0 ** -(n + 1) for n in range(1, 33))
    far = proximal_pair(A, ABAR, 10 ** 4)
    assert far.verdict == "distal-at-horizon" and far.liminf_estimate == 1.0
    assert np.all(far.distances == 1.0)
    same = proximal_pair(A, A, 100)
    assert same.verdict == "proximal-at-horizon" and same.liminf_estimate == 0.0
    fibre = proximal_pair(TorusPoint(0.3, 0.1), TorusPoint(0.3, 0.6), 10 ** 4)
    assert fibre.verdict == "distal-at-horizon"
    mid = proximal_pair(A, B, 3, threshold=2 ** -6)
    assert mid.verdict == "undecided"
    with pytest.raises(ValueError):
        pair_distances(A, TorusPoint(0, 0), 3)


def test_prolongation_contains_orbit_and_is_dense():
    eps = 2 ** -5
    D = prolongation_point(A, 2 ** -3, 16, 4096, eps, seed=5)
    orbit = closed_set([shift_point(A, n) for n in range(0, 200)])
    for p in orbit.points:
        assert min(point_distance(None, p, q) for q in D.points) <= eps / 2
    assert covering_radius(D, subshift_standin(eps / 4)) <= eps
    T = prolongation_point(TorusPoint(0, 0), 0.01, 32, 4000, 0.05, seed=5)
    assert covering_radius(T, torus_grid(40)) <= 0.05
    with pytest.raises(ValueError):
        prolongation_point(A, 0.0, 4, 10, eps)


def test_d_star_examples():
    eps = 2 ** -4
    X = subshift_standin(eps)
    assert len(d_star_estimate(X, 256, eps)) == 1
    pairs = d_star_estimate(closed_set([B, BBAR]), 4 ** 6, eps)
    assert len(pairs) > 1
    for M in pairs:
        assert len(M) == 2 and closed_set([complement(p) for p in M.points]) == M
    mixed = d_star_estimate(closed_set([A, B]), 4 ** 6, eps)
    assert len(mixed) > len(pairs)
    assert min(hausdorff(M, closed_set([B])) for M in mixed) <= eps
    T = d_star_estimate(torus_grid(8), 20, 0.2)
    assert len(T) >= 1


def test_d_star_catalog_cross_check():
    res = d_star_catalog_check(closed_set([B, BBAR]), 4 ** 6, 2 ** -4)
    assert res["passed"] and res["catalog_to_orbit"] <= 2 ** -3
    assert all(res["converged"].values())


def test_quasifactor_examples():
    eps = 2 ** -4
    X = subshift_standin(eps)
    assert quasifactor_check([X], eps, 256).minimal
    pairs = d_star_estimate(closed_set([B, BBAR]), 4 ** 6, eps)
    assert quasifactor_check(pairs, eps, 4 ** 6).minimal
    mixed = d_star_estimate(closed_set([A, B]), 4 ** 6, eps)
    v = quasifactor_check(mixed, eps, 4 ** 6)
    assert v.verdict == "not-minimal" and v.witness is not None and v.witness_gap > eps
    with pytest.raises(ValueError):
        quasifactor_check([], eps, 10)


def test_catalog_and_records():
    cat = net_catalog()
    assert {"u1-net", "v1-net", "u2-net", "v2-net", "const[-8]", "const[8]"} <= set(cat)
    assert len(cat) == 4 + 17
    assert point_record(A) == {"shift": 0, "base": "a"}
    assert point_record(TorusPoint(0.5, 0.25)) == {"x": 0.5, "y": 0.25}
    assert torus_identity_net().times == tuple(sorted(torus_identity_net().times))
    assert FURSTENBERG.alpha > 0
