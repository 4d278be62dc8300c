import itertools

import pytest
from hypothesis import given, strategies as st

from quasilab.hyperspace import closed_set
from quasilab.spaces import SymbolicPoint, SystemSpec, point_distance, shift_point
from quasilab.symbolic import (
    A, ABAR, B, BASES, BBAR, IDENTITY, MORSE_Q, TABLES, U1, U2, V1, V2,
    UnsupportedSeedError, apply_to_finite_set, base_point, find_orbit_match, fixed_point,
    idempotent_apply, idempotent_compose, in_fixed_set, is_distal, offorbit_panel,
    orbit_position, panel_shifts, quasi_order_check, sigma, substitute, tables_agree,
)

# the four tables written out independently of the package
EXPECTED = {
    "u1": {"a": "b", "abar": "bbar", "b": "b", "bbar": "bbar"},
    "v1": {"a": "bbar", "abar": "b", "b": "b", "bbar": "bbar"},
    "u2": {"a": "a", "abar": "abar", "b": "a", "bbar": "abar"},
    "v2": {"a": "a", "abar": "abar", "b": "abar", "bbar": "a"},
}


def test_substitution_rules():
    assert substitute(MORSE_Q, "0") == "0110"
    assert substitute(MORSE_Q, "1") == "1001"
    assert MORSE_Q.length == 4


@pytest.mark.parametrize("name", BASES)
def test_base_points_are_fixed_by_the_substitution(name):
    p = base_point(name)
    for m in (1, 2, 8, 33):
        inner = "".join("01"[c] for c in p.letters(-m, m))
        assert substitute(MORSE_Q, inner) == "".join("01"[c] for c in p.letters(-4 * m, 4 * m))


def test_fixed_point_seeds():
    assert fixed_point((0, 1)) == B
    with pytest.raises(UnsupportedSeedError):
        fixed_point((2, 0))
    with pytest.raises(UnsupportedSeedError):
        fixed_point("x")
    # under 0 -> 01, 1 -> 10 every rule ends in the other letter: no seed extends to the left
    other = SystemSpec.subshift({0: "01", 1: "10"})
    for seed in itertools.product((0, 1), repeat=2):
        with pytest.raises(UnsupportedSeedError):
            fixed_point(seed, other)


def test_tables_match_written_values():
    for name, t in TABLES.items():
        assert t.mapping == EXPECTED[name]
        assert IDENTITY.mapping == {b: b for b in BASES}


def test_sixteen_compositions_match_dict_composition():
    for s, t in itertools.product(TABLES, repeat=2):
        got = idempotent_compose(TABLES[s], TABLES[t]).mapping
        want = {b: EXPECTED[s][EXPECTED[t][b]] for b in BASES}
        assert got == want, (s, t)


def test_relations():
    assert tables_agree(idempotent_compose(U1, V1), V1)
    assert tables_agree(idempotent_compose(V1, U1), U1)
    assert tables_agree(idempotent_compose(U2, V2), V2)
    assert tables_agree(idempotent_compose(V2, U2), U2)
    assert quasi_order_check(U1, V1) == "equivalent"
    assert quasi_order_check(U2, V2) == "equivalent"
    assert quasi_order_check(U1, U2) == "incomparable"
    assert quasi_order_check(IDENTITY, U1) == "s_above_t"
    assert quasi_order_check(U1, IDENTITY) == "t_above_s"
    for t in TABLES.values():
        assert tables_agree(idempotent_compose(t, t), t, offorbit_panel())


def test_fixed_sets():
    for t in (U1, V1):
        assert [in_fixed_set(t, p) for p in (A, ABAR, B, BBAR)] == [False, False, True, True]
    for t in (U2, V2):
        assert [in_fixed_set(t, p) for p in (A, ABAR, B, BBAR)] == [True, True, False, False]
    assert not any(is_distal(p) for p in (A, B, ABAR, BBAR))


def test_finite_set_images():
    assert apply_to_finite_set(U1, closed_set([A, B])) == closed_set([B])
    assert apply_to_finite_set(V1, closed_set([A, B])) == closed_set([B, BBAR])


@given(st.sampled_from(BASES), st.integers(-10 ** 6, 10 ** 6), st.sampled_from(list(TABLES)))
def test_tables_commute_with_the_shift(name, k, t):
    p = base_point(name)
    assert idempotent_apply(TABLES[t], sigma(p, k)) == sigma(idempotent_apply(TABLES[t], p), k)


@given(st.sampled_from(BASES), st.integers(-4096, 4096))
def test_orbit_position_of_explicit_windows(name, k):
    p = base_point(name, k)
    word = "".join("01"[c] for c in p.letters(-200, 200))
    q = SymbolicPoint.from_word(word, origin=200)
    pos = orbit_position(q)
    assert pos is not None
    # the match is exact on the whole window even if it picks a different (base, shift)
    assert point_distance(None, base_point(*pos), q) == 0.0


def test_orbit_position_exact_for_long_windows():
    p = base_point("abar", -1234)
    q = SymbolicPoint.from_word("".join("01"[c] for c in p.letters(-3000, 3000)), origin=3000)
    assert orbit_position(q) == ("abar", -1234)
    assert orbit_position(p) == ("abar", -1234)


def test_short_far_windows_still_match_some_orbit_point():
    # every explicit window of moderate radius occurs near the distinguished orbits
    far = base_point("a", 2 ** 61 + 987654321)
    q = SymbolicPoint.from_word("".join("01"[c] for c in far.letters(-64, 64)), origin=64)
    assert orbit_position(q) is not None


def test_offorbit_panel_is_deterministic_and_certified():
    panel = offorbit_panel()
    assert panel == offorbit_panel()
    assert len(panel) == 8 and len(set(panel_shifts())) == 8
    assert panel_shifts(32)[:8] == panel_shifts()
    for p, n in zip(panel, panel_shifts()):
        assert orbit_position(p) is None
        assert n > 2 ** 62
        assert point_distance(None, p, base_point("a", n)) == 0.0
        assert is_distal(p)
        for t in TABLES.values():
            assert idempotent_apply(t, p) is p


def test_find_orbit_match_prefers_nearest():
    target = shift_point(B, 10)
    assert find_orbit_match(target, -40, 40) == ("b", 10)
    assert find_orbit_match(target, -40, 40, center=12) == ("b", 10)
    assert find_orbit_match(target, -40, 40, horizon=5) is None
