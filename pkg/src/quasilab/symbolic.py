"""The Morse-square substitution system and its four minimal idempotents.

The idempotents ``u1, v1, u2, v2`` are the identity off the orbits of the
four fixed points ``a, b, abar, bbar`` and act on those orbits by the tables
below, equivariantly in the shift.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .spaces import (
    BASE_SEEDS,
    COMPARISON_HORIZON,
    MORSE_SQUARE,
    ORBIT_HORIZON,
    SystemSpec,
    SymbolicPoint,
    point_distance,
    shift_point,
)

BASES = ("a", "b", "abar", "bbar")
PANEL_SEED = 20240601


class UnsupportedSeedError(ValueError):
    pass


@dataclass(frozen=True)
class Substitution:
    """Letter-to-word rules over ``{0, 1}``."""

    rules: tuple[str, ...]

    @property
    def system(self) -> SystemSpec:
        return SystemSpec.subshift(self.rules)

    @property
    def length(self) -> int:
        return len(self.rules[0])


MORSE_Q = Substitution(MORSE_SQUARE.rules)


def substitute(s: Substitution, w: str) -> str:
    return "".join(s.rules[int(c)] for c in w)


def fixed_point(seed: tuple[int, int], system: SystemSpec = MORSE_SQUARE) -> SymbolicPoint:
    """Two-sided fixed point extending ``seed`` at indices ``-1, 0``.

    >>> from quasilab.spaces import window
    >>> window(fixed_point((1, 1)), 4)
    '10011001'
    """
    try:
        left, right = (int(c) for c in seed)
    except (TypeError, ValueError):
        raise UnsupportedSeedError(f"seed must be a pair of letters, got {seed!r}") from None
    if left not in (0, 1) or right not in (0, 1):
        raise UnsupportedSeedError(f"seed letters must be 0 or 1, got {seed!r}")
    if system.rules[right][0] != str(right) or system.rules[left][-1] != str(left):
        raise UnsupportedSeedError(f"seed {seed!r} does not extend to a two-sided fixed point")
    return SymbolicPoint(seed=(left, right), system=system)


def base_point(name: str, shift: int = 0) -> SymbolicPoint:
    return SymbolicPoint(seed=BASE_SEEDS[name], shift=shift)


A, B, ABAR, BBAR = (base_point(n) for n in BASES)


# ---------------------------------------------------------------- orbits


@lru_cache(maxsize=256)
def _base_bytes(name: str, lo: int, hi: int) -> bytes:
    return base_point(name).letters(lo, hi).tobytes()


def find_orbit_match(p: SymbolicPoint, lo: int, hi: int, horizon: int = ORBIT_HORIZON,
                     center: int = 0) -> tuple[str, int] | None:
    """Pair ``(base, k)`` with ``sigma**k(base)`` equal to ``p`` on ``[lo, hi)``, ``|k - center| <= horizon``.

    The smallest ``|k - center|`` wins; ties go to the smaller ``k`` and then
    to the earlier base in ``BASES``.
    """
    pattern = p.letters(lo, hi).tobytes()
    best: tuple[int, int, int] | None = None
    for bi, name in enumerate(BASES):
        hay = _base_bytes(name, lo + center - horizon, hi + center + horizon)
        j = hay.find(pattern)
        while j != -1:
            d = j - horizon
            cand = (abs(d), d, bi)
            if best is None or cand < best:
                best = cand
            if d > best[0]:
                break  # later occurrences are farther out
            j = hay.find(pattern, j + 1)
    if best is None:
        return None
    return BASES[best[2]], center + best[1]


def orbit_position(p: SymbolicPoint) -> tuple[str, int] | None:
    """Which distinguished orbit ``p`` lies on, as ``(base, k)`` with ``p = sigma**k(base)``.

    Seed points of the Morse-square system are placed exactly.  An explicit
    window is declared on an orbit iff it matches ``sigma**k(base)`` on its
    whole known extent for some ``|k| <= ORBIT_HORIZON``.
    """
    if p.system != MORSE_SQUARE:
        raise ValueError("orbit identification is defined for the Morse-square system only")
    if not p.is_explicit:
        return p.base, p.shift
    lo, hi = (int(v) for v in p.known_extent())
    # a long word matches only where its central part does
    r = 2 ** 10
    if hi - lo > 4 * r and lo < -r and hi > r:
        if find_orbit_match(p, -r, r) is None:
            return None
    return find_orbit_match(p, lo, hi)


def offorbit_panel(count: int = 8, radius: int = 2 ** 15, seed: int = PANEL_SEED) -> tuple[SymbolicPoint, ...]:
    """Explicit windows of ``sigma**N(a)`` for pseudo-random huge ``N``, certified off-orbit.

    Candidates whose window matches a distinguished orbit within the orbit
    horizon are rejected.  The shifts used are recoverable from
    :func:`panel_shifts` with the same arguments.
    """
    return tuple(p for p, _ in _panel(count, radius, seed))


def panel_shifts(count: int = 8, radius: int = 2 ** 15, seed: int = PANEL_SEED) -> tuple[int, ...]:
    return tuple(n for _, n in _panel(count, radius, seed))


@lru_cache(maxsize=8)
def _panel(count: int, radius: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = 2 ** 62 + int(rng.integers(0, 2 ** 62))
        word = A.letters(n - radius, n + radius).tobytes()
        p = SymbolicPoint(word=word, origin=radius)
        if orbit_position(p) is None:
            out.append((p, n))
    return tuple(out)


# ---------------------------------------------------------------- idempotents


@dataclass(frozen=True)
class IdempotentTable:
    """Action on the distinguished orbits; identity elsewhere."""

    name: str
    images: tuple[tuple[str, str], ...]

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.images)

    def __call__(self, p: SymbolicPoint) -> SymbolicPoint:
        return idempotent_apply(self, p)

    def __repr__(self) -> str:
        return f"IdempotentTable({self.name}: " + ", ".join(f"{k}->{v}" for k, v in self.images) + ")"


def _table(name: str, **images: str) -> IdempotentTable:
    return IdempotentTable(name, tuple((b, images[b]) for b in BASES))


U1 = _table("u1", a="b", abar="bbar", b="b", bbar="bbar")
V1 = _table("v1", a="bbar", abar="b", b="b", bbar="bbar")
U2 = _table("u2", a="a", abar="abar", b="a", bbar="abar")
V2 = _table("v2", a="a", abar="abar", b="abar", bbar="a")
IDENTITY = _table("e", a="a", abar="abar", b="b", bbar="bbar")
TABLES = {t.name: t for t in (U1, V1, U2, V2)}


def idempotent_apply(t: IdempotentTable, p: SymbolicPoint) -> SymbolicPoint:
    pos = orbit_position(p)
    if pos is None:
        return p
    base, k = pos
    return base_point(t.mapping[base], k)


def idempotent_compose(s: IdempotentTable, t: IdempotentTable) -> IdempotentTable:
    """The map ``p -> s(t(p))``; again identity off the orbits and shift-equivariant."""
    m_s, m_t = s.mapping, t.mapping
    return _table(s.name + t.name, **{b: m_s[m_t[b]] for b in BASES})


def tables_agree(s: IdempotentTable, t: IdempotentTable,
                 samples: Iterable[SymbolicPoint] = ()) -> bool:
    """Pointwise agreement on the four bases and on the given sample points."""
    if s.mapping != t.mapping:
        return False
    return all(idempotent_apply(s, p) == idempotent_apply(t, p) for p in samples)


def quasi_order_check(s: IdempotentTable, t: IdempotentTable) -> str:
    """``s > t`` when ``s t = t``; both directions make them equivalent."""
    s_above = idempotent_compose(s, t).mapping == t.mapping
    t_above = idempotent_compose(t, s).mapping == s.mapping
    if s_above and t_above:
        return "equivalent"
    if s_above:
        return "s_above_t"
    if t_above:
        return "t_above_s"
    return "incomparable"


def in_fixed_set(t: IdempotentTable, p: SymbolicPoint) -> bool:
    image = idempotent_apply(t, p)
    if image == p:
        return True
    if p.is_explicit or image.is_explicit:
        return point_distance(None, image, p) == 0.0
    return False


def is_distal(p: SymbolicPoint, tables: Sequence[IdempotentTable] = (U1, V1, U2, V2)) -> bool:
    """Fixed by every minimal idempotent."""
    return all(in_fixed_set(t, p) for t in tables)


def apply_to_finite_set(t: IdempotentTable, A):
    """Elementwise image of a finite closed set, duplicates merged."""
    from .hyperspace import FiniteClosedSet

    return FiniteClosedSet(A.system, [idempotent_apply(t, p) for p in A.points], A.resolution)


def sigma(p: SymbolicPoint, n: int = 1) -> SymbolicPoint:
    return shift_point(p, n)


__all__ = [
    "A", "ABAR", "B", "BASES", "BBAR", "COMPARISON_HORIZON", "IDENTITY", "IdempotentTable",
    "MORSE_Q", "Substitution", "TABLES", "U1", "U2", "UnsupportedSeedError", "V1", "V2",
    "apply_to_finite_set", "base_point", "find_orbit_match", "fixed_point", "idempotent_apply",
    "idempotent_compose", "in_fixed_set", "is_distal", "offorbit_panel", "orbit_position",
    "panel_shifts", "quasi_order_check", "sigma", "substitute", "tables_agree",
]
