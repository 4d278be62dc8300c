"""Finite stand-ins for closed sets, the Hausdorff metric and the induced action."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .spaces import (
    COMPARISON_HORIZON,
    DomainMismatchError,
    MORSE_SQUARE,
    Point,
    SymbolicPoint,
    SystemSpec,
    TorusPoint,
    ball_key,
    circle_distance,
    dyadic_level,
    epsilon_net_prune,
    first_disagreement,
    folded_window,
    _fold_ranks,
    point_distance,
    shift_point,
)


def _system_of(points: Sequence[Point], system: SystemSpec | None) -> SystemSpec:
    p = points[0]
    if isinstance(p, SymbolicPoint):
        if system is not None and system != p.system:
            raise DomainMismatchError("points do not belong to the declared subshift")
        return p.system
    if system is None:
        from .spaces import FURSTENBERG
        return FURSTENBERG
    if system.is_subshift:
        raise DomainMismatchError("torus points in a subshift set")
    return system


def _dedupe(points: list[Point]) -> list[Point]:
    """Drop points at distance 0 (comparison horizon) from an earlier one; input is sorted."""
    if isinstance(points[0], TorusPoint):
        seen, out = set(), []
        for p in points:
            k = p.sort_key()
            if k not in seen:
                seen.add(k)
                out.append(p)
        return out
    unique = list(dict.fromkeys(points))
    if len(unique) == 1:
        return unique
    # group by a short central key; distance 0 needs at least that much agreement
    level = int(min(32, *(p.known_radius() for p in unique)))
    groups: dict[bytes, list[Point]] = {}
    for p in unique:
        groups.setdefault(ball_key(p, level), []).append(p)
    drop = set()
    for members in groups.values():
        for i, p in enumerate(members):
            if id(p) in drop:
                continue
            for q in members[i + 1:]:
                if id(q) not in drop and first_disagreement(p, q) is None:
                    drop.add(id(q))
    return [p for p in unique if id(p) not in drop]


class FiniteClosedSet:
    """A nonempty finite point list standing for a closed set at a given resolution.

    Points are sorted canonically and duplicates (distance 0 at the comparison
    horizon) removed, so equal sets compare equal.
    """

    __slots__ = ("system", "points", "resolution")

    def __init__(self, system: SystemSpec | None, points: Iterable[Point], resolution: float = 0.0):
        pts = list(points)
        if not pts:
            raise ValueError("a closed set needs at least one point")
        kinds = {type(p) for p in pts}
        if len(kinds) != 1:
            raise DomainMismatchError("mixed point types")
        self.system = _system_of(pts, system)
        if isinstance(pts[0], SymbolicPoint) and len({p.system for p in pts}) != 1:
            raise DomainMismatchError("points from different subshifts")
        pts.sort(key=lambda p: p.sort_key())
        self.points = tuple(_dedupe(pts))
        self.resolution = float(resolution)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteClosedSet) and self.system == other.system and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.system, self.points))

    def __repr__(self) -> str:
        inner = ", ".join(repr(p) for p in self.points[:6])
        more = f", ... ({len(self.points)} points)" if len(self.points) > 6 else ""
        return f"FiniteClosedSet([{inner}{more}], resolution={self.resolution:g})"

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.points[0], SymbolicPoint)

    def with_resolution(self, resolution: float) -> "FiniteClosedSet":
        return FiniteClosedSet(self.system, self.points, resolution)


def closed_set(points: Iterable[Point], resolution: float = 0.0, system: SystemSpec | None = None) -> FiniteClosedSet:
    return FiniteClosedSet(system, points, resolution)


@dataclass(frozen=True)
class BallCover:
    """Metric balls standing for the open sets of a Vietoris basic neighbourhood."""

    balls: tuple[tuple[Point, float], ...]

    def __post_init__(self):
        if not self.balls:
            raise ValueError("a cover needs at least one ball")
        if any(r <= 0 for _, r in self.balls):
            raise ValueError("ball radii must be positive")

    @classmethod
    def of(cls, *balls: tuple[Point, float]) -> "BallCover":
        return cls(tuple(balls))


def _check_pair(A: FiniteClosedSet, B: FiniteClosedSet) -> None:
    if A.system != B.system or type(A.points[0]) is not type(B.points[0]):
        raise DomainMismatchError("sets from different systems")


# ---------------------------------------------------------------- distances


def _stacked_windows(points: Sequence[SymbolicPoint], r: int) -> np.ndarray:
    out = np.zeros((len(points), 2 * r), dtype=np.uint8)
    for i, p in enumerate(points):
        w = folded_window(p, int(min(r, p.known_radius())))
        out[i, : len(w)] = w
    return out


def _symbolic_pairwise(P: Sequence[SymbolicPoint], Q: Sequence[SymbolicPoint]) -> np.ndarray:
    out = np.zeros((len(P), len(Q)))
    rad_p = np.array([min(COMPARISON_HORIZON, p.known_radius()) for p in P]).astype(np.int64)
    rad_q = np.array([min(COMPARISON_HORIZON, q.known_radius()) for q in Q]).astype(np.int64)
    lim = np.minimum(rad_p[:, None], rad_q[None, :])
    open_ = np.array([[p != q for q in Q] for p in P]) & (lim > 0)
    r = 16
    while open_.any():
        rows = np.flatnonzero(open_.any(axis=1))
        cols = np.flatnonzero(open_.any(axis=0))
        rr = int(min(r, lim[np.ix_(rows, cols)][open_[np.ix_(rows, cols)]].max()))
        wp = _stacked_windows([P[i] for i in rows], rr)
        wq = _stacked_windows([Q[j] for j in cols], rr)
        use = np.minimum(lim[np.ix_(rows, cols)], rr)
        diff = (wp[:, None, :] != wq[None, :, :]) & (np.arange(2 * rr) < 2 * use[..., None])
        has = diff.any(axis=2)
        first = diff.argmax(axis=2)
        sub_open = open_[np.ix_(rows, cols)]
        hit = sub_open & has
        out[np.ix_(rows, cols)] = np.where(hit, 2.0 ** -_fold_ranks(rr)[first].astype(float),
                                           out[np.ix_(rows, cols)])
        done = hit | (use >= lim[np.ix_(rows, cols)])
        open_[np.ix_(rows, cols)] = sub_open & ~done
        r *= 4
    return out


def pairwise_distances(P: Sequence[Point], Q: Sequence[Point]) -> np.ndarray:
    """Matrix of point distances, vectorised per phase space."""
    if not P or not Q:
        return np.zeros((len(P), len(Q)))
    if isinstance(P[0], TorusPoint):
        a = np.array([p.as_tuple() for p in P])
        b = np.array([q.as_tuple() for q in Q])
        dx = circle_distance(a[:, None, 0], b[None, :, 0])
        dy = circle_distance(a[:, None, 1], b[None, :, 1])
        return np.maximum(dx, dy)
    return _symbolic_pairwise(P, Q)


def _directed(dist: np.ndarray) -> tuple[float, float]:
    return float(dist.min(axis=1).max()), float(dist.min(axis=0).max())


def hausdorff(A: FiniteClosedSet, B: FiniteClosedSet) -> float:
    """``max(sup_a inf_b d, sup_b inf_a d)`` by direct evaluation."""
    _check_pair(A, B)
    return max(_directed(pairwise_distances(A.points, B.points)))


def hausdorff_brute(A: FiniteClosedSet, B: FiniteClosedSet) -> float:
    """Pure-Python double loop; reference for the vectorised kernel."""
    _check_pair(A, B)
    sysm = A.system
    ab = max(min(point_distance(sysm, a, b) for b in B.points) for a in A.points)
    ba = max(min(point_distance(sysm, a, b) for a in A.points) for b in B.points)
    return max(ab, ba)


def hausdorff_within(A: FiniteClosedSet, B: FiniteClosedSet, eps: float) -> bool:
    """``d_H(A, B) <= eps``; symbolic sets use ultrametric ball keys (no distances needed)."""
    _check_pair(A, B)
    if A.is_symbolic and eps < 1.0:
        level = dyadic_level(eps)
        try:
            return {ball_key(p, level) for p in A.points} == {ball_key(p, level) for p in B.points}
        except ValueError:
            pass
    return hausdorff(A, B) <= eps


def vietoris_contains(A: FiniteClosedSet, cover: BallCover) -> bool:
    """Every point of ``A`` in some (open) ball, and every ball meets ``A``."""
    centers = [c for c, _ in cover.balls]
    radii = np.array([r for _, r in cover.balls])
    if type(centers[0]) is not type(A.points[0]):
        raise DomainMismatchError("cover and set from different phase spaces")
    inside = pairwise_distances(list(A.points), centers) < radii[None, :]
    return bool(inside.any(axis=1).all() and inside.any(axis=0).all())


def induced_step(A: FiniteClosedSet, t: int) -> FiniteClosedSet:
    """``t A = {t a : a in A}`` for the shift or the skew map."""
    if t == 0:
        return A
    return FiniteClosedSet(A.system, [shift_point(p, t, A.system) for p in A.points], A.resolution)


def set_union(A: FiniteClosedSet, B: FiniteClosedSet) -> FiniteClosedSet:
    _check_pair(A, B)
    return FiniteClosedSet(A.system, A.points + B.points, min(A.resolution, B.resolution))


def prune_set(A: FiniteClosedSet, eps: float) -> FiniteClosedSet:
    return FiniteClosedSet(A.system, epsilon_net_prune(A.points, eps, A.system), max(A.resolution, eps))


def covering_radius(A: FiniteClosedSet, reference: FiniteClosedSet) -> float:
    """``sup_r inf_a d(r, a)``: how densely ``A`` covers the reference points."""
    _check_pair(A, reference)
    return float(pairwise_distances(reference.points, A.points).min(axis=1).max())


# ---------------------------------------------------------------- stand-ins for X


def torus_grid(m: int, system: SystemSpec | None = None) -> FiniteClosedSet:
    """The ``m x m`` grid; every torus point lies within ``1/(2m)`` of it."""
    g = np.arange(m) / m
    pts = [TorusPoint(float(x), float(y)) for x in g for y in g]
    return FiniteClosedSet(system, pts, 1.0 / (2 * m))


def subshift_standin(eps: float, system: SystemSpec = MORSE_SQUARE) -> FiniteClosedSet:
    """A contiguous block ``{sigma**k a : 0 <= k < K}`` standing for the whole subshift.

    ``K`` is the longest gap between successive occurrences of any word on
    ``|i| < level`` (``2**-level <= eps``) along a long stretch of ``a``, plus
    one, so every block of ``K`` consecutive shifts sees every such word.
    The block is then within ``eps`` of the subshift and, up to resolution,
    invariant under the shift.
    """
    from .symbolic import A as base_a

    if system != MORSE_SQUARE:
        raise ValueError("the stand-in is built for the Morse-square subshift")
    level = max(1, dyadic_level(eps))
    span = 2 * level - 1
    stretch = 64 * 4 ** int(np.ceil(np.log(span) / np.log(4)) + 2)
    seq = base_a.letters(-(level - 1), stretch + level)
    win = np.lib.stride_tricks.sliding_window_view(seq, span)[: stretch + 1]
    _, ids = np.unique(win, axis=0, return_inverse=True)
    ids = ids.ravel()
    order = np.lexsort((np.arange(len(ids)), ids))
    pos, sid = order, ids[order]
    same = sid[1:] == sid[:-1]
    gaps = np.diff(pos)[same]
    first = np.full(ids.max() + 1, -1)
    np.maximum.at(first, ids, -np.arange(len(ids)))
    K = int(max(gaps.max() if len(gaps) else 1, (-first).max() + 1)) + 1
    pts = [shift_point(base_a, k) for k in range(K)]
    return FiniteClosedSet(system, pts, 2.0 ** -level)


def space_standin(system: SystemSpec, eps: float) -> FiniteClosedSet:
    if system.is_subshift:
        return subshift_standin(eps, system)
    return torus_grid(int(np.ceil(1.0 / (2 * eps))), system)


# ---------------------------------------------------------------- orbit profiles


def _symbolic_profile(P, Q, times: np.ndarray, radius: int) -> np.ndarray:
    """``d(sigma**n p, q)`` for p in P, q in Q, n in times (contiguous), capped at radius."""
    n0, n1 = int(times[0]), int(times[-1])
    out = np.zeros((len(P), len(Q), len(times)))
    ys = [q.letters(-(radius - 1), radius) for q in Q]
    for i, p in enumerate(P):
        seq = p.letters(n0 - (radius - 1), n1 + radius)
        for j, y in enumerate(ys):
            res = np.zeros(len(times))
            open_ = np.ones(len(times), dtype=bool)
            for r in range(radius):
                for k in ((0,) if r == 0 else (-r, r)):
                    off = k + radius - 1
                    mism = seq[off: off + len(times)] != y[off]
                    newly = open_ & mism
                    res[newly] = 2.0 ** -r
                    open_ &= ~mism
            out[i, j] = res
    return out


def _torus_profile(P, Q, times: np.ndarray, system: SystemSpec) -> np.ndarray:
    from .torus import skew_power_many

    out = np.zeros((len(P), len(Q), len(times)))
    for i, p in enumerate(P):
        px, py = skew_power_many(system, times, p.x, p.y)
        for j, q in enumerate(Q):
            out[i, j] = np.maximum(circle_distance(px, q.x), circle_distance(py, q.y))
    return out


def distance_profile(x: Point, y: Point, n0: int, n1: int, radius: int = 32,
                     system: SystemSpec | None = None) -> np.ndarray:
    """``d(T**n x, y)`` for ``n = n0 .. n1`` (symbolic values resolved on ``|k| < radius``)."""
    times = np.arange(n0, n1 + 1, dtype=np.int64)
    if isinstance(x, SymbolicPoint):
        return _symbolic_profile([x], [y], times, radius)[0, 0]
    from .spaces import FURSTENBERG
    return _torus_profile([x], [y], times, system or FURSTENBERG)[0, 0]


def _level_profile(P, Q, times: np.ndarray, radius: int) -> np.ndarray:
    """``d_H(sigma**n P, Q)`` from ultrametric key sets: ``<= 2**-m`` iff the ``|k| < m`` word sets agree."""
    lo, hi = int(times[0]), int(times[-1])
    seqs = [p.letters(lo - (radius - 1), hi + radius) for p in P]
    qs = [q.letters(-(radius - 1), radius) for q in Q]
    out = np.ones(len(times))
    alive = np.ones(len(times), dtype=bool)
    for m in range(1, radius):
        span = 2 * m - 1
        off = radius - m
        wins = [np.lib.stride_tricks.sliding_window_view(s[off: off + len(times) + span - 1], span) for s in seqs]
        ref = np.array([q[off: off + span] for q in qs])
        _, ids = np.unique(np.concatenate(wins + [ref]), axis=0, return_inverse=True)
        ids = ids.ravel()
        nt = len(times)
        width = int(ids.max()) + 1
        present = np.zeros((nt, width), dtype=bool)
        for i in range(len(P)):
            present[np.arange(nt), ids[i * nt:(i + 1) * nt]] = True
        target = np.zeros(width, dtype=bool)
        target[ids[len(P) * nt:]] = True
        equal = (present == target).all(axis=1)
        alive &= equal
        out[alive] = 2.0 ** -m
        if not alive.any():
            break
    out[alive] = 0.0
    return out


def hausdorff_profile(A: FiniteClosedSet, B: FiniteClosedSet, n0: int, n1: int,
                      radius: int = 32) -> np.ndarray:
    """``d_H(T**n A, B)`` for ``n = n0 .. n1``.

    Symbolic distances are resolved on ``|k| < radius`` only: values at or
    below ``2**-(radius - 1)`` come back as 0.
    """
    _check_pair(A, B)
    times = np.arange(n0, n1 + 1, dtype=np.int64)
    if A.is_symbolic:
        return _level_profile(A.points, B.points, times, radius)
    prof = _torus_profile(A.points, B.points, times, A.system)
    return np.maximum(prof.min(axis=1).max(axis=0), prof.min(axis=0).max(axis=0))


__all__ = [
    "BallCover", "FiniteClosedSet", "closed_set", "covering_radius", "hausdorff", "hausdorff_brute",
    "distance_profile", "hausdorff_profile", "hausdorff_within", "induced_step", "pairwise_distances", "prune_set",
    "set_union", "space_standin", "subshift_standin", "torus_grid", "vietoris_contains",
]
