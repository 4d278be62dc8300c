"""The skew product ``T(x, y) = (x + alpha, x + y)`` on the two-torus.

Long-horizon work uses exact arithmetic: scalars go through ``Fraction`` (a
float is an exact dyadic rational) and vectorised scans use 64-bit fixed
point, i.e. integers mod ``2**64`` with numpy's wrapping ``uint64`` products.
Both reduce mod 1 once, at the end, so nothing drifts with the horizon.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .spaces import FURSTENBERG, SystemSpec, TorusPoint, circle_distance, reduce_mod1

SkewSystem = SystemSpec

Q = 1 << 64
_CHUNK = 1 << 20


def _check(s: SystemSpec) -> float:
    if s.is_subshift:
        raise ValueError("expected a torus skew system")
    return s.alpha


def to_fixed(v: float) -> int:
    """``v mod 1`` as an integer multiple of ``2**-64`` (exact for most floats)."""
    return round(Fraction(v) * Q) % Q


def from_fixed(q) -> float | np.ndarray:
    if isinstance(q, np.ndarray):
        return q.astype(np.float64) / float(Q)
    return reduce_mod1((int(q) % Q) / Q)


def fixed_circle(q: np.ndarray) -> np.ndarray:
    """Circle distance to 0 of fixed-point values (uint64 array)."""
    q = np.asarray(q, dtype=np.uint64)
    return np.minimum(q, -q).astype(np.float64) / float(Q)


def skew_step(s: SystemSpec, p: TorusPoint) -> TorusPoint:
    alpha = _check(s)
    return TorusPoint(p.x + alpha, p.x + p.y)


def skew_inverse_step(s: SystemSpec, p: TorusPoint) -> TorusPoint:
    alpha = _check(s)
    return TorusPoint(p.x - alpha, p.y - p.x + alpha)


def skew_power_signed(s: SystemSpec, n: int, p: TorusPoint) -> TorusPoint:
    """``T**n`` for any integer ``n``; the closed form holds for negative ``n`` too."""
    alpha = Fraction(_check(s))
    n = int(n)
    x, y = Fraction(p.x), Fraction(p.y)
    nx = x + n * alpha
    ny = y + n * x + Fraction(n * (n - 1), 2) * alpha
    return TorusPoint(float(nx % 1), float(ny % 1))


def skew_power(s: SystemSpec, n: int, p: TorusPoint) -> TorusPoint:
    """``T**n(x, y) = (x + n alpha, y + n x + n(n-1)/2 alpha)``, evaluated exactly.

    >>> skew_power(FURSTENBERG, 0, TorusPoint(0.25, 0.5))
    TorusPoint(x=0.25, y=0.5)
    """
    if n < 0:
        raise ValueError("skew_power takes n >= 0; use skew_power_signed for inverses")
    return skew_power_signed(s, n, p)


def skew_power_many(s: SystemSpec, n: np.ndarray, x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``T**n(x, y)`` over an integer array of times (fixed-point exact)."""
    n = np.asarray(n, dtype=np.int64)
    A = np.uint64(to_fixed(_check(s)))
    X, Y = np.uint64(to_fixed(x)), np.uint64(to_fixed(y))
    nu = n.astype(np.uint64)
    tri = (n * (n - 1) // 2).astype(np.uint64)
    with np.errstate(over="ignore"):
        qx = X + nu * A
        qy = Y + nu * X + tri * A
    return from_fixed(qx), from_fixed(qy)


def seed_for_target(s: SystemSpec, x: float, y: float, n: int) -> float:
    """First coordinate ``x_n`` with ``T**n(x_n, 0)`` landing at ``(x + (y-x)/n + (n+1)alpha/2, n x + y - x)``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    alpha = Fraction(_check(s))
    fx, fy = Fraction(x), Fraction(y)
    xn = fx + (fy - fx) / n - Fraction(n - 1, 2) * alpha
    return float(xn % 1)


# ---------------------------------------------------------------- searches


@dataclass
class TimeSearchResult:
    """All times in ``[2, horizon]`` scoring at most ``tolerance``.

    ``records()`` gives the subsequence of running-best scores, which is the
    part that can serve as a net with improving certificate.
    """

    times: np.ndarray
    scores: np.ndarray
    tolerance: float
    horizon: int
    best: tuple[int, float] = (0, float("inf"))
    x: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return len(self.times) > 0

    def records(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.found:
            return self.times, self.scores
        run = np.minimum.accumulate(self.scores)
        keep = self.scores <= run
        return self.times[keep], self.scores[keep]


def _identity_scores(lo: int, hi: int, X: np.uint64, H: np.uint64) -> np.ndarray:
    n = np.arange(lo, hi, dtype=np.uint64)
    with np.errstate(over="ignore"):
        s1 = fixed_circle((n - np.uint64(1)) * X)
        s2 = fixed_circle((n + np.uint64(1)) * H)
    return np.maximum(s1, s2)


def search_identity_times(s: SystemSpec, x: float, horizon: int, tol: float,
                          workers: int = 1) -> TimeSearchResult:
    """Scan ``n`` in ``[2, horizon]`` for ``(n-1)x ~ 0`` and ``(n+1)alpha/2 ~ 0`` mod 1.

    The score is the max of the two circle distances.  Chunks may be scored on
    several threads; results are merged in chunk order, so the output is the
    same for every ``workers`` value.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    alpha = _check(s)
    X = np.uint64(to_fixed(x))
    # alpha is a float in (0, 1), so alpha/2 is exact in fixed point
    H = np.uint64(round(Fraction(alpha) / 2 * Q))
    bounds = [(lo, min(lo + _CHUNK, horizon + 1)) for lo in range(2, horizon + 1, _CHUNK)]

    def work(b):
        sc = _identity_scores(b[0], b[1], X, H)
        i = int(np.argmin(sc))
        hit = np.flatnonzero(sc <= tol)
        return hit + b[0], sc[hit], (b[0] + i, float(sc[i]))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    times = np.concatenate([p[0] for p in parts]).astype(np.int64)
    scores = np.concatenate([p[1] for p in parts])
    best = min((p[2] for p in parts), key=lambda t: (t[1], t[0]))
    return TimeSearchResult(times, scores, float(tol), int(horizon), best, float(x))


def approach_distances(s: SystemSpec, x: float, y: float, times: np.ndarray) -> np.ndarray:
    """``d(T**n(x_n, 0), (x, y))`` for each ``n``, in fixed point throughout.

    ``x_n`` is formed as ``x + (y - x)/n - (n - 1) alpha/2``; the division is
    rounded to ``2**-63`` so the error after multiplying by ``n`` stays far below
    the error budget for ``n <= 10**9``.
    """
    times = np.asarray(times, dtype=np.int64)
    if len(times) == 0:
        return np.zeros(0)
    alpha = _check(s)
    A = np.uint64(to_fixed(alpha))
    H = np.uint64(round(Fraction(alpha) / 2 * Q))
    X, Y = to_fixed(x), to_fixed(y)
    half_diff = np.int64((Y - X) // 2)  # |Y - X| < 2**64
    step = (half_diff + times // 2) // times  # rounded (y - x)/(2n) in units of 2**-64
    nu = times.astype(np.uint64)
    tri = (times * (times - 1) // 2).astype(np.uint64)
    with np.errstate(over="ignore"):
        Xn = np.uint64(X) + step.astype(np.uint64) * np.uint64(2) - (nu - np.uint64(1)) * H
        fx = Xn + nu * A
        fy = nu * Xn + tri * A
        dx = fixed_circle(fx - np.uint64(X))
        dy = fixed_circle(fy - np.uint64(Y))
    return np.maximum(dx, dy)


@dataclass
class DensityRecord:
    target: tuple[float, float]
    found: bool
    n: int | None
    approach: float | None
    seed: float | None
    hits: int
    best_search: tuple[int, float]

    def as_dict(self) -> dict:
        return {
            "target": list(self.target), "found": self.found, "n": self.n,
            "approach": self.approach, "seed": self.seed, "hits": self.hits,
            "best_search": list(self.best_search),
        }


def verify_dT_density(s: SystemSpec, targets, horizon: int, tol: float, workers: int = 1) -> list[DensityRecord]:
    """Best approach of ``T**n(x_n, 0)`` to each target over the searched times.

    Targets without any time under ``tol`` come back with ``found=False`` and
    the best search score, never dropped.
    """
    out = []
    for x, y in targets:
        x, y = reduce_mod1(x), reduce_mod1(y)
        res = search_identity_times(s, x, horizon, tol, workers=workers)
        if not res.found:
            out.append(DensityRecord((x, y), False, None, None, None, 0, res.best))
            continue
        d = approach_distances(s, x, y, res.times)
        i = int(np.argmin(d))
        n = int(res.times[i])
        out.append(DensityRecord((x, y), True, n, float(d[i]), seed_for_target(s, x, y, n),
                                 len(res.times), res.best))
    return out


def identity_scores(s: SystemSpec, panel, times: np.ndarray) -> np.ndarray:
    """``max_p d(T**n p, p)`` over a finite panel, for each ``n`` (fixed point)."""
    times = np.asarray(times, dtype=np.int64)
    A = np.uint64(to_fixed(_check(s)))
    nu = times.astype(np.uint64)
    tri = (times * (times - 1) // 2).astype(np.uint64)
    with np.errstate(over="ignore"):
        score = fixed_circle(nu * A)
        for p in panel:
            X = np.uint64(to_fixed(p.x))
            score = np.maximum(score, fixed_circle(nu * X + tri * A))
    return score


def random_torus_points(count: int, seed: int) -> list[TorusPoint]:
    rng = np.random.default_rng(seed)
    return [TorusPoint(float(u), float(v)) for u, v in rng.random((count, 2))]


def torus_distance_along(s: SystemSpec, p: TorusPoint, q: TorusPoint, horizon: int) -> np.ndarray:
    """``d(T**n p, T**n q)`` for ``n = 0 .. horizon``."""
    n = np.arange(horizon + 1)
    px, py = skew_power_many(s, n, p.x, p.y)
    qx, qy = skew_power_many(s, n, q.x, q.y)
    return np.maximum(circle_distance(px, qx), circle_distance(py, qy))


__all__ = [
    "DensityRecord", "FURSTENBERG", "SkewSystem", "TimeSearchResult", "approach_distances",
    "identity_scores", "random_torus_points", "search_identity_times", "seed_for_target",
    "skew_inverse_step", "skew_power", "skew_power_many", "skew_power_signed", "skew_step",
    "to_fixed", "from_fixed", "torus_distance_along", "verify_dT_density",
]
