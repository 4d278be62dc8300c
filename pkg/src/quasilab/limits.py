"""Time nets, cluster sets along them, and the recurrence / proximality / quasifactor probes.

A time net here is a finite list of times, increasing in absolute value,
whose late entries approximate an element of the enveloping semigroup.
Cluster sets stand in for prolongations of a set ``A`` along the net: the
images ``T**n A`` for late ``n`` in the net are pruned, identified with
nearby orbit points, and accepted only once two successive partial results
agree within ``eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .hyperspace import (
    FiniteClosedSet,
    distance_profile,
    hausdorff,
    hausdorff_profile,
)
from .spaces import (
    FURSTENBERG,
    MORSE_SQUARE,
    ORBIT_HORIZON,
    Point,
    SymbolicPoint,
    SystemSpec,
    TorusPoint,
    dyadic_level,
    epsilon_net_prune,
    prune_torus_array,
    shift_point,
)
from .symbolic import (
    BASES,
    IdempotentTable,
    base_point,
    find_orbit_match,
    offorbit_panel,
    panel_shifts,
)
from .torus import identity_scores, random_torus_points, skew_power_many

IDEMPOTENT = "idempotent-approx"
IDENTITY = "identity-approx"
RAW = "raw"

DEFAULT_RADII = (2, 4, 8, 16, 32)
DEFAULT_NET_HORIZON = 4 ** 11
PANEL_SIZE = 8
SUBSHIFT_PROXIMAL = 2.0 ** -10
TORUS_PROXIMAL = 1e-3


class EmptyNetError(RuntimeError):
    """No time satisfies the constraints at the smallest requested radius."""

    def __init__(self, message: str, best: dict):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class TimeNet:
    """Finite stand-in for a net of times.

    ``times`` are nonzero and strictly increasing in absolute value for
    idempotent and identity nets (the sign records which side of the orbit the
    approximation lives on).  ``inner`` is applied first when clustering, which
    is how composed nets are evaluated.
    """

    times: tuple[int, ...]
    kind: str = RAW
    certificate: tuple[tuple, ...] = ()
    label: str = ""
    inner: "TimeNet | None" = None
    truncation: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(int(t) for t in self.times))
        if self.kind not in (IDEMPOTENT, IDENTITY, RAW):
            raise ValueError(f"unknown net kind {self.kind!r}")
        if self.kind != RAW:
            mags = [abs(t) for t in self.times]
            if any(m == 0 for m in mags) or any(b <= a for a, b in zip(mags, mags[1:])):
                raise ValueError("net times must be nonzero and strictly increasing in |t|")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def empty(self) -> bool:
        return not self.times

    def as_dict(self) -> dict:
        return {
            "label": self.label, "kind": self.kind, "times": list(self.times),
            "certificate": [list(c) for c in self.certificate],
            "truncation": self.truncation,
            "inner": self.inner.as_dict() if self.inner is not None else None,
        }


# ---------------------------------------------------------------- idempotent nets


def _panel_constraints(count: int, seed: int | None):
    """Panel points as underlying infinite sequences ``sigma**N a`` (certified off-orbit windows)."""
    kwargs = {} if seed is None else {"seed": seed}
    offorbit_panel(count, **kwargs)
    return [base_point("a", n) for n in panel_shifts(count, **kwargs)]


def _constraints(table: IdempotentTable, panel_count: int, panel_seed: int | None):
    out = [(f"base {b}", base_point(b), base_point(table.mapping[b])) for b in BASES]
    for i, p in enumerate(_panel_constraints(panel_count, panel_seed)):
        out.append((f"panel {i}", p, p))
    return out


def _scan_direction(constraints, radii, horizon: int, sign: int):
    """Hits per radius for ``n = sign * 1 .. sign * horizon``, each sorted by ``|n|``."""
    wmax = radii[-1]
    mags = np.arange(1, horizon + 1, dtype=np.int64)
    seqs, targets = [], []
    for _, src, dst in constraints:
        if sign > 0:
            seq = src.letters(1 - wmax, horizon + wmax)
        else:
            seq = src.letters(-horizon - wmax, wmax - 1)[::-1].copy()
        seqs.append(seq)
        targets.append(dst.letters(-wmax, wmax))

    def offset(k):
        return k + wmax if sign > 0 else wmax - 1 - k

    cand = np.arange(horizon, dtype=np.int64)  # position m - 1 for |n| = m
    hits = {}
    prev = 0
    for w in radii:
        ks = [k for k in range(-w, w) if not -prev <= k < prev]
        for k in sorted(ks, key=abs):
            for seq, tgt in zip(seqs, targets):
                cand = cand[seq[cand + offset(k)] == tgt[k + wmax]]
                if not len(cand):
                    break
            if not len(cand):
                break
        hits[w] = sign * mags[cand]
        prev = w
    return hits


def _best_partial(constraints, radius: int, horizon: int) -> dict:
    """Time satisfying the most constraints at ``radius`` (smallest ``|n|`` on ties)."""
    best = {"n": None, "satisfied": -1, "failed": [], "radius": radius}
    for sign in (1, -1):
        counts = np.zeros(horizon, dtype=np.int64)
        oks = []
        for name, src, dst in constraints:
            if sign > 0:
                seq = src.letters(1 - radius, horizon + radius)
            else:
                seq = src.letters(-horizon - radius, radius - 1)[::-1].copy()
            tgt = dst.letters(-radius, radius)
            ok = np.ones(horizon, dtype=bool)
            for k in range(-radius, radius):
                off = k + radius if sign > 0 else radius - 1 - k
                ok &= seq[off: off + horizon] == tgt[k + radius]
            counts += ok
            oks.append(ok)
        m = int(np.argmax(counts))
        if counts[m] > best["satisfied"] or (counts[m] == best["satisfied"] and m + 1 < abs(best["n"] or 0)):
            best = {"n": sign * (m + 1), "satisfied": int(counts[m]), "radius": radius,
                    "failed": [c[0] for c, ok in zip(constraints, oks) if not ok[m]]}
    best["total"] = len(constraints)
    return best


def timenet_for_idempotent(table: IdempotentTable, radii: Sequence[int] = DEFAULT_RADII,
                           horizon: int = DEFAULT_NET_HORIZON, panel_count: int = PANEL_SIZE,
                           panel_seed: int | None = None) -> TimeNet:
    """Times ``n`` at which ``sigma**n`` reproduces the table on growing windows.

    For each radius ``W`` the chosen time is the smallest ``|n| <= horizon``
    beyond the previous one such that, on indices ``-W .. W-1``,
    ``sigma**n(base)`` matches ``table(base)`` for the four bases and
    ``sigma**n x`` matches ``x`` for every panel point.  Both signs of ``n`` are
    scanned; ties go to the positive time.
    """
    return _cached_net(table, tuple(int(r) for r in radii), int(horizon), int(panel_count), panel_seed)


@lru_cache(maxsize=32)
def _cached_net(table, radii, horizon, panel_count, panel_seed) -> TimeNet:
    label = f"{table.name}-net"
    if not radii:
        return TimeNet((), IDEMPOTENT, (), label)
    if list(radii) != sorted(set(radii)) or radii[0] < 1:
        raise ValueError("radii must be positive and strictly increasing")
    cons = _constraints(table, panel_count, panel_seed)
    pos = _scan_direction(cons, list(radii), horizon, 1)
    neg = _scan_direction(cons, list(radii), horizon, -1)
    times, cert, truncation = [], [], None
    prev = 0
    for w in radii:
        pool = np.concatenate([pos[w], neg[w]])
        pool = pool[np.abs(pool) > prev]
        if not len(pool):
            if not times:
                best = _best_partial(cons, radii[0], horizon)
                raise EmptyNetError(f"{label}: no time with |n| <= {horizon} at radius {w}", best)
            truncation = f"radius {w}: no time with {prev} < |n| <= {horizon}"
            break
        order = np.lexsort((-np.sign(pool), np.abs(pool)))
        n = int(pool[order[0]])
        times.append(n)
        cert.append((w, n))
        prev = abs(n)
    return TimeNet(tuple(times), IDEMPOTENT, tuple(cert), label, truncation=truncation)


def constant_net(t: int) -> TimeNet:
    """The net that is eventually ``t``; clustering along it is exactly ``T**t``."""
    return TimeNet((int(t),), RAW, (("constant", int(t)),), f"const[{int(t)}]")


def torus_identity_net(system: SystemSpec = FURSTENBERG, tolerances: Sequence[float] = (0.1, 0.05, 0.02, 0.01, 0.005),
                       horizon: int = 10 ** 7, panel_count: int = 2, seed: int = 7) -> TimeNet:
    """Times with ``T**n p ~ p`` for a seeded torus panel, with shrinking tolerances."""
    return _cached_torus_net(system, tuple(tolerances), int(horizon), int(panel_count), int(seed))


@lru_cache(maxsize=8)
def _cached_torus_net(system, tolerances, horizon, panel_count, seed) -> TimeNet:
    panel = random_torus_points(panel_count, seed)
    times, cert, prev = [], [], 0
    truncation = None
    chunk = 1 << 20
    for tol in tolerances:
        n = None
        for lo in range(prev + 1, horizon + 1, chunk):
            ts = np.arange(lo, min(lo + chunk, horizon + 1), dtype=np.int64)
            sc = identity_scores(system, panel, ts)
            hit = np.flatnonzero(sc <= tol)
            if len(hit):
                n, score = int(ts[hit[0]]), float(sc[hit[0]])
                break
        if n is None:
            if not times:
                raise EmptyNetError(f"torus identity net: nothing under {tol} up to {horizon}", {"tol": tol})
            truncation = f"tolerance {tol}: no time in ({prev}, {horizon}]"
            break
        times.append(n)
        cert.append((tol, n, score))
        prev = n
    return TimeNet(tuple(times), IDENTITY, tuple(cert), "torus-identity-net", truncation=truncation)


def compose_nets(p_net: TimeNet, q_net: TimeNet, pairing: str = "iterated") -> TimeNet:
    """A net for the product ``p q``: clustering along it applies ``q`` first, then ``p``.

    ``iterated`` clusters along ``q`` and then clusters that result along
    ``p``, which is right for any pair of nets.
    ``levelwise`` adds the times index by index; that is exact only when both
    nets are eventually constant (group elements).
    """
    if p_net.empty or q_net.empty:
        raise ValueError("both nets must be nonempty")
    label = f"{p_net.label}*{q_net.label}"
    if pairing == "iterated":
        inner = q_net if p_net.inner is None else compose_nets(p_net.inner, q_net)
        return TimeNet(p_net.times, p_net.kind, p_net.certificate, label, inner=inner,
                       truncation=p_net.truncation)
    if pairing == "levelwise":
        m = min(len(p_net), len(q_net))
        times = tuple(p_net.times[i] + q_net.times[i] for i in range(m))
        cert = (("levelwise", p_net.label, q_net.label),)
        return TimeNet(times, RAW, cert, label)
    raise ValueError(f"unknown pairing {pairing!r}")


# ---------------------------------------------------------------- cluster sets


@dataclass
class ClusterSet:
    result: FiniteClosedSet
    input: FiniteClosedSet
    net: TimeNet
    eps: float
    converged: bool
    witness: list[float]
    partial_sizes: list[int]
    inner: "ClusterSet | None" = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "eps": self.eps, "converged": self.converged, "witness": self.witness,
            "partial_sizes": self.partial_sizes, "net": self.net.as_dict(), "note": self.note,
            "input": [point_record(p) for p in self.input.points],
            "result": [point_record(p) for p in self.result.points],
        }


def snap_image(p: SymbolicPoint, n: int, eps: float) -> SymbolicPoint:
    """``sigma**n p``, identified with a point of the distinguished orbits near ``p`` when ``|n|`` is large.

    For Morse seed points and ``|n| > ORBIT_HORIZON`` the image is replaced by
    the ``sigma**k(base)`` with ``|k - p.shift| <= ORBIT_HORIZON`` nearest to
    ``p.shift`` that lies within ``eps / 4`` of it.  This is how a late net time
    ``sigma**n a ~ b`` is read as the exact point ``b``.  Small times, explicit
    windows and other systems are left exact.
    """
    img = shift_point(p, n)
    if p.system != MORSE_SQUARE or p.is_explicit or abs(n) <= ORBIT_HORIZON:
        return img
    level = dyadic_level(eps / 4)
    if level < 1:
        return img
    match = find_orbit_match(img, -(level - 1), level, center=p.shift)
    return img if match is None else base_point(*match)


def _partial(A: FiniteClosedSet, n: int, eps: float, prune: bool = True) -> FiniteClosedSet:
    if A.is_symbolic:
        pts = [snap_image(p, n, eps) for p in A.points]
    else:
        pts = [shift_point(p, n, A.system) for p in A.points]
    if not prune:
        return FiniteClosedSet(A.system, pts, A.resolution)
    return FiniteClosedSet(A.system, epsilon_net_prune(pts, eps, A.system), eps)


def cluster_set(A: FiniteClosedSet, net: TimeNet, eps: float) -> ClusterSet:
    """Finite-resolution prolongation of ``A`` along ``net``.

    Partial results ``P_j`` are the pruned, orbit-identified images
    ``T**{n_j} A``.  The answer is the pruned union of the trailing partials
    that lie within ``eps`` of the last one; it is marked converged only if the
    last two partials are within ``eps`` in the Hausdorff metric.  A net with
    a single time is a group element and yields the exact, unpruned image.
    """
    if net.empty:
        raise ValueError("cluster_set needs a nonempty net")
    if eps <= 0:
        raise ValueError("eps must be positive")
    inner = None
    source = A
    if net.inner is not None:
        inner = cluster_set(A, net.inner, eps)
        source = inner.result
    if len(net.times) == 1:
        # an eventually constant net is a group element: the image is already closed, nothing to merge
        exact = _partial(source, net.times[0], eps, prune=False)
        note = "single time: exact image"
        if inner is not None and not inner.converged:
            note = "inner cluster set did not converge"
        return ClusterSet(exact, A, net, eps, inner is None or inner.converged, [], [len(exact)], inner, note)
    partials = [_partial(source, n, eps) for n in net.times]
    witness = [hausdorff(a, b) for a, b in zip(partials, partials[1:])]
    last = partials[-1]
    tail = [last]
    for P in reversed(partials[:-1]):
        if hausdorff(P, last) > eps:
            break
        tail.append(P)
    pts = [p for P in tail for p in P.points]
    result = FiniteClosedSet(A.system, epsilon_net_prune(pts, eps, A.system), eps)
    converged = (not witness or witness[-1] <= eps) and (inner is None or inner.converged)
    note = ""
    if inner is not None and not inner.converged:
        note = "inner cluster set did not converge"
    return ClusterSet(result, A, net, eps, bool(converged), witness, [len(P) for P in partials], inner, note)


# ---------------------------------------------------------------- recurrence


@dataclass
class RecurrenceReport:
    eps: float
    horizon: int
    return_times: list[int]
    gaps: list[int]
    max_gap: int
    first_half_max_gap: int
    second_half_max_gap: int
    verdict: str
    distances: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    resolution: float = 0.0

    @property
    def syndetic(self) -> bool:
        return self.verdict == "syndetic-at-horizon"

    def as_dict(self) -> dict:
        return {
            "eps": self.eps, "horizon": self.horizon, "verdict": self.verdict,
            "returns": len(self.return_times), "max_gap": self.max_gap,
            "first_half_max_gap": self.first_half_max_gap,
            "second_half_max_gap": self.second_half_max_gap, "resolution": self.resolution,
        }

    def rows(self):
        """``(n, d_H, gap)`` per step; gap is filled at return times."""
        gap_at = dict(zip(self.return_times, self.gaps))
        for n, d in enumerate(self.distances, start=1):
            yield n, float(d), gap_at.get(n, "")


def _verdict_from_returns(returns: np.ndarray, horizon: int):
    ends = [int(n) for n in returns]
    gaps = list(np.diff([0] + ends).astype(int))
    half = horizon / 2
    first = max((g for g, e in zip(gaps, ends) if e <= half), default=0)
    second = [g for g, e in zip(gaps, ends) if e > half]
    second.append(horizon - ends[-1] if ends else horizon)
    second_max = max(second)
    verdict = "syndetic-at-horizon" if first > 0 and second_max <= 2 * first else "gap-growth"
    return ends, gaps, first, second_max, verdict


def _resolution_radius(eps: float) -> int:
    return max(dyadic_level(eps) + 4, 8)


def recurrence_report(A: FiniteClosedSet, eps: float, horizon: int) -> RecurrenceReport:
    """Returns of ``T**n A`` to within ``eps`` of ``A`` for ``1 <= n <= horizon``.

    The verdict is syndetic when the largest gap over the second half of the
    horizon (including the stretch after the last return) is at most twice the
    largest gap completed in the first half.
    """
    if horizon < 16:
        raise ValueError("horizon must be at least 16")
    radius = _resolution_radius(eps)
    d = hausdorff_profile(A, A, 1, horizon, radius=radius)
    returns = np.flatnonzero(d <= eps) + 1
    ends, gaps, first, second, verdict = _verdict_from_returns(returns, horizon)
    return RecurrenceReport(eps, horizon, ends, gaps, max(gaps + [horizon - (ends[-1] if ends else 0)]),
                            first, second, verdict, d, 2.0 ** -(radius - 1) if A.is_symbolic else 0.0)


def ap_set_test(points: Sequence[Point], eps: float, horizon: int,
                system: SystemSpec | None = None) -> RecurrenceReport:
    """Recurrence of the tuple as one point of the product flow (sup of coordinate distances)."""
    if not points:
        raise ValueError("need at least one point")
    if len({type(p) for p in points}) != 1:
        raise ValueError("all points must come from one system")
    if horizon < 16:
        raise ValueError("horizon must be at least 16")
    radius = _resolution_radius(eps)
    d = np.zeros(horizon)
    for p in points:
        d = np.maximum(d, distance_profile(p, p, 1, horizon, radius, system))
    returns = np.flatnonzero(d <= eps) + 1
    ends, gaps, first, second, verdict = _verdict_from_returns(returns, horizon)
    return RecurrenceReport(eps, horizon, ends, gaps, max(gaps + [horizon - (ends[-1] if ends else 0)]),
                            first, second, verdict, d)


# ---------------------------------------------------------------- proximality


@dataclass
class PairReport:
    liminf_estimate: float
    inf_over_horizon: float
    horizon: int
    verdict: str
    threshold: float
    distances: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def as_dict(self) -> dict:
        return {"liminf_estimate": self.liminf_estimate, "inf_over_horizon": self.inf_over_horizon,
                "horizon": self.horizon, "verdict": self.verdict, "threshold": self.threshold}


def pair_distances(x: Point, y: Point, horizon: int, radius: int = 64,
                   system: SystemSpec | None = None) -> np.ndarray:
    """``d(T**n x, T**n y)`` for ``n = 0 .. horizon``; symbolic values below ``2**-(radius-1)`` read 0."""
    if type(x) is not type(y):
        raise ValueError("points from different systems")
    if isinstance(x, TorusPoint):
        from .torus import torus_distance_along
        return torus_distance_along(system or FURSTENBERG, x, y, horizon)
    diff = x.letters(-(radius - 1), horizon + radius) != y.letters(-(radius - 1), horizon + radius)
    n = horizon + 1
    out = np.zeros(n)
    open_ = np.ones(n, dtype=bool)
    for r in range(radius):
        for k in ((0,) if r == 0 else (-r, r)):
            off = k + radius - 1
            mism = diff[off: off + n]
            out[open_ & mism] = 2.0 ** -r
            open_ &= ~mism
    return out


def proximal_pair(x: Point, y: Point, horizon: int, threshold: float | None = None,
                  system: SystemSpec | None = None) -> PairReport:
    """Classify a pair by the smallest distance along its orbit.

    Proximal when the minimum over ``0..horizon`` is at most the threshold;
    distal when even the minimum stays at least 16 times the threshold;
    undecided in between.  The tail infimum covers the second half of the horizon.
    """
    if threshold is None:
        threshold = SUBSHIFT_PROXIMAL if isinstance(x, SymbolicPoint) else TORUS_PROXIMAL
    d = pair_distances(x, y, horizon, system=system)
    est = float(d.min())
    tail = float(d[horizon // 2:].min())
    if est <= threshold:
        verdict = "proximal-at-horizon"
    elif est >= 16 * threshold:
        verdict = "distal-at-horizon"
    else:
        verdict = "undecided"
    return PairReport(est, tail, horizon, verdict, threshold, d)


# ---------------------------------------------------------------- prolongation of points


def _perturbations(x: Point, delta: float, sample: int, rng: np.random.Generator) -> list[Point]:
    out = [x]
    if isinstance(x, TorusPoint):
        for u, v in rng.uniform(-delta, delta, size=(sample - 1, 2)):
            out.append(TorusPoint(x.x + u, x.y + v))
        return out
    level = dyadic_level(delta)
    if level == 0:
        for _ in range(sample - 1):
            out.append(base_point(BASES[rng.integers(4)], int(rng.integers(-2 ** 20, 2 ** 20))))
        return out
    key = x.letters(-(level - 1), level)
    span = 4 ** (int(np.ceil(np.log(2 * level) / np.log(4))) + 4)
    tries = 0
    while len(out) < sample and tries < 200 * sample:
        tries += 1
        y = base_point(BASES[rng.integers(4)], int(rng.integers(-span, span)))
        if np.array_equal(y.letters(-(level - 1), level), key):
            out.append(y)
    return out


def prolongation_point(x: Point, delta: float, sample: int, horizon: int, eps: float,
                       seed: int = 0, system: SystemSpec | None = None) -> FiniteClosedSet:
    """Estimate of the prolongation ``D(x)``: forward orbits of points near ``x``, pruned.

    The unperturbed point is always included, so the estimate contains the
    pruned forward orbit of ``x``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(seed)
    starts = _perturbations(x, delta, max(1, sample), rng)
    if isinstance(x, TorusPoint):
        sysm = system or FURSTENBERG
        n = np.arange(horizon + 1)
        xy = np.concatenate([np.column_stack(skew_power_many(sysm, n, p.x, p.y)) for p in starts])
        keep = prune_torus_array(xy, eps)
        return FiniteClosedSet(sysm, [TorusPoint(*xy[i]) for i in keep], eps)
    level = dyadic_level(eps / 2)
    span = 2 * level - 1
    reps: dict[bytes, Point] = {}
    for y in starts:
        seq = y.letters(-(level - 1), horizon + level)
        win = np.lib.stride_tricks.sliding_window_view(seq, span)[: horizon + 1]
        _, first = np.unique(win, axis=0, return_index=True)
        for k in sorted(first):
            reps.setdefault(win[k].tobytes(), shift_point(y, int(k)))
    return FiniteClosedSet(x.system, list(reps.values()), eps)


# ---------------------------------------------------------------- hyperspace orbits


def _two_sided_order(horizon: int) -> np.ndarray:
    n = np.zeros(2 * horizon + 1, dtype=np.int64)
    n[1::2] = np.arange(1, horizon + 1)
    n[2::2] = -np.arange(1, horizon + 1)
    return n


def _window_ids(points, times: np.ndarray, level: int, extra=()):
    """Integer ids of the ``|k| < level`` words of ``T**n p`` (rows: times, cols: points).

    Words listed in ``extra`` share the id table and come back as a flat array.
    """
    span = 2 * level - 1
    lo, hi = int(times.min()), int(times.max())
    wins = []
    for p in points:
        seq = p.letters(lo - (level - 1), hi + level)
        wins.append(np.lib.stride_tricks.sliding_window_view(seq, span)[times - lo])
    flat = np.concatenate(wins + ([np.array(extra)] if len(extra) else []))
    _, ids = np.unique(flat, axis=0, return_inverse=True)
    ids = ids.ravel()
    m = len(points) * len(times)
    return ids[:m].reshape(len(points), len(times)).T, ids[m:]


def d_star_estimate(A: FiniteClosedSet, horizon: int, eps: float) -> list[FiniteClosedSet]:
    """Orbit of ``A`` in the hyperspace over ``n = 0, 1, -1, 2, -2, ...``, pruned at ``eps``.

    Each kept member is the first ``T**n A`` in that order whose Hausdorff
    distance to all earlier kept members exceeds ``eps / 2``.
    """
    times = _two_sided_order(horizon)
    if A.is_symbolic and eps < 2:
        level = dyadic_level(eps / 2)
        if level >= 1:
            ids, _ = _window_ids(A.points, times, level)
            first: dict[frozenset, int] = {}
            for i, row in enumerate(ids.tolist()):
                first.setdefault(frozenset(row), i)
            return [_image(A, int(times[i]), eps) for i in sorted(first.values())]
    kept: list[FiniteClosedSet] = []
    for n in times:
        B = _image(A, int(n), eps)
        if all(hausdorff(B, K) > eps / 2 for K in kept):
            kept.append(B)
    return kept


def _image(A: FiniteClosedSet, n: int, eps: float) -> FiniteClosedSet:
    return FiniteClosedSet(A.system, [shift_point(p, n, A.system) for p in A.points], eps)


def collection_distance(C1: Sequence[FiniteClosedSet], C2: Sequence[FiniteClosedSet]) -> tuple[float, float]:
    """Directed Hausdorff-of-Hausdorff distances ``(sup_1 inf_2, sup_2 inf_1)``."""
    D = np.array([[hausdorff(a, b) for b in C2] for a in C1])
    return float(D.min(axis=1).max()), float(D.min(axis=0).max())


@dataclass
class QuasifactorVerdict:
    verdict: str
    eps: float
    horizon: int
    members: int
    witness: tuple[int, int] | None = None
    witness_gap: float | None = None

    @property
    def minimal(self) -> bool:
        return self.verdict == "minimal-at-resolution"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "eps": self.eps, "horizon": self.horizon,
                "members": self.members, "witness": list(self.witness) if self.witness else None,
                "witness_gap": self.witness_gap}


def quasifactor_check(collection: Sequence[FiniteClosedSet], eps: float, horizon: int) -> QuasifactorVerdict:
    """Minimal at resolution iff every member's forward orbit (``n <= horizon``) comes within ``eps`` of every member.

    The witness ``(i, j)`` names a member ``i`` whose orbit never gets within
    ``eps`` of member ``j``; ``witness_gap`` is the closest approach seen.
    """
    if not collection:
        raise ValueError("collection must be nonempty")
    systems = {M.system for M in collection}
    if len(systems) != 1:
        raise ValueError("collection mixes systems")
    times = np.arange(0, horizon + 1, dtype=np.int64)
    symbolic = collection[0].is_symbolic and eps < 1
    level = dyadic_level(eps)
    for i, M in enumerate(collection):
        if symbolic and level >= 1:
            words = [p.letters(-(level - 1), level) for N in collection for p in N.points]
            ids, extra = _window_ids(M.points, times, level, words)
            reached = {frozenset(r) for r in ids.tolist()}
            pos = 0
            for j, N in enumerate(collection):
                target = frozenset(extra[pos: pos + len(N)].tolist())
                pos += len(N)
                if target not in reached:
                    gap = float(hausdorff_profile(M, N, 0, horizon, radius=_resolution_radius(eps)).min())
                    return QuasifactorVerdict("not-minimal", eps, horizon, len(collection), (i, j), gap)
        else:
            for j, N in enumerate(collection):
                prof = hausdorff_profile(M, N, 0, horizon)
                if prof.min() > eps:
                    return QuasifactorVerdict("not-minimal", eps, horizon, len(collection), (i, j),
                                              float(prof.min()))
    return QuasifactorVerdict("minimal-at-resolution", eps, horizon, len(collection))


# ---------------------------------------------------------------- catalog


def net_catalog(include_torus: bool = False, horizon: int = DEFAULT_NET_HORIZON) -> dict[str, TimeNet]:
    """Shipped nets: the four Morse idempotent nets and constant nets ``|t| <= 8`` (plus the torus identity net)."""
    from .symbolic import TABLES

    nets = {f"{name}-net": timenet_for_idempotent(t, horizon=horizon) for name, t in TABLES.items()}
    for t in range(-8, 9):
        nets[f"const[{t}]"] = constant_net(t)
    if include_torus:
        nets["torus-identity-net"] = torus_identity_net()
    return nets


def d_star_catalog_check(A: FiniteClosedSet, horizon: int, eps: float,
                         nets: dict[str, TimeNet] | None = None) -> dict:
    """Compare the orbit estimate with cluster sets along the catalog.

    Every catalog cluster set should lie within ``2 eps`` of some orbit member
    (``catalog_to_orbit``).  The reverse distance is reported too; the finite
    catalog is not expected to reach every orbit member.
    """
    orbit = d_star_estimate(A, horizon, eps)
    nets = nets if nets is not None else net_catalog()
    clusters = {name: cluster_set(A, net, eps) for name, net in nets.items()}
    results = [c.result for c in clusters.values()]
    per_net = {}
    for name, c in clusters.items():
        per_net[name] = min(hausdorff(c.result, K) for K in orbit)
    forward, reverse = collection_distance(results, orbit)
    return {"catalog_to_orbit": forward, "orbit_to_catalog": reverse, "per_net": per_net,
            "orbit_members": len(orbit), "passed": forward <= 2 * eps,
            "converged": {name: c.converged for name, c in clusters.items()}}


def point_record(p: Point) -> dict:
    """JSON-friendly description of a point."""
    if isinstance(p, TorusPoint):
        return {"x": p.x, "y": p.y}
    if p.is_explicit:
        return {"word": "".join("01"[c] for c in p.word), "origin": p.origin, "shift": p.shift}
    rec = {"shift": p.shift}
    if p.base is not None:
        rec["base"] = p.base
    else:
        rec["seed"] = list(p.seed)
        rec["complemented"] = p.complemented
    return rec


__all__ = [
    "ClusterSet", "EmptyNetError", "IDEMPOTENT", "IDENTITY", "PairReport", "QuasifactorVerdict", "RAW",
    "RecurrenceReport", "TimeNet", "ap_set_test", "cluster_set", "collection_distance", "compose_nets",
    "constant_net", "d_star_catalog_check", "d_star_estimate", "net_catalog", "pair_distances",
    "point_record", "prolongation_point", "proximal_pair", "quasifactor_check", "recurrence_report",
    "snap_image", "timenet_for_idempotent", "torus_identity_net",
]
