"""Points, systems and metrics for the two concrete flows.

Two phase spaces are supported:

* a substitution subshift over ``{0, 1}`` whose points are either two-sided
  substitution fixed points (given by a seed letter pair, an integer shift and
  a complement flag) or explicit finite windows;
* the two-torus, whose points are pairs of reals reduced mod 1.

The symbolic metric is ``2**-m`` with ``m`` the smallest ``|k|`` at which two
sequences disagree.  Disagreements are searched up to ``COMPARISON_HORIZON``;
sequences that agree on that whole window are reported at distance 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

COMPARISON_HORIZON = 2 ** 14
ORBIT_HORIZON = 2 ** 12
ERROR_BUDGET = 1e-9

SUBSHIFT = "substitution-subshift"
TORUS = "torus-skew"

# digits resolved per vectorised block of a fixed point (block length L**_BLOCK_DIGITS)
_BLOCK_DIGITS = 8


class DomainMismatchError(ValueError):
    """Raised when objects from different systems are compared or combined."""


class WindowRangeError(ValueError):
    """Raised when letters outside the known extent of an explicit window are requested."""


@dataclass(frozen=True)
class SystemSpec:
    """A concrete flow: a constant-length substitution subshift or a torus skew product."""

    kind: str
    rules: tuple[str, ...] = ()
    alpha: float | None = None

    def __post_init__(self):
        if self.kind == SUBSHIFT:
            if not self.rules or any(not w for w in self.rules):
                raise ValueError("every substitution rule must map to a nonempty word")
            if len({len(w) for w in self.rules}) != 1:
                raise ValueError("only constant-length substitutions are supported")
            for letter, word in enumerate(self.rules):
                if set(word) - {"0", "1"}:
                    raise ValueError(f"rule for {letter} is not a word over {{0,1}}")
        elif self.kind == TORUS:
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ValueError("alpha must lie in (0, 1)")
            best = Fraction(self.alpha).limit_denominator(10 ** 6)
            if abs(self.alpha - float(best)) < 1e-15:
                raise ValueError(f"alpha is numerically rational ({best}); pick an irrational approximant")
        else:
            raise ValueError(f"unknown system kind {self.kind!r}")

    @classmethod
    def subshift(cls, rules: dict[int, str] | Sequence[str]) -> "SystemSpec":
        if isinstance(rules, dict):
            rules = [rules[k] for k in sorted(rules)]
        return cls(SUBSHIFT, tuple(rules))

    @classmethod
    def torus(cls, alpha: float | None = None) -> "SystemSpec":
        return cls(TORUS, alpha=GOLDEN_ALPHA if alpha is None else float(alpha))

    @property
    def is_subshift(self) -> bool:
        return self.kind == SUBSHIFT

    @property
    def length(self) -> int:
        return len(self.rules[0])

    @property
    def complement_symmetric(self) -> bool:
        flip = str.maketrans("01", "10")
        return self.is_subshift and len(self.rules) == 2 and self.rules[1] == self.rules[0].translate(flip)

    def table(self) -> np.ndarray:
        return _rule_table(self.rules)


GOLDEN_ALPHA = (5 ** 0.5 - 1) / 2
MORSE_SQUARE = SystemSpec.subshift({0: "0110", 1: "1001"})
FURSTENBERG = SystemSpec.torus()


@lru_cache(maxsize=None)
def _rule_table(rules: tuple[str, ...]) -> np.ndarray:
    tab = np.array([[int(c) for c in w] for w in rules], dtype=np.uint8)
    tab.setflags(write=False)
    return tab


@lru_cache(maxsize=None)
def _power_table(rules: tuple[str, ...], reverse: bool, digits: int) -> np.ndarray:
    """Row ``c`` holds the word ``Q**digits(c)`` (reversed images when ``reverse``)."""
    tab = _rule_table(rules)
    if reverse:
        tab = tab[:, ::-1]
    words = np.arange(tab.shape[0], dtype=np.uint8)[:, None]
    for _ in range(digits):
        words = tab[words].reshape(tab.shape[0], -1)
    words.setflags(write=False)
    return words


def _onesided(rules: tuple[str, ...], reverse: bool, start: int, first: int, count: int) -> np.ndarray:
    """Letters ``first .. first+count-1`` of a one-sided fixed point; ``first`` may be huge.

    Uses ``x = Q**D(x)``: the block of length ``L**D`` at block index ``h`` is
    ``Q**D`` of the letter at position ``h``, so block heads are obtained by the
    same routine one level up.
    """
    block = len(rules[0]) ** _BLOCK_DIGITS
    words = _power_table(rules, reverse, _BLOCK_DIGITS)
    if first + count <= block:
        return words[start, first:first + count].copy()
    h0, lo0 = divmod(first, block)
    pos = lo0 + np.arange(count, dtype=np.int64)
    h = pos // block
    heads = _onesided(rules, reverse, start, h0, int(h[-1]) + 1)
    return words[heads[h], pos - h * block]


def fixed_point_letters(system: SystemSpec, seed: tuple[int, int], lo: int, hi: int) -> np.ndarray:
    """Letters at indices ``lo .. hi-1`` of the two-sided fixed point with seed ``(x_-1, x_0)``."""
    left, right = seed
    out = np.empty(hi - lo, dtype=np.uint8)
    if hi > 0:
        start = max(lo, 0)
        out[start - lo:] = _onesided(system.rules, False, right, start, hi - start)
    if lo < 0:
        stop = min(hi, 0)
        # index -1-j reads the reversed one-sided point at j
        j_first = -stop
        vals = _onesided(system.rules, True, left, j_first, stop - lo)
        out[: stop - lo] = vals[::-1]
    return out


BASE_SEEDS = {"a": (1, 1), "b": (0, 1), "abar": (0, 0), "bbar": (1, 0)}
SEED_BASES = {v: k for k, v in BASE_SEEDS.items()}


@dataclass(frozen=True)
class SymbolicPoint:
    """A point of a substitution subshift.

    Seed form denotes ``sigma**shift`` of the two-sided fixed point extending
    ``seed`` at indices ``-1, 0`` (complemented when the flag is set).  Explicit
    form holds a finite word whose letter ``origin`` sits at index 0; letters
    outside the word are unknown.
    """

    seed: tuple[int, int] | None = None
    shift: int = 0
    complemented: bool = False
    word: bytes | None = None
    origin: int = 0
    system: SystemSpec = field(default=MORSE_SQUARE, compare=True, repr=False)

    def __post_init__(self):
        if (self.seed is None) == (self.word is None):
            raise ValueError("give exactly one of seed or word")
        if self.seed is not None:
            seed = tuple(int(c) for c in self.seed)
            if len(seed) != 2 or set(seed) - {0, 1}:
                raise ValueError(f"bad seed {self.seed!r}")
            if self.complemented and self.system.complement_symmetric:
                seed = (1 - seed[0], 1 - seed[1])
                object.__setattr__(self, "complemented", False)
            object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "shift", int(self.shift))

    @classmethod
    def from_word(cls, word: str, origin: int | None = None, system: SystemSpec = MORSE_SQUARE) -> "SymbolicPoint":
        """Explicit point; by default the word is centred (``origin = len // 2``)."""
        if set(word) - {"0", "1"}:
            raise ValueError("explicit words must be over {0,1}")
        return cls(word=bytes(int(c) for c in word), origin=len(word) // 2 if origin is None else origin,
                   system=system)

    @property
    def is_explicit(self) -> bool:
        return self.word is not None

    @property
    def base(self) -> str | None:
        """Name of the distinguished fixed point (``a``, ``b``, ``abar``, ``bbar``) for seed points."""
        if self.seed is None or self.complemented:
            return None
        return SEED_BASES.get(self.seed)

    def known_extent(self) -> tuple[float, float]:
        """Half-open index range on which letters are known."""
        if self.word is None:
            return (-np.inf, np.inf)
        start = -(self.origin + self.shift)
        return (start, start + len(self.word))

    def known_radius(self) -> float:
        lo, hi = self.known_extent()
        return min(-lo, hi)

    def letters(self, lo: int, hi: int) -> np.ndarray:
        """Letters at indices ``lo .. hi-1`` as a uint8 array."""
        if self.word is None:
            out = fixed_point_letters(self.system, self.seed, lo + self.shift, hi + self.shift)
        else:
            klo, khi = self.known_extent()
            if lo < klo or hi > khi:
                raise WindowRangeError(f"indices [{lo}, {hi}) outside known extent [{klo}, {khi})")
            i0 = lo + self.origin + self.shift
            out = np.frombuffer(self.word, dtype=np.uint8)[i0:i0 + hi - lo].copy()
        if self.complemented:
            out ^= 1
        return out

    def sort_key(self) -> tuple:
        if self.word is None:
            return (0, self.seed, self.shift, self.complemented, b"", 0)
        return (1, (), self.shift + self.origin, self.complemented, self.word, self.origin)

    def __repr__(self) -> str:
        if self.word is None:
            name = self.base or f"seed{self.seed}{'~' if self.complemented else ''}"
            return f"SymbolicPoint({name}, shift={self.shift})"
        return f"SymbolicPoint(word[{len(self.word)}], origin={self.origin}, shift={self.shift})"


@dataclass(frozen=True)
class TorusPoint:
    """A point of the two-torus; coordinates are reduced into ``[0, 1)``."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", reduce_mod1(self.x))
        object.__setattr__(self, "y", reduce_mod1(self.y))

    def sort_key(self) -> tuple:
        return (round(self.x * 1e9), round(self.y * 1e9))

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


Point = SymbolicPoint | TorusPoint


def reduce_mod1(v: float) -> float:
    r = float(v) % 1.0
    return 0.0 if r >= 1.0 else r


def circle_distance(u, v):
    """Distance on R/Z; works elementwise on arrays."""
    d = np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


def shift_point(p: Point, n: int, system: SystemSpec | None = None) -> Point:
    """Apply the generator ``n`` times (the left shift, or the skew map for torus points)."""
    if isinstance(p, SymbolicPoint):
        return SymbolicPoint(seed=p.seed, shift=p.shift + n, complemented=p.complemented,
                             word=p.word, origin=p.origin, system=p.system)
    from .torus import skew_power_signed
    return skew_power_signed(system or FURSTENBERG, n, p)


def complement(p: SymbolicPoint) -> SymbolicPoint:
    return SymbolicPoint(seed=p.seed, shift=p.shift, complemented=not p.complemented,
                         word=p.word, origin=p.origin, system=p.system)


def window(x: SymbolicPoint, radius: int) -> str:
    """Letters at indices ``-radius .. radius-1`` as a string."""
    if radius < 1:
        raise ValueError("radius must be positive")
    return "".join("01"[c] for c in x.letters(-radius, radius))


def folded_order(radius: int) -> np.ndarray:
    """Positions of indices ``0, -1, 1, -2, 2, ...`` inside a window of the given radius."""
    order = [radius]
    for r in range(1, radius):
        order += [radius - r, radius + r]
    order.append(0)
    return np.array(order, dtype=np.int64)


@lru_cache(maxsize=None)
def _fold_ranks(radius: int) -> np.ndarray:
    """``|k|`` for each folded position."""
    idx = np.arange(-radius, radius)[folded_order(radius)]
    return np.abs(idx)


@lru_cache(maxsize=1 << 16)
def folded_window(p: SymbolicPoint, radius: int) -> np.ndarray:
    w = p.letters(-radius, radius)[folded_order(radius)]
    w.setflags(write=False)
    return w


def _check_same(sys: SystemSpec | None, *points) -> None:
    kinds = {type(p) for p in points}
    if len(kinds) != 1:
        raise DomainMismatchError("points from different phase spaces")
    if isinstance(points[0], SymbolicPoint):
        systems = {p.system for p in points}
        if len(systems) != 1 or (sys is not None and sys not in systems):
            raise DomainMismatchError("symbolic points from different subshifts")
    elif sys is not None and sys.is_subshift:
        raise DomainMismatchError("torus points compared in a subshift")


def first_disagreement(x: SymbolicPoint, y: SymbolicPoint, horizon: int = COMPARISON_HORIZON) -> int | None:
    """Smallest ``|k|`` with ``x_k != y_k``, or None if none within the horizon / known extent."""
    if x == y:
        return None
    limit = int(min(horizon, x.known_radius(), y.known_radius()))
    r = 16
    while True:
        r = min(r, limit)
        if r <= 0:
            return None
        diff = folded_window(x, r) != folded_window(y, r)
        if diff.any():
            return int(_fold_ranks(r)[np.argmax(diff)])
        if r == limit:
            return None
        r *= 4


def point_distance(sys: SystemSpec | None, x: Point, y: Point) -> float:
    """Metric on a single system (dyadic for subshifts, max of circle distances on the torus)."""
    _check_same(sys, x, y)
    if isinstance(x, TorusPoint):
        return float(max(circle_distance(x.x, y.x), circle_distance(x.y, y.y)))
    m = first_disagreement(x, y)
    return 0.0 if m is None else 2.0 ** -m


def dyadic_level(tau: float) -> int:
    """Smallest ``m`` with ``2**-m <= tau``: symbolic points within ``tau`` agree on ``|k| < m``."""
    if tau >= 1.0:
        return 0
    m = int(np.ceil(-np.log2(tau)))
    while 2.0 ** -m > tau:
        m += 1
    while m > 0 and 2.0 ** -(m - 1) <= tau:
        m -= 1
    return min(m, COMPARISON_HORIZON + 1)


def ball_key(p: SymbolicPoint, level: int) -> bytes:
    """Letters on ``|k| < level``; equal keys <=> distance <= ``2**-level`` (ultrametric balls)."""
    if level <= 0:
        return b""
    return p.letters(-(level - 1), level).tobytes()


def _prune_brute(points: Sequence[Point], eps: float, sys: SystemSpec | None) -> list[Point]:
    kept: list[Point] = []
    for p in points:
        if all(point_distance(sys, p, q) > eps / 2 for q in kept):
            kept.append(p)
    return kept


def epsilon_net_prune(points: Iterable[Point], eps: float, sys: SystemSpec | None = None) -> list[Point]:
    """Greedy eps/2-separated subset in input order.

    Every input point ends up within ``eps/2`` of a retained one and retained
    points are pairwise more than ``eps/2`` apart.  Symbolic input uses the
    ultrametric ball structure; torus input uses a grid hash.  Both reproduce
    the plain greedy pass exactly.
    """
    points = list(points)
    if not points:
        return []
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_same(sys, *points[:1])
    if isinstance(points[0], SymbolicPoint):
        _check_same(sys, *points)
        level = dyadic_level(eps / 2)
        seen: set[bytes] = set()
        kept = []
        for p in points:
            k = ball_key(p, level)
            if k not in seen:
                seen.add(k)
                kept.append(p)
        return kept
    xy = np.array([p.as_tuple() for p in points], dtype=float)
    keep = prune_torus_array(xy, eps)
    return [points[i] for i in keep]


def prune_torus_array(xy: np.ndarray, eps: float) -> list[int]:
    """Indices kept by the greedy eps/2 pass over rows of ``xy`` (torus sup metric)."""
    tau = eps / 2
    if tau >= 0.5:
        return [0] if len(xy) else []
    ncell = max(1, int(np.floor(1.0 / tau)))
    cells = (np.floor(xy * ncell).astype(np.int64) % ncell).tolist()
    coords = xy.tolist()
    grid: dict[tuple[int, int], list[int]] = {}
    kept: list[int] = []
    for i, (px, py) in enumerate(coords):
        cx, cy = cells[i]
        hit = False
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in grid.get(((cx + dx) % ncell, (cy + dy) % ncell), ()):
                    qx, qy = coords[j]
                    ex = abs(px - qx) % 1.0
                    ey = abs(py - qy) % 1.0
                    if max(min(ex, 1.0 - ex), min(ey, 1.0 - ey)) <= tau:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                break
        if not hit:
            kept.append(i)
            grid.setdefault((cx, cy), []).append(i)
    return kept
