"""Independent reference computations used by the tests.

Nothing here imports the package's letter engine or fixed-point arithmetic.
"""
from fractions import Fraction


def thue_morse(k: int) -> int:
    return bin(k).count("1") & 1


def morse_letter(seed, k: int) -> int:
    """Letter ``k`` of the two-sided Morse-square fixed point with the given (x_-1, x_0).

    The right half is the Thue-Morse word started at ``x_0``; the rules are
    palindromes, so the left half read leftwards is the Thue-Morse word started at ``x_-1``.
    """
    left, right = seed
    if k >= 0:
        return right ^ thue_morse(k)
    return left ^ thue_morse(-1 - k)


def morse_word(seed, lo: int, hi: int, shift: int = 0) -> list[int]:
    return [morse_letter(seed, k + shift) for k in range(lo, hi)]


def dyadic_distance(u, v, shift_u=0, shift_v=0, horizon=256) -> float:
    """``2**-m`` for the smallest ``|k|`` where two seed points differ (0 beyond the horizon)."""
    for m in range(horizon):
        for k in ((0,) if m == 0 else (-m, m)):
            if morse_letter(u, k + shift_u) != morse_letter(v, k + shift_v):
                return 2.0 ** -m
    return 0.0


def skew_iterate(alpha: Fraction, x: Fraction, y: Fraction, n: int):
    """``n`` literal steps of ``(x, y) -> (x + alpha, x + y)`` in exact rationals, reduced mod 1."""
    for _ in range(n):
        x, y = (x + alpha) % 1, (x + y) % 1
    return x, y


def circle(u: float) -> float:
    u = u % 1.0
    return min(u, 1.0 - u)


def hausdorff_dist(P, Q, d) -> float:
    a = max(min(d(p, q) for q in Q) for p in P)
    b = max(min(d(p, q) for p in P) for q in Q)
    return max(a, b)
