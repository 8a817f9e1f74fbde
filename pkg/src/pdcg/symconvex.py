"""Symmetric convex extensions of partially symmetric incomplete games.

Everything here works on reduced forms: a symmetric game is the sequence
``s(0..n)`` and it is convex exactly when that sequence has nonnegative
second differences. Extensions of ``(n, X, sigma)`` are the convex sequences
through the known points, so bounds and extreme games come from lines
through neighbouring known points.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NotAMember, OutsideExtremeHull, PreconditionFailed, Unbounded
from .game import ReducedSymmetric
from .incomplete import ReducedIncomplete
from .lp import RationalMatrixSystem, make_system


@dataclass(frozen=True)
class ScBounds:
    """Per-size lower and upper values; an upper entry of None means unbounded."""

    n: int
    lower: tuple[Fraction, ...]
    upper: tuple[Optional[Fraction], ...]


@dataclass(frozen=True)
class ScExtremeSet:
    upper_game: ReducedSymmetric
    extremes: dict   # gap size k -> ReducedSymmetric

    def games(self) -> list[ReducedSymmetric]:
        """Per-gap extremes by increasing k, then the upper game."""
        return [self.extremes[k] for k in sorted(self.extremes)] + [self.upper_game]

    def vertices(self) -> list[tuple[Fraction, ...]]:
        return sorted({g.s for g in self.games()})

    def __len__(self) -> int:
        return len(self.extremes) + 1


@dataclass(frozen=True)
class ScDecomposition:
    upper: Fraction
    gaps: dict   # gap size k -> coefficient of s^k

    def total(self) -> Fraction:
        return self.upper + sum(self.gaps.values(), Fraction(0))


def _line(x1, y1, x2, y2, x) -> Fraction:
    return y1 + (x - x1) * Fraction(y2 - y1, 1) / (x2 - x1)


def sc_violating_triple(r: ReducedIncomplete) -> Optional[tuple[int, int, int]]:
    """First consecutive known sizes k1 < k2 < k3 whose middle point lies above the chord."""
    ks, vs = r.sizes, r.values
    for a in range(len(ks) - 2):
        k1, k2, k3 = ks[a : a + 3]
        if vs[a + 1] > _line(k1, vs[a], k3, vs[a + 2], k2):
            return k1, k2, k3
    return None


def sc_extendable(r: ReducedIncomplete) -> bool:
    return sc_violating_triple(r) is None


def sc_bounded(r: ReducedIncomplete) -> bool:
    """Whether the extension set is bounded; requires an extendable game.

    For n >= 3 this is ``|X| > 2 and n in X``. Smaller games follow the same
    rule except that a fully known game counts as bounded.
    """
    if not sc_extendable(r):
        raise PreconditionFailed("game has no symmetric convex extension")
    if len(r.sizes) == r.n + 1:
        return True
    return len(r.sizes) > 2 and r.sizes[-1] == r.n


def _require_bounded(r):
    if not sc_bounded(r):
        raise Unbounded("the set of symmetric convex extensions is unbounded")


def _neighbours(ks, k):
    """(i1, i2, j1, j2): up to two known sizes on each side of k; missing ones are None."""
    p = bisect_left(ks, k)
    i2 = ks[p - 1] if p >= 1 else None
    i1 = ks[p - 2] if p >= 2 else None
    j1 = ks[p] if p < len(ks) else None
    j2 = ks[p + 1] if p + 1 < len(ks) else None
    return i1, i2, j1, j2


def sc_bounds(r: ReducedIncomplete) -> ScBounds:
    _require_bounded(r)
    sig = r.sigma
    ks = r.sizes
    lower, upper = [], []
    for k in range(r.n + 1):
        if k in sig:
            lower.append(sig[k])
            upper.append(sig[k])
            continue
        i1, i2, j1, j2 = _neighbours(ks, k)
        left = _line(i1, sig[i1], i2, sig[i2], k) if i1 is not None else None
        right = _line(j1, sig[j1], j2, sig[j2], k) if j2 is not None else None
        lower.append(max(x for x in (left, right) if x is not None))
        upper.append(_line(i2, sig[i2], j1, sig[j1], k))
    return ScBounds(r.n, tuple(lower), tuple(upper))


def sc_extreme_games(r: ReducedIncomplete) -> ScExtremeSet:
    """The upper game plus one game ``s^k`` per unknown size k.

    ``s^k`` reaches the lower bound at k and is linear from there to the
    known sizes around k; elsewhere it equals the upper game. Each of these
    n - |X| + 2 games is a vertex of the extension set. They are all of its
    vertices when the set is a simplex, as in a single gap between 0 and n.
    In general there can be more: independent gaps multiply the vertex count,
    and a gap whose two outer secant lines cross inside it also has vertices
    with two kinks. See ``lp.enumerate_vertices(sc_system(r))`` for the full set.
    """
    b = sc_bounds(r)
    sig = r.sigma
    up = ReducedSymmetric(r.n, b.upper)
    extremes = {}
    for k in range(r.n + 1):
        if k in sig:
            continue
        _, i, j, _ = _neighbours(r.sizes, k)
        lk = b.lower[k]
        s = list(b.upper)
        s[k] = lk
        for m in range(i + 1, j):
            if m < k:
                s[m] = _line(i, sig[i], k, lk, m)
            elif m > k:
                s[m] = _line(k, lk, j, sig[j], m)
        extremes[k] = ReducedSymmetric(r.n, tuple(s))
    return ScExtremeSet(up, extremes)


def sc_membership(s: ReducedSymmetric, r: ReducedIncomplete) -> bool:
    if s.n != r.n:
        return False
    if any(s[k] != v for k, v in zip(r.sizes, r.values)):
        return False
    return all(s[k - 1] + s[k + 1] >= 2 * s[k] for k in range(1, s.n))


def sc_decompose(s: ReducedSymmetric, r: ReducedIncomplete) -> ScDecomposition:
    """Convex coefficients of ``s`` over the extreme games, gap by gap.

    The weights are unique, so a member whose per-gap weights sum to more
    than 1 raises :class:`OutsideExtremeHull`. That happens when the
    extension set has vertices beyond the per-gap games, for instance when
    two gaps are separated by consecutive known sizes.

    Inside a gap (i, j), ``s - upper`` is a convex function vanishing at both
    ends and each ``s^k - upper`` is a scaled hat peaked at k, so the weight of
    ``s^k`` is read off the second difference of ``s`` at k.
    """
    if not sc_membership(s, r):
        raise NotAMember("game is not a symmetric convex extension")
    ext = sc_extreme_games(r)
    up = ext.upper_game
    f = [a - b for a, b in zip(s.s, up.s)]
    gaps = {}
    for k, g in ext.extremes.items():
        _, i, j, _ = _neighbours(r.sizes, k)
        depth = up[k] - g[k]
        if depth == 0:
            gaps[k] = Fraction(0)
            continue
        kink = f[k - 1] + f[k + 1] - 2 * f[k]
        hat_kink = Fraction(1, k - i) + Fraction(1, j - k)
        gaps[k] = kink / hat_kink / depth
    alpha_up = 1 - sum(gaps.values(), Fraction(0))
    if alpha_up < 0:
        # the per-gap weights are forced, so no other combination exists
        raise OutsideExtremeHull(
            f"member needs total weight {1 - alpha_up} on the per-gap extremes; "
            "it lies outside their convex hull together with the upper game",
            upper_weight=alpha_up,
        )
    out = ScDecomposition(alpha_up, gaps)
    recon = [alpha_up * x for x in up.s]
    for k, a in gaps.items():
        recon = [x + a * y for x, y in zip(recon, ext.extremes[k].s)]
    if any(a < 0 for a in gaps.values()) or tuple(recon) != s.s:
        raise AssertionError("decomposition failed to reconstruct a member game")
    return out


def sc_system(r: ReducedIncomplete) -> RationalMatrixSystem:
    """Variables s(0..n), free; s fixed on known sizes; nonnegative second differences."""
    n = r.n
    eq = []
    for k, v in zip(r.sizes, r.values):
        row = [0] * (n + 1)
        row[k] = 1
        eq.append((row, v))
    le = []
    for k in range(1, n):
        row = [0] * (n + 1)
        row[k - 1], row[k], row[k + 1] = -1, 2, -1
        le.append((row, 0))
    return make_system(n + 1, eq=eq, le=le, nonneg=False)


def line_chart(r: ReducedIncomplete) -> list[tuple[int, Fraction]]:
    """Points of the piecewise-linear chart through the known sizes, extended to n."""
    ks, sig = r.sizes, r.sigma
    pts = [(k, sig[k]) for k in ks]
    if ks[-1] != r.n and len(ks) >= 2:
        a, b = ks[-2], ks[-1]
        pts.append((r.n, _line(a, sig[a], b, sig[b], r.n)))
    return pts
