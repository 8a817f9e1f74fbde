"""Incomplete games: values known only on a family K of coalitions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CrossedBounds, DimensionMismatch, NotAChain, NotPartiallySymmetric
from .game import Coalition, Game, as_fraction, fmt, grand, size


@dataclass(frozen=True)
class IncompleteGame:
    n: int
    values: Mapping[Coalition, Fraction]

    def __post_init__(self):
        vals = {int(S): as_fraction(v) for S, v in dict(self.values).items()}
        full = grand(self.n)
        for S in vals:
            if S < 0 or S & ~full:
                raise ValueError(f"coalition {S:#b} is not a subset of the {self.n} players")
        if vals.setdefault(0, Fraction(0)) != 0:
            raise ValueError("the empty coalition must have value 0")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @property
    def known(self) -> list[Coalition]:
        return list(self.values)

    def __getitem__(self, S: Coalition) -> Fraction:
        return self.values[S]

    def __contains__(self, S: Coalition) -> bool:
        return S in self.values

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    def nonempty(self) -> list[Coalition]:
        return [S for S in self.values if S]


@dataclass(frozen=True)
class ReducedIncomplete:
    """Size-indexed partial values: ``sigma[k]`` known for each ``k`` in ``sizes``."""

    n: int
    sizes: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        vals = tuple(as_fraction(v) for v in self.values)
        if len(sizes) != len(vals):
            raise DimensionMismatch("one value per known size is required")
        if not sizes or sizes[0] != 0 or vals[0] != 0:
            raise ValueError("size 0 must be known with value 0")
        if any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("known sizes must be strictly increasing")
        if sizes[-1] > self.n:
            raise ValueError(f"size {sizes[-1]} exceeds n={self.n}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "values", vals)

    @property
    def sigma(self) -> dict[int, Fraction]:
        return dict(zip(self.sizes, self.values))

    @classmethod
    def from_mapping(cls, n: int, sigma: Mapping[int, object]) -> "ReducedIncomplete":
        sigma = dict(sigma)
        sigma.setdefault(0, 0)
        ks = sorted(sigma)
        return cls(n, tuple(ks), tuple(sigma[k] for k in ks))

    def to_incomplete(self) -> IncompleteGame:
        """All coalitions of every known size, each carrying its size's value."""
        sig = self.sigma
        return IncompleteGame(self.n, {S: sig[size(S)] for S in range(1 << self.n) if size(S) in sig})


@dataclass(frozen=True)
class IntervalGame:
    n: int
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def __getitem__(self, S: Coalition) -> tuple[Fraction, Fraction]:
        return self.lower[S], self.upper[S]


def is_extension(g: Game, inc: IncompleteGame) -> bool:
    if g.n != inc.n:
        raise DimensionMismatch(f"game has {g.n} players, incomplete game {inc.n}")
    return all(g[S] == v for S, v in inc.values.items())


def reduce_partially_symmetric(inc: IncompleteGame) -> ReducedIncomplete:
    first = {}
    for S in inc.values:
        k = size(S)
        if k not in first:
            first[k] = S
        elif inc[S] != inc[first[k]]:
            raise NotPartiallySymmetric(fmt(first[k]), fmt(S))
    ks = sorted(first)
    return ReducedIncomplete(inc.n, tuple(ks), tuple(inc[first[k]] for k in ks))


def lattice_closure(K: Iterable[Coalition]) -> set[Coalition]:
    closed = set(K)
    frontier = set(closed)
    while frontier:
        new = set()
        for A in frontier:
            for B in closed:
                for C in (A | B, A & B):
                    if C not in closed:
                        new.add(C)
        closed |= new
        frontier = new
    return closed


def chain_convex_extension(inc: IncompleteGame) -> Game:
    """Modular convex extension of an incomplete game whose known coalitions form a chain.

    The chain is completed to a maximal one by adding missing players in
    increasing order. Unknown chain values are interpolated linearly in the
    chain position, and above the top known coalition the last known slope is
    continued. The result is the additive game built from the chain's
    marginal contributions, so supermodularity holds with equality.
    """
    chain = sorted(inc.values, key=size)
    for A, B in zip(chain, chain[1:]):
        if A & B != A:
            raise NotAChain(fmt(A), fmt(B))
    n = inc.n
    # order[k] = player added at step k + 1
    order = []
    prev = 0
    for C in chain[1:] + [grand(n)]:
        order.extend(i for i in range(n) if (C & ~prev) >> i & 1)
        prev |= C
    known_pos = {size(C): inc[C] for C in chain}
    pos = sorted(known_pos)
    vals = []
    for k in range(n + 1):
        if k in known_pos:
            vals.append(known_pos[k])
            continue
        below = max(p for p in pos if p < k)
        above = [p for p in pos if p > k]
        if above:
            hi = above[0]
            slope = (known_pos[hi] - known_pos[below]) / (hi - below)
        elif len(pos) > 1:
            prev_p = pos[-2]
            slope = (known_pos[below] - known_pos[prev_p]) / (below - prev_p)
        else:
            slope = Fraction(0)
        vals.append(known_pos[below] + slope * (k - below))
    marginal = [Fraction(0)] * n
    for step, player in enumerate(order, start=1):
        marginal[player] = vals[step] - vals[step - 1]
    return Game.from_function(n, lambda S: sum((marginal[i] for i in range(n) if S >> i & 1), Fraction(0)))


def interval_hull(lower: Game, upper: Game) -> IntervalGame:
    if lower.n != upper.n:
        raise DimensionMismatch(f"player counts differ: {lower.n} vs {upper.n}")
    for S in range(1 << lower.n):
        if lower[S] > upper[S]:
            raise CrossedBounds(fmt(S), lower[S], upper[S])
    return IntervalGame(lower.n, lower.values, upper.values)
