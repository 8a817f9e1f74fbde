"""Complete TU games over exact rationals.

Coalitions are plain ``int`` bitmasks: player ``i`` (1-based) is bit ``i - 1``,
so the empty coalition is ``0`` and the grand coalition of ``n`` players is
``2**n - 1``. The bitmask doubles as the canonical dense index into a game's
value table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from .errors import DimensionMismatch, NotSymmetric
from .limits import check_players

Coalition = int


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}; pass int, Fraction or 'p/q' string")
    return Fraction(x)


# -- coalitions -------------------------------------------------------------

def coalition(members: Iterable[int] = ()) -> Coalition:
    mask = 0
    for i in members:
        if i < 1:
            raise ValueError(f"players are numbered from 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def members(mask: Coalition) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def size(mask: Coalition) -> int:
    return bin(mask).count("1")


def grand(n: int) -> Coalition:
    return (1 << n) - 1


def fmt(mask: Coalition) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


def submasks(mask: Coalition) -> Iterator[Coalition]:
    """All subsets of ``mask`` in increasing index order, including 0 and ``mask``."""
    # enumerate by walking the complement of the usual descending trick
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def canonical_order(n: int) -> list[Coalition]:
    """All coalitions of ``n`` players sorted by size, then lexicographically."""
    out = []
    for k in range(n + 1):
        for combo in combinations(range(1, n + 1), k):
            out.append(coalition(combo))
    return out


def canonical_key(mask: Coalition) -> tuple[int, tuple[int, ...]]:
    return size(mask), members(mask)


# -- value types ------------------------------------------------------------

@dataclass(frozen=True)
class Game:
    """Characteristic function ``values[S]`` for every coalition bitmask ``S``."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        check_players(self.n, "game")
        vals = tuple(as_fraction(v) for v in self.values)
        if len(vals) != 1 << self.n:
            raise DimensionMismatch(f"expected {1 << self.n} values for n={self.n}, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("the empty coalition must have value 0")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, S: Coalition) -> Fraction:
        return self.values[S]

    def __call__(self, *players: int) -> Fraction:
        return self.values[coalition(players)]

    def __add__(self, other: "Game") -> "Game":
        _same_n(self.n, other.n)
        return Game(self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Game") -> "Game":
        _same_n(self.n, other.n)
        return Game(self.n, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, alpha) -> "Game":
        alpha = as_fraction(alpha)
        return Game(self.n, tuple(alpha * v for v in self.values))

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    @classmethod
    def from_function(cls, n: int, f) -> "Game":
        """Build a game from ``f(mask)``; ``f(0)`` is forced to 0."""
        return cls(n, tuple(Fraction(0) if S == 0 else as_fraction(f(S)) for S in range(1 << n)))

    @classmethod
    def from_mapping(cls, n: int, mapping) -> "Game":
        """Coalitions missing from ``mapping`` get value 0."""
        values = [Fraction(0)] * (1 << n)
        for S, v in mapping.items():
            values[S] = as_fraction(v)
        return cls(n, tuple(values))

    @classmethod
    def zero(cls, n: int) -> "Game":
        return cls(n, (Fraction(0),) * (1 << n))


@dataclass(frozen=True)
class DividendVector:
    n: int
    d: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.d)
        if len(vals) != 1 << self.n:
            raise DimensionMismatch(f"expected {1 << self.n} dividends for n={self.n}, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("the dividend of the empty coalition must be 0")
        object.__setattr__(self, "d", vals)

    def __getitem__(self, T: Coalition) -> Fraction:
        return self.d[T]

    def support(self) -> list[Coalition]:
        return [T for T in range(1, 1 << self.n) if self.d[T] != 0]

    @classmethod
    def from_mapping(cls, n: int, mapping) -> "DividendVector":
        d = [Fraction(0)] * (1 << n)
        for T, v in mapping.items():
            d[T] = as_fraction(v)
        return cls(n, tuple(d))


@dataclass(frozen=True)
class ReducedSymmetric:
    """Size-indexed values ``s[0..n]`` of a symmetric game."""

    n: int
    s: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.s)
        if len(vals) != self.n + 1:
            raise DimensionMismatch(f"expected {self.n + 1} size values, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("s(0) must be 0")
        object.__setattr__(self, "s", vals)

    def __getitem__(self, k: int) -> Fraction:
        return self.s[k]

    def expand(self) -> Game:
        return Game(self.n, tuple(self.s[size(S)] for S in range(1 << self.n)))


@dataclass(frozen=True)
class ClassReport:
    monotonic: bool
    superadditive: bool
    convex: bool
    positive: bool
    symmetric: bool
    # class name -> violating coalitions (and values where useful)
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        # the class inclusions must hold for every report we hand out
        if self.positive and not self.convex:
            raise AssertionError("positive game reported as non-convex")
        if self.convex and not self.superadditive:
            raise AssertionError("convex game reported as non-superadditive")


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"player counts differ: {a} vs {b}")


# -- transforms -------------------------------------------------------------

def mobius(g: Game) -> DividendVector:
    """Harsanyi dividends via the in-place subset-difference transform."""
    d = list(g.values)
    for bit in (1 << i for i in range(g.n)):
        for S in range(1 << g.n):
            if S & bit:
                d[S] -= d[S ^ bit]
    return DividendVector(g.n, tuple(d))


def inverse_mobius(dv: DividendVector) -> Game:
    v = list(dv.d)
    for bit in (1 << i for i in range(dv.n)):
        for S in range(1 << dv.n):
            if S & bit:
                v[S] += v[S ^ bit]
    return Game(dv.n, tuple(v))


def unanimity(n: int, T: Coalition) -> Game:
    if T == 0:
        raise ValueError("unanimity games are defined for nonempty T")
    return Game(n, tuple(Fraction(1 if S & T == T else 0) for S in range(1 << n)))


def symmetric_dividends(s: ReducedSymmetric) -> tuple[Fraction, ...]:
    """Per-size dividend ``delta[t]`` shared by every coalition of size ``t``."""
    return tuple(
        sum((-1) ** (t - j) * comb(t, j) * s.s[j] for j in range(t + 1))
        for t in range(s.n + 1)
    )


# -- class predicates -------------------------------------------------------

def _monotonic_witness(g: Game):
    for S in range(1 << g.n):
        for i in range(g.n):
            bit = 1 << i
            if not S & bit and g[S] > g[S | bit]:
                return S, S | bit
    return None


def _superadditive_witness(g: Game):
    full = g.grand
    for S in range(1, 1 << g.n):
        rest = full & ~S
        for T in submasks(rest):
            if T <= S:
                continue
            if g[S] + g[T] > g[S | T]:
                return S, T
    return None


def _supermodular_locally(g: Game) -> bool:
    # local second differences; equivalent to supermodularity
    for S in range(1 << g.n):
        free = [1 << i for i in range(g.n) if not S & (1 << i)]
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                i, j = free[a], free[b]
                if g[S | i] + g[S | j] > g[S | i | j] + g[S]:
                    return False
    return True


def _convex_witness(g: Game):
    """First (i, S, T) with S <= T <= N - i and a larger marginal of i at S."""
    if _supermodular_locally(g):
        return None
    full = g.grand
    for i in range(1, g.n + 1):
        bit = 1 << (i - 1)
        rest = full & ~bit
        for S in submasks(rest):
            mS = g[S | bit] - g[S]
            for T in submasks(rest & ~S):
                T |= S
                if mS > g[T | bit] - g[T]:
                    return i, S, T
    raise AssertionError("local supermodularity check and marginal scan disagree")


def _symmetric_witness(g: Game):
    first_of_size = {}
    for S in range(1 << g.n):
        k = size(S)
        if k not in first_of_size:
            first_of_size[k] = S
        elif g[S] != g[first_of_size[k]]:
            return first_of_size[k], S
    return None


def classify(g: Game) -> ClassReport:
    """Decide the five game classes, each failure with a concrete witness.

    Convexity is the marginal-contribution test over ``i`` and ``S <= T <= N - i``;
    positivity is nonnegativity of the Harsanyi dividends.
    """
    witness = {}
    mono = _monotonic_witness(g)
    if mono:
        witness["monotonic"] = mono
    sup = _superadditive_witness(g)
    if sup:
        witness["superadditive"] = sup
    conv = _convex_witness(g)
    if conv:
        witness["convex"] = conv
    d = mobius(g)
    neg = next((T for T in range(1, 1 << g.n) if d[T] < 0), None)
    if neg is not None:
        witness["positive"] = (neg, d[neg])
    sym = _symmetric_witness(g)
    if sym:
        witness["symmetric"] = sym
    return ClassReport(
        monotonic=mono is None,
        superadditive=sup is None,
        convex=conv is None,
        positive=neg is None,
        symmetric=sym is None,
        witness=witness,
    )


def midpoint_check(g: Game) -> Optional[tuple[Coalition, int, int]]:
    """First ``(S, i, j)`` with ``(g(S - i) + g(S + j)) / 2 < g(S)``, or None.

    Scans ``S`` by index, then ``S - i`` by index (so ``i`` descending), then
    ``j`` ascending. For symmetric games None is equivalent to convexity.
    """
    full = g.grand
    for S in range(1, full):
        inside = members(S)
        outside = [j for j in range(1, g.n + 1) if not S & (1 << (j - 1))]
        for i in reversed(inside):
            lo = g[S & ~(1 << (i - 1))]
            for j in outside:
                if lo + g[S | (1 << (j - 1))] < 2 * g[S]:
                    return S, i, j
    return None


def reduce_symmetric(g: Game) -> ReducedSymmetric:
    w = _symmetric_witness(g)
    if w:
        raise NotSymmetric(fmt(w[0]), fmt(w[1]))
    s = [Fraction(0)] * (g.n + 1)
    for k in range(g.n + 1):
        s[k] = g[grand(k)]
    return ReducedSymmetric(g.n, tuple(s))


def game_from_sizes(n: int, s: Sequence) -> Game:
    return ReducedSymmetric(n, tuple(s)).expand()
