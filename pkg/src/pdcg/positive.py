"""Positive (totally monotonic) extensions of incomplete games.

A positive extension is a nonnegative dividend vector ``d`` with
``sum(d[T] for T <= S) == v(S)`` for every known ``S``. Two dividends whose
coalitions sit inside exactly the same known coalitions are interchangeable,
so the linear systems here carry one column per membership pattern, with
the intersection of the pattern's known coalitions as its representative.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Optional

from . import lp
from .errors import (
    Infeasible,
    NotExtendable,
    PreconditionFailed,
    SizeBoundViolated,
    StructureMismatch,
    Unbounded,
)
from .game import (
    ClassReport,
    Coalition,
    DividendVector,
    Game,
    ReducedSymmetric,
    canonical_key,
    classify,
    coalition,
    fmt,
    grand,
    inverse_mobius,
    size,
    submasks,
    symmetric_dividends,
)
from .incomplete import IncompleteGame, ReducedIncomplete, reduce_partially_symmetric
from .limits import check_players
from .symconvex import ScBounds


@dataclass(frozen=True)
class Witness:
    d: DividendVector
    extendable = True


@dataclass(frozen=True)
class Certificate:
    """Multipliers ``y`` on the nonempty known coalitions proving non-extendability."""

    y: dict
    extendable = False


@dataclass(frozen=True)
class BalancedCollection:
    support: tuple[Coalition, ...]
    dividends: dict

    def game(self, n: int) -> Game:
        return inverse_mobius(DividendVector.from_mapping(n, self.dividends))


@dataclass(frozen=True)
class PositiveExtremeSet:
    items: list   # (BalancedCollection, Game) pairs in canonical order

    def __len__(self):
        return len(self.items)

    def games(self) -> list[Game]:
        return [g for _, g in self.items]


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form description of the positive extensions for a structured K."""

    extremes: PositiveExtremeSet
    lower: Game
    upper: Game
    delta: Optional[dict] = None


# -- membership patterns ----------------------------------------------------

def _rows(inc: IncompleteGame) -> list[Coalition]:
    return sorted(inc.nonempty(), key=canonical_key)


def _pattern(T: Coalition, rows) -> int:
    p = 0
    for i, S in enumerate(rows):
        if T & S == T:
            p |= 1 << i
    return p


def _pattern_classes(rows, candidates) -> dict[int, list[Coalition]]:
    """Group candidate coalitions by the set of known rows containing them; drop the empty pattern."""
    classes = {}
    for T in candidates:
        p = _pattern(T, rows)
        if p:
            classes.setdefault(p, []).append(T)
    return classes


def _representative(pattern: int, rows) -> Coalition:
    rep = -1
    for i, S in enumerate(rows):
        if pattern >> i & 1:
            rep &= S
    return rep


def _decide(inc: IncompleteGame, classes) -> Witness | Certificate:
    rows = _rows(inc)
    patterns = sorted(classes, key=lambda p: canonical_key(_representative(p, rows)))
    eq = []
    for i, S in enumerate(rows):
        eq.append(([1 if p >> i & 1 else 0 for p in patterns], inc[S]))
    sys = lp.make_system(len(patterns), eq=eq)
    out = lp.solve_feasibility(sys)
    if isinstance(out, lp.Infeasible):
        return Certificate({S: y for S, y in zip(rows, out.y)})
    d = {_representative(p, rows): x for p, x in zip(patterns, out.point) if x}
    return Witness(DividendVector.from_mapping(inc.n, d))


def pos_extendable(inc: IncompleteGame) -> Witness | Certificate:
    """Nonnegative dividend witness, or a Farkas certificate ``y`` with

    ``sum(y[S] for S in K if T <= S) >= 0`` for every nonempty T and
    ``sum(v[S] * y[S]) <= -1``. Rows are deduplicated by sweeping all
    coalitions and keeping one per membership pattern.
    """
    check_players(inc.n, "pos_extendable")
    rows = _rows(inc)
    return _decide(inc, _pattern_classes(rows, range(1, 1 << inc.n)))


def pos_extendable_bounded_size(inc: IncompleteGame, c: int) -> Witness | Certificate:
    """Same answer as :func:`pos_extendable`, sweeping only coalitions of size at most ``c``."""
    for S in inc.nonempty():
        if size(S) > c:
            raise SizeBoundViolated(fmt(S), c)
    rows = _rows(inc)
    small = (coalition(m) for k in range(1, c + 1) for m in combinations(range(1, inc.n + 1), k))
    return _decide(inc, _pattern_classes(rows, small))


def certificate_holds(inc: IncompleteGame, y: dict) -> bool:
    """Check a certificate against every nonempty T (exhaustive, 2^n rows)."""
    if sum(inc[S] * val for S, val in y.items()) > -1:
        return False
    for T in range(1, 1 << inc.n):
        if sum((val for S, val in y.items() if T & S == T), Fraction(0)) < 0:
            return False
    return True


def witness_holds(inc: IncompleteGame, d: DividendVector) -> bool:
    if any(x < 0 for x in d.d):
        return False
    return all(sum((d[T] for T in submasks(S)), Fraction(0)) == v for S, v in inc.values.items())


def pos_bounded(inc: IncompleteGame) -> bool:
    if isinstance(pos_extendable(inc), Certificate):
        raise PreconditionFailed("game has no positive extension")
    return inc.grand in inc


# -- extreme games ----------------------------------------------------------

def _support_search(columns, target, limit):
    """Index sets of linearly independent columns whose unique combination equals target with positive weights.

    Depth-first over increasing indices. A branch stops as soon as the target
    lies in the span: any independent superset represents it the same way,
    with zero weight on the extra columns.
    """
    m = len(target)
    found = []

    def reduce(vec, basis):
        # basis: list of (pivot, row, combo); returns remainder and combination coefficients
        vec = list(vec)
        coeffs = {}
        for pivot, row, combo in basis:
            f = vec[pivot]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
                for idx, c in combo.items():
                    coeffs[idx] = coeffs.get(idx, 0) - f * c
        return vec, coeffs

    def dfs(start, chosen, basis):
        for j in range(start, len(columns)):
            rem, coeffs = reduce(columns[j], basis)
            pivot = next((i for i in range(m) if rem[i] != 0), None)
            if pivot is None:
                continue
            p = rem[pivot]
            # rem = columns[j] + sum(coeffs[idx] * columns[idx]); normalise so row[pivot] == 1
            combo = {idx: c / p for idx, c in coeffs.items()}
            combo[j] = Fraction(1) / p
            row = [a / p for a in rem]
            # keep earlier rows reduced against the new pivot (Gauss-Jordan)
            new_basis = []
            for piv2, row2, combo2 in basis:
                f = row2[pivot]
                if f:
                    row2 = [a - f * b for a, b in zip(row2, row)]
                    combo2 = dict(combo2)
                    for idx, c in combo.items():
                        combo2[idx] = combo2.get(idx, 0) - f * c
                new_basis.append((piv2, row2, combo2))
            new_basis.append((pivot, row, combo))
            picked = chosen + [j]
            t_rem, t_coeffs = reduce(target, new_basis)
            if not any(t_rem):
                # target = -sum(t_coeffs[idx] * columns[idx])
                weights = {idx: -t_coeffs.get(idx, 0) for idx in picked}
                if all(w > 0 for w in weights.values()):
                    found.append(weights)
                continue
            if len(picked) < limit:
                dfs(j + 1, picked, new_basis)

    if not any(target):
        return [{}]
    dfs(0, [], [])
    return found


def pos_extreme_games(inc: IncompleteGame) -> PositiveExtremeSet:
    """Vertices of the positive extension polytope, one per minimal balanced collection."""
    check_players(inc.n, "pos_extreme_games")
    if inc.grand not in inc:
        raise Unbounded("grand coalition value unknown; the positive extensions are unbounded")
    if isinstance(pos_extendable(inc), Certificate):
        raise PreconditionFailed("game has no positive extension")
    rows = _rows(inc)
    classes = _pattern_classes(rows, range(1, 1 << inc.n))
    patterns = sorted(classes, key=lambda p: canonical_key(_representative(p, rows)))
    columns = [[Fraction(p >> i & 1) for i in range(len(rows))] for p in patterns]
    target = [inc[S] for S in rows]
    items = []
    for weights in _support_search(columns, target, len(rows)):
        idx = sorted(weights)
        for pick in product(*(classes[patterns[i]] for i in idx)):
            divs = {T: weights[i] for T, i in zip(pick, idx)}
            support = tuple(sorted(divs, key=canonical_key))
            coll = BalancedCollection(support, {T: divs[T] for T in support})
            items.append((coll, coll.game(inc.n)))
    items.sort(key=lambda it: [canonical_key(T) for T in it[0].support])
    return PositiveExtremeSet(items)


# -- structured K -----------------------------------------------------------

def _disjoint_parts(inc: IncompleteGame) -> list[Coalition]:
    N = inc.grand
    if N not in inc:
        raise StructureMismatch("grand coalition must be known")
    parts = [S for S in inc.nonempty() if S != N]
    for A, B in combinations(parts, 2):
        if A & B:
            raise StructureMismatch(f"known coalitions {fmt(A)} and {fmt(B)} intersect")
    return sorted(parts, key=canonical_key)


def pos_disjoint_case(inc: IncompleteGame) -> ClosedForm:
    """Closed forms when the known proper coalitions are pairwise disjoint.

    Extendable iff every known part is nonnegative and the parts sum to at
    most v(N). The upper value of a coalition meeting several parts charges
    it only for the parts it misses entirely, since each part's dividend can
    sit on a sub-coalition inside the overlap.
    """
    parts = _disjoint_parts(inc)
    n, N = inc.n, inc.grand
    for S in parts:
        if inc[S] < 0:
            raise NotExtendable(f"v({fmt(S)}) = {inc[S]} < 0", S)
    total = sum((inc[S] for S in parts), Fraction(0))
    slack = inc[N] - total
    if slack < 0:
        raise NotExtendable(f"v(N) = {inc[N]} < {total} = sum of v over the known parts", N)

    def low(S):
        if S == N:
            return inc[N]
        return sum((inc[P] for P in parts if P & S == P), Fraction(0))

    def high(S):
        for P in parts:
            if S & P == S:
                return inc[P]
        return inc[N] - sum((inc[P] for P in parts if not P & S), Fraction(0))

    lower = Game.from_function(n, low)
    upper = Game.from_function(n, high)

    choices = []
    for P in parts:
        if inc[P]:
            choices.append([(T, inc[P]) for T in submasks(P) if T])
    if slack:
        outside = [T for T in range(1, 1 << n) if all(T & P != T for P in parts)]
        choices.append([(T, slack) for T in outside])
    items = []
    for pick in product(*choices):
        divs = dict(pick)
        support = tuple(sorted(divs, key=canonical_key))
        coll = BalancedCollection(support, {T: divs[T] for T in support})
        items.append((coll, coll.game(n)))
    items.sort(key=lambda it: [canonical_key(T) for T in it[0].support])
    return ClosedForm(PositiveExtremeSet(items), lower, upper)


def _downclosed_check(inc: IncompleteGame) -> list[Coalition]:
    N = inc.grand
    if N not in inc:
        raise StructureMismatch("grand coalition must be known")
    body = [S for S in inc.known if S != N]
    for S in body:
        for T in submasks(S):
            if T not in inc:
                raise StructureMismatch(f"{fmt(T)} is a subset of known {fmt(S)} but is unknown")
    return sorted(body, key=canonical_key)


def pos_downclosed_case(inc: IncompleteGame) -> ClosedForm:
    """Closed forms when every known coalition other than N has all its subsets known.

    The dividends of the known proper coalitions are forced (``delta``); what
    remains of v(N) goes entirely onto one unknown coalition C per extreme game.
    """
    body = _downclosed_check(inc)
    n, N = inc.n, inc.grand
    delta = {0: Fraction(0)}
    for S in body:
        if S:
            delta[S] = inc[S] - sum((delta[T] for T in submasks(S) if T != S), Fraction(0))
            if delta[S] < 0:
                raise NotExtendable(f"forced dividend of {fmt(S)} is {delta[S]} < 0", S)
    rest = inc[N] - sum(delta.values(), Fraction(0))
    if rest < 0:
        raise NotExtendable(f"remaining dividend for N is {rest} < 0", N)
    delta[N] = rest
    known_body = set(body)

    def base(S):
        return sum((delta[T] for T in submasks(S) if T in known_body), Fraction(0))

    lower = Game.from_function(n, lambda S: base(S) + (rest if S == N else 0))
    upper = Game.from_function(n, lambda S: inc[S] if S in inc else rest + base(S))

    fixed = {T: d for T, d in delta.items() if T and T != N and d}
    spots = [C for C in range(1, 1 << n) if C not in known_body] if rest else [None]
    items = []
    for C in spots:
        divs = dict(fixed)
        if C is not None:
            divs[C] = rest
        support = tuple(sorted(divs, key=canonical_key))
        coll = BalancedCollection(support, {T: divs[T] for T in support})
        items.append((coll, coll.game(n)))
    items.sort(key=lambda it: [canonical_key(T) for T in it[0].support])
    return ClosedForm(PositiveExtremeSet(items), lower, upper, delta={T: d for T, d in delta.items() if T})


# -- envelopes --------------------------------------------------------------

def _envelope_at(args):
    n, rows, rhs, base_patterns, S = args
    classes = {}
    for T in range(1, 1 << n):
        # pattern 0 columns are unconstrained dividends; they only matter inside S
        classes.setdefault((base_patterns[T], T & S == T), T)
    keys = sorted(classes, key=lambda k: classes[k])
    eq = [([1 if p >> i & 1 else 0 for p, _ in keys], b) for i, b in enumerate(rhs)]
    prog = lp.LinearProgram(lp.make_system(len(keys), eq=eq))
    if prog.infeasible is not None:
        return None
    objective = [1 if inside else 0 for _, inside in keys]
    lo = prog.optimize(objective, "min")
    hi = prog.optimize(objective, "max")
    return lo.value, (hi.value if isinstance(hi, lp.Optimal) else None)


def positive_envelope(inc: IncompleteGame, jobs: int = 1) -> ScBounds:
    """Per-coalition LP minimum and maximum over all positive extensions.

    Indexed by coalition bitmask (the ``ScBounds`` fields are reused); an upper
    entry of None means unbounded. Only coalitions can be bounded, so the
    result is an envelope, not generally a game in the extension set.
    """
    check_players(inc.n, "envelope")
    rows = _rows(inc)
    rhs = [inc[S] for S in rows]
    base_patterns = [0] + [_pattern(T, rows) for T in range(1, 1 << inc.n)]
    tasks = [(inc.n, rows, rhs, base_patterns, S) for S in range(1 << inc.n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_envelope_at, tasks, chunksize=8))
    else:
        results = [_envelope_at(t) for t in tasks]
    if any(r is None for r in results):
        raise Infeasible("game has no positive extension")
    return ScBounds(inc.n, tuple(r[0] for r in results), tuple(r[1] for r in results))


# -- symmetric positive -----------------------------------------------------

def _sp_system(r: ReducedIncomplete):
    n = r.n
    eq = [([comb(k, t) for t in range(1, n + 1)], v) for k, v in zip(r.sizes, r.values) if k]
    return lp.make_system(n, eq=eq)


def sp_per_coalition_bounds(r: ReducedIncomplete) -> ScBounds:
    """Per-size min/max of s(m) over symmetric positive extensions.

    Such extensions are nonnegative per-size dividends ``d[1..n]`` with
    ``s(m) = sum(comb(m, t) * d[t])``.
    """
    n = r.n
    prog = lp.LinearProgram(_sp_system(r))
    if prog.infeasible is not None:
        raise Infeasible("no symmetric positive extension exists", certificate=prog.infeasible)
    lower, upper = [], []
    for m in range(n + 1):
        obj = [comb(m, t) for t in range(1, n + 1)]
        lo = prog.optimize(obj, "min")
        hi = prog.optimize(obj, "max")
        lower.append(lo.value)
        upper.append(hi.value if isinstance(hi, lp.Optimal) else None)
    return ScBounds(n, tuple(lower), tuple(upper))


def pos_symmetric_prefix_bounds(inc: IncompleteGame, k: int) -> tuple[Game, Game]:
    """Bounds ``gamma <= w(S) <= v(N)`` on unknown coalitions, gamma the size-k value.

    K must be N plus every coalition of size at most k, partially symmetric
    and extendable. These are the monotonicity bounds; they enclose the
    symmetric positive extensions but need not be attained.
    """
    n, N = inc.n, inc.grand
    expected = {S for S in range(1 << n) if size(S) <= k} | {N}
    if set(inc.known) != expected:
        raise StructureMismatch(f"K must consist of N and all coalitions of size <= {k}")
    r = reduce_partially_symmetric(inc)
    if lp.LinearProgram(_sp_system(r)).infeasible is not None:
        raise NotExtendable("no symmetric positive extension exists")
    gamma = r.sigma[k]
    lower = Game.from_function(n, lambda S: inc[S] if S in inc else gamma)
    upper = Game.from_function(n, lambda S: inc[S] if S in inc else inc[N])
    return lower, upper


@dataclass(frozen=True)
class LowerGameReport:
    lower: ReducedSymmetric
    size_dividends: tuple
    report: ClassReport
    negative_size: Optional[int]

    @property
    def positive(self) -> bool:
        return self.report.positive


def lower_game_positivity_regression(r: ReducedIncomplete) -> LowerGameReport:
    """Assemble the pointwise lower game of symmetric positive extensions and test positivity."""
    b = sp_per_coalition_bounds(r)
    low = ReducedSymmetric(r.n, b.lower)
    divs = symmetric_dividends(low)
    report = classify(low.expand())
    neg = report.witness.get("positive")
    return LowerGameReport(low, divs, report, size(neg[0]) if neg else None)
