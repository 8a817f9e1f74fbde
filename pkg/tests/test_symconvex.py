import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdcg import lp
from pdcg.errors import NotAMember, OutsideExtremeHull, PreconditionFailed, Unbounded
from pdcg.game import ReducedSymmetric, classify
from pdcg.incomplete import ReducedIncomplete
from pdcg.symconvex import (
    line_chart,
    sc_bounded,
    sc_bounds,
    sc_decompose,
    sc_extendable,
    sc_extreme_games,
    sc_membership,
    sc_system,
    sc_violating_triple,
)

FIX = ReducedIncomplete.from_mapping(4, {2: 2, 4: 8})


def test_fixture_bounds():
    b = sc_bounds(FIX)
    assert b.lower == (0, -1, 2, 3, 8)
    assert b.upper == (0, 1, 2, 5, 8)


def test_fixture_extremes():
    ext = sc_extreme_games(FIX)
    assert len(ext) == 3
    assert [g.s for g in ext.games()] == [(0, -1, 2, 5, 8), (0, 1, 2, 3, 8), (0, 1, 2, 5, 8)]
    assert sorted(ext.vertices()) == lp.enumerate_vertices(sc_system(FIX))
    for g in ext.games():
        assert classify(g.expand()).convex


def test_fixture_decomposition():
    dec = sc_decompose(ReducedSymmetric(4, (0, 0, 2, 4, 8)), FIX)
    assert dec.gaps == {1: Fraction(1, 2), 3: Fraction(1, 2)}
    assert dec.upper == 0
    assert sc_decompose(sc_extreme_games(FIX).upper_game, FIX).upper == 1


def test_not_a_member():
    assert not sc_membership(ReducedSymmetric(4, (0, 0, 3, 4, 8)), FIX)
    with pytest.raises(NotAMember):
        sc_decompose(ReducedSymmetric(4, (0, 2, 2, 4, 8)), FIX)
    assert not sc_membership(ReducedSymmetric(3, (0, 0, 2, 8)), FIX)


def test_violating_triple():
    r = ReducedIncomplete.from_mapping(4, {2: 4, 3: 5})
    assert sc_violating_triple(r) == (0, 2, 3)
    assert not sc_extendable(r)
    with pytest.raises(PreconditionFailed):
        sc_bounded(r)


def test_boundedness_rule():
    assert not sc_bounded(ReducedIncomplete.from_mapping(4, {2: 2}))
    assert not sc_bounded(ReducedIncomplete.from_mapping(4, {4: 2}))
    assert not sc_bounded(ReducedIncomplete.from_mapping(4, {1: 1, 3: 5}))
    assert sc_bounded(FIX)
    # small games: fully known counts as bounded
    assert sc_bounded(ReducedIncomplete.from_mapping(1, {1: 3}))
    assert sc_bounded(ReducedIncomplete.from_mapping(2, {1: 1, 2: 3}))
    assert not sc_bounded(ReducedIncomplete.from_mapping(2, {2: 3}))
    with pytest.raises(Unbounded):
        sc_bounds(ReducedIncomplete.from_mapping(4, {2: 2}))


def test_fig_instance_lower_game():
    r = ReducedIncomplete.from_mapping(6, {1: -1, 2: 0, 4: 4, 6: 12})
    b = sc_bounds(r)
    assert b.lower == (0, -1, 0, 1, 4, 6, 12)
    low = ReducedSymmetric(6, b.lower)
    assert not sc_membership(low, r)


def test_line_chart():
    assert line_chart(FIX) == [(0, 0), (2, 2), (4, 8)]
    assert line_chart(ReducedIncomplete.from_mapping(4, {2: 2})) == [(0, 0), (2, 2), (4, 4)]


def random_instance(rng, n):
    """Strictly convex random reduced game restricted to a random X containing 0 and n."""
    slopes = sorted(Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(n))
    while len(set(slopes)) < n:
        slopes = sorted(Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(n))
    s = [Fraction(0)]
    for a in slopes:
        s.append(s[-1] + a)
    inner = rng.sample(range(1, n), rng.randint(1, n - 1))
    X = sorted({0, n, *inner})
    return ReducedIncomplete(n, tuple(X), tuple(s[k] for k in X)), s


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_bounds_match_lp(n, seed):
    r, _ = random_instance(random.Random(seed), n)
    b = sc_bounds(r)
    prog = lp.LinearProgram(sc_system(r))
    for k in range(n + 1):
        e = [0] * (n + 1)
        e[k] = 1
        assert prog.optimize(e, "min").value == b.lower[k]
        assert prog.optimize(e, "max").value == b.upper[k]


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_bounds_are_attained_by_members(n, seed):
    r, s = random_instance(random.Random(seed), n)
    b = sc_bounds(r)
    assert sc_membership(ReducedSymmetric(n, tuple(b.upper)), r)
    ext = sc_extreme_games(r)
    for k, g in ext.extremes.items():
        assert sc_membership(g, r)
        assert g[k] == b.lower[k]
    assert len(ext) == n - len(r.sizes) + 2


def test_random_decompositions():
    rng = random.Random(5)
    for _ in range(30):
        r, _ = random_instance(rng, rng.randint(3, 7))
        games = sc_extreme_games(r).games()
        w = [Fraction(rng.randint(0, 5)) for _ in games]
        if not any(w):
            w[0] = Fraction(1)
        w = [x / sum(w) for x in w]
        s = tuple(sum(a * g[k] for a, g in zip(w, games)) for k in range(r.n + 1))
        dec = sc_decompose(ReducedSymmetric(r.n, s), r)
        assert dec.total() == 1


def test_decoupled_gaps_have_more_vertices():
    # gaps {1} and {4} are separated by the consecutive known sizes 2 and 3,
    # so the extension set is the square [-1, 2] x [14, 17]
    r = ReducedIncomplete.from_mapping(5, {2: 4, 3: 9, 5: 25})
    verts = lp.enumerate_vertices(sc_system(r))
    assert [(v[1], v[4]) for v in verts] == [(-1, 14), (-1, 17), (2, 14), (2, 17)]
    ext = sc_extreme_games(r)
    assert len(ext) == 3
    assert set(ext.vertices()) < set(verts)
    corner = ReducedSymmetric(5, verts[0])
    assert sc_membership(corner, r)
    with pytest.raises(OutsideExtremeHull):
        sc_decompose(corner, r)


def test_crossing_secants_add_two_kink_vertices():
    # left secant -3m and right secant 3m - 15 cross at 5/2 inside the gap
    r = ReducedIncomplete.from_mapping(6, {1: -3, 5: 0, 6: 3})
    verts = set(lp.enumerate_vertices(sc_system(r)))
    ext = sc_extreme_games(r)
    assert set(ext.vertices()) < verts
    extra = {v[2:5] for v in verts - set(ext.vertices())}
    assert extra == {(-6, -6, -3), (-6, Fraction(-9, 2), -3)}


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_listed_extremes_are_vertices_and_upper_dominates(n, seed):
    rnd = random.Random(seed)
    r, _ = random_instance(rnd, n)
    verts = lp.enumerate_vertices(sc_system(r))
    ext = sc_extreme_games(r)
    assert set(ext.vertices()) <= set(verts)
    w = [Fraction(rnd.randint(0, 4)) for _ in verts]
    w[0] += 1
    s = [sum(a * v[k] for a, v in zip(w, verts)) / sum(w) for k in range(n + 1)]
    assert all(s[k] <= ext.upper_game[k] for k in range(n + 1))
