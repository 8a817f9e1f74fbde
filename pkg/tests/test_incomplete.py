import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdcg.errors import CrossedBounds, DimensionMismatch, NotAChain, NotPartiallySymmetric
from pdcg.game import Game, classify, coalition, game_from_sizes
from pdcg.incomplete import (
    IncompleteGame,
    ReducedIncomplete,
    chain_convex_extension,
    interval_hull,
    is_extension,
    lattice_closure,
    reduce_partially_symmetric,
)
from test_game import TABLE


def test_incomplete_inserts_empty():
    inc = IncompleteGame(3, {7: 4})
    assert inc.known == [0, 7]
    assert inc[0] == 0
    assert inc.nonempty() == [7]
    with pytest.raises(ValueError):
        IncompleteGame(2, {4: 1})
    with pytest.raises(ValueError):
        IncompleteGame(2, {0: 1})


def test_is_extension():
    assert is_extension(Game.zero(3), IncompleteGame(3, {}))
    inc = IncompleteGame(3, {1: 1, 7: 9})
    assert is_extension(TABLE, inc)
    assert not is_extension(TABLE, IncompleteGame(3, {1: 2, 7: 9}))
    with pytest.raises(DimensionMismatch):
        is_extension(Game.zero(2), inc)


def test_reduce_partially_symmetric():
    r = reduce_partially_symmetric(IncompleteGame(2, {1: 1, 2: 1, 3: 3}))
    assert r.sizes == (0, 1, 2) and r.values == (0, 1, 3)
    with pytest.raises(NotPartiallySymmetric) as exc:
        reduce_partially_symmetric(IncompleteGame(2, {1: 1, 2: 2}))
    assert (exc.value.first, exc.value.second) == ("{1}", "{2}")
    pairs = {S: 2 for S in range(16) if bin(S).count("1") == 2}
    r = reduce_partially_symmetric(IncompleteGame(4, {**pairs, 15: 20}))
    assert r.sigma == {0: 0, 2: 2, 4: 20}


def test_reduced_round_trip():
    r = ReducedIncomplete.from_mapping(4, {2: 2, 4: 8})
    assert reduce_partially_symmetric(r.to_incomplete()) == r
    with pytest.raises(ValueError):
        ReducedIncomplete(3, (0, 2, 1), (0, 1, 1))
    with pytest.raises(ValueError):
        ReducedIncomplete(3, (1,), (1,))


def test_lattice_closure():
    chain = {0, 1, 3, 7}
    assert lattice_closure(chain) == chain
    assert lattice_closure({3, 6}) == {3, 6, 2, 7}
    assert lattice_closure(set(range(8))) == set(range(8))


@given(st.lists(st.integers(0, 31), min_size=1, max_size=6))
def test_lattice_closure_is_closed_and_minimal(K):
    L = lattice_closure(K)
    assert set(K) <= L
    assert all(A | B in L and A & B in L for A in L for B in L)
    assert lattice_closure(L) == L


def test_chain_examples():
    g = chain_convex_extension(IncompleteGame(3, {7: 6}))
    assert all(g[S] == 2 * bin(S).count("1") for S in range(8))
    inc = IncompleteGame(3, {1: 1, 3: 3, 7: 6})
    g = chain_convex_extension(inc)
    assert (g(2), g(3), g(2, 3)) == (2, 3, 5)
    assert is_extension(g, inc) and classify(g).convex
    with pytest.raises(NotAChain):
        chain_convex_extension(IncompleteGame(2, {1: 0, 2: 0}))


def _random_chain(rng, n):
    perm = rng.sample(range(n), n)
    prefixes = [0]
    for i in perm:
        prefixes.append(prefixes[-1] | 1 << i)
    keep = sorted(rng.sample(range(1, n + 1), rng.randint(0, n)))
    return IncompleteGame(n, {prefixes[k]: Fraction(rng.randint(-10, 10), rng.randint(1, 4)) for k in keep})


def test_chain_extension_random():
    rng = random.Random(3)
    for _ in range(60):
        inc = _random_chain(rng, rng.randint(1, 7))
        g = chain_convex_extension(inc)
        assert is_extension(g, inc)
        assert classify(g).convex


def test_interval_hull():
    g = game_from_sizes(3, [0, 1, 4, 9])
    iv = interval_hull(g, g)
    assert all(iv[S] == (g[S], g[S]) for S in range(8))
    lo = game_from_sizes(4, [0, -1, 2, 3, 8])
    hi = game_from_sizes(4, [0, 1, 2, 5, 8])
    iv = interval_hull(lo, hi)
    assert iv[coalition([2])] == (-1, 1)
    assert iv[coalition([1, 2, 4])] == (3, 5)
    assert iv[0] == (0, 0)
    with pytest.raises(CrossedBounds) as exc:
        interval_hull(hi, lo)
    assert exc.value.coalition == "{1}"
    with pytest.raises(DimensionMismatch):
        interval_hull(g, lo)
