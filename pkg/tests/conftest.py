import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from pdcg import lp
from pdcg.game import Game, coalition, submasks
from pdcg.incomplete import IncompleteGame

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


def rationals(max_num=20, max_den=6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def games(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(rationals(), min_size=(1 << n) - 1, max_size=(1 << n) - 1))
    return Game(n, (Fraction(0), *vals))


def random_fraction(rng, num=20, den=6):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_game(rng, n):
    return Game(n, (Fraction(0),) + tuple(random_fraction(rng) for _ in range((1 << n) - 1)))


def all_coalitions(n):
    return [coalition(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


# -- oracles ----------------------------------------------------------------

def brute_dividends(g):
    """Inclusion-exclusion, written directly from the definition."""
    d = {}
    for T in range(1 << g.n):
        d[T] = sum(((-1) ** (bin(T).count("1") - bin(S).count("1")) * g[S] for S in submasks(T)), Fraction(0))
    return d


def brute_supermodular(g):
    return all(g[S] + g[T] <= g[S | T] + g[S & T] for S in range(1 << g.n) for T in range(1 << g.n))


def full_positive_system(inc: IncompleteGame, extra=()):
    """One nonnegative variable per nonempty coalition, one equality per known coalition."""
    n = inc.n
    cols = list(range(1, 1 << n))
    eq = [([1 if T & S == T else 0 for T in cols], inc[S]) for S in inc.nonempty()]
    eq += list(extra)
    return cols, lp.make_system(len(cols), eq=eq)


def lp_envelope(inc: IncompleteGame):
    """Per-coalition min/max of w(S) over the undeduplicated dividend LP."""
    cols, sysm = full_positive_system(inc)
    prog = lp.LinearProgram(sysm)
    assert prog.infeasible is None
    lower, upper = {}, {}
    for S in range(1 << inc.n):
        obj = [1 if T & S == T else 0 for T in cols]
        lo = prog.optimize(obj, "min")
        hi = prog.optimize(obj, "max")
        lower[S] = lo.value
        upper[S] = hi.value if isinstance(hi, lp.Optimal) else None
    return lower, upper


def random_incomplete(rng, n, k, lo=-3, hi=8, with_grand=None):
    pool = list(range(1, 1 << n))
    known = rng.sample(pool, min(k, len(pool)))
    if with_grand is True and (1 << n) - 1 not in known:
        known.append((1 << n) - 1)
    if with_grand is False and (1 << n) - 1 in known:
        known.remove((1 << n) - 1)
    return IncompleteGame(n, {S: Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for S in known})


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
