import random
from fractions import Fraction
from itertools import product

import pytest
from scipy.optimize import linprog

from pdcg import lp
from pdcg.errors import SizeLimitExceeded, UnboundedPolytope


def test_single_variable_cases():
    assert lp.solve_feasibility(lp.make_system(1, eq=[([1], 1)])) == lp.Feasible((1,))
    out = lp.solve_feasibility(lp.make_system(1, eq=[([1], -1)]))
    assert isinstance(out, lp.Infeasible)
    assert out.y == (1,)
    sysm = lp.make_system(1, eq=[([1], -1)])
    assert lp.certificate_valid(sysm, out.y, out.z)


def test_positive_primal_certificate():
    # d1 = 2, d1 + d2 + d12 = 1, d >= 0
    sysm = lp.make_system(3, eq=[([1, 0, 0], 2), ([1, 1, 1], 1)])
    out = lp.solve_feasibility(sysm)
    assert isinstance(out, lp.Infeasible)
    assert out.y == (-1, 1)
    assert lp.certificate_valid(sysm, out.y, out.z)


def test_optimize_min_and_unbounded_max():
    sysm = lp.make_system(1)
    assert lp.optimize(sysm, [1], "min") == lp.Optimal((0,), 0)
    out = lp.optimize(sysm, [1], "max")
    assert isinstance(out, lp.Unbounded)
    assert lp.ray_valid(sysm, out.ray, [1], "max")


def test_simplex_vertices():
    sysm = lp.make_system(3, eq=[([1, 1, 1], 1)])
    assert lp.enumerate_vertices(sysm) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_vertices_of_square_with_free_variables():
    sysm = lp.make_system(2, le=[([1, 0], 1), ([0, 1], 1)], ge=[([1, 0], 0), ([0, 1], 0)], nonneg=False)
    assert lp.enumerate_vertices(sysm) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_unbounded_polytope_rejected():
    with pytest.raises(UnboundedPolytope):
        lp.enumerate_vertices(lp.make_system(2, eq=[([1, -1], 0)]))


def test_vertex_cap(monkeypatch):
    monkeypatch.setattr(lp, "VERTEX_COMBINATION_CAP", 2)
    with pytest.raises(SizeLimitExceeded):
        lp.enumerate_vertices(lp.make_system(3, eq=[([1, 1, 1], 1)]))


def test_square_and_rank():
    assert lp.solve_square([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert lp.solve_square([[1, 1], [2, 2]], [1, 2]) is None
    assert lp.rank([[1, 2], [2, 4], [0, 1]]) == 2


def test_degenerate_cycling_example():
    # Beale's example cycles under Dantzig's rule; Bland's rule terminates
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    le = [([Fraction(1, 4), -60, Fraction(-1, 25), 9], 0),
          ([Fraction(1, 2), -90, Fraction(-1, 50), 3], 0),
          ([0, 0, 1, 0], 1)]
    out = lp.optimize(lp.make_system(4, le=le), c, "min")
    assert out.value == Fraction(-1, 20)


def _random_system(rng):
    n = rng.randint(1, 4)
    row = lambda: [rng.randint(-3, 3) for _ in range(n)]
    eq = [(row(), rng.randint(-4, 4)) for _ in range(rng.randint(0, 2))]
    le = [(row(), rng.randint(-4, 6)) for _ in range(rng.randint(0, 3))]
    nonneg = tuple(rng.random() < 0.7 for _ in range(n))
    return n, eq, le, nonneg


def _scipy(n, eq, le, nonneg, c):
    bounds = [(0, None) if f else (None, None) for f in nonneg]
    return linprog(
        c,
        A_ub=[r for r, _ in le] or None, b_ub=[b for _, b in le] or None,
        A_eq=[r for r, _ in eq] or None, b_eq=[b for _, b in eq] or None,
        bounds=bounds, method="highs",
    )


def test_random_programs_against_scipy():
    rng = random.Random(7)
    seen = set()
    for _ in range(300):
        n, eq, le, nonneg = _random_system(rng)
        c = [rng.randint(-3, 3) for _ in range(n)]
        sysm = lp.make_system(n, eq=eq, le=le, nonneg=nonneg)
        ours = lp.optimize(sysm, c, "min")
        ref = _scipy(n, eq, le, nonneg, c)
        if isinstance(ours, lp.Infeasible):
            assert ref.status == 2
            assert lp.certificate_valid(sysm, ours.y, ours.z)
            seen.add("infeasible")
        elif isinstance(ours, lp.Unbounded):
            assert ref.status == 3
            assert lp.point_satisfies(sysm, ours.point)
            assert lp.ray_valid(sysm, ours.ray, c, "min")
            seen.add("unbounded")
        else:
            assert ref.status == 0
            assert lp.point_satisfies(sysm, ours.point)
            assert abs(float(ours.value) - ref.fun) < 1e-7
            seen.add("optimal")
    assert seen == {"infeasible", "unbounded", "optimal"}


def test_enumerated_vertices_are_basic_points():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 3)
        le = [([rng.randint(-2, 3) for _ in range(n)], rng.randint(1, 6)) for _ in range(rng.randint(1, 3))]
        le += [([1] * n, 5)]
        sysm = lp.make_system(n, le=le)
        verts = lp.enumerate_vertices(sysm)
        assert verts, "nonempty: origin is feasible"
        # every LP optimum in a random direction is attained at an enumerated vertex
        for _ in range(5):
            c = [rng.randint(-3, 3) for _ in range(n)]
            best = min(sum(a * x for a, x in zip(c, v)) for v in verts)
            assert lp.optimize(sysm, c, "min").value == best
        # brute force over a fine grid never beats the vertex optimum
        grid = [Fraction(k, 2) for k in range(11)]
        for pt in product(grid, repeat=n):
            if lp.point_satisfies(sysm, pt):
                assert sum(pt) <= max(sum(v) for v in verts)


def test_linear_program_reuse():
    prog = lp.LinearProgram(lp.make_system(2, eq=[([1, 1], 4)]))
    assert prog.infeasible is None
    assert prog.optimize([1, 0], "max").value == 4
    assert prog.optimize([1, 0], "min").value == 0
    assert isinstance(prog.feasibility(), lp.Feasible)
