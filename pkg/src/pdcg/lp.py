"""Exact rational linear programming.

Systems have the form ``A x = b``, ``C x <= d`` with a per-variable
nonnegativity flag. Solving goes through a dense two-phase simplex tableau
over :class:`fractions.Fraction` with Bland's rule. When phase 1 ends with a
positive infeasibility, the simplex multipliers of the final basis give a
Farkas certificate ``(y, z)`` with

    A^T y + C^T z >= 0 on nonnegative variables, = 0 on free ones,
    z >= 0,  b.y + d.z = -1,

which rules out every feasible point. Every outcome is re-verified against
the system before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .errors import SizeLimitExceeded, UnboundedPolytope
from .game import as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)

VERTEX_COMBINATION_CAP = 400_000


@dataclass(frozen=True)
class RationalMatrixSystem:
    n_vars: int
    eq_rows: tuple = ()
    eq_rhs: tuple = ()
    ineq_rows: tuple = ()   # rows of C in C x <= d
    ineq_rhs: tuple = ()
    nonneg: tuple = ()

    def __post_init__(self):
        fr = lambda rows: tuple(tuple(as_fraction(a) for a in r) for r in rows)
        object.__setattr__(self, "eq_rows", fr(self.eq_rows))
        object.__setattr__(self, "ineq_rows", fr(self.ineq_rows))
        object.__setattr__(self, "eq_rhs", tuple(as_fraction(b) for b in self.eq_rhs))
        object.__setattr__(self, "ineq_rhs", tuple(as_fraction(b) for b in self.ineq_rhs))
        nonneg = self.nonneg
        if isinstance(nonneg, bool):
            nonneg = (nonneg,) * self.n_vars
        elif not nonneg:
            nonneg = (True,) * self.n_vars
        object.__setattr__(self, "nonneg", tuple(bool(f) for f in nonneg))
        if len(self.nonneg) != self.n_vars:
            raise ValueError("one nonnegativity flag per variable is required")
        if len(self.eq_rows) != len(self.eq_rhs) or len(self.ineq_rows) != len(self.ineq_rhs):
            raise ValueError("row and right-hand-side counts differ")
        for r in self.eq_rows + self.ineq_rows:
            if len(r) != self.n_vars:
                raise ValueError(f"row of length {len(r)} in a system with {self.n_vars} variables")


def make_system(n_vars, eq=(), le=(), ge=(), nonneg=True) -> RationalMatrixSystem:
    """Convenience builder; ``eq``/``le``/``ge`` are iterables of ``(row, rhs)``."""
    eq = list(eq)
    ineq = list(le) + [([-a for a in row], -rhs) for row, rhs in ge]
    return RationalMatrixSystem(
        n_vars,
        eq_rows=tuple(r for r, _ in eq),
        eq_rhs=tuple(b for _, b in eq),
        ineq_rows=tuple(r for r, _ in ineq),
        ineq_rhs=tuple(b for _, b in ineq),
        nonneg=nonneg,
    )


# -- outcomes ---------------------------------------------------------------

@dataclass(frozen=True)
class Feasible:
    point: tuple


@dataclass(frozen=True)
class Infeasible:
    """Farkas multipliers: ``y`` for equality rows, ``z >= 0`` for inequality rows."""

    y: tuple
    z: tuple


@dataclass(frozen=True)
class Unbounded:
    point: tuple
    ray: tuple


@dataclass(frozen=True)
class Optimal:
    point: tuple
    value: Fraction


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


def point_satisfies(sys: RationalMatrixSystem, x: Sequence) -> bool:
    if len(x) != sys.n_vars:
        return False
    if any(flag and xi < 0 for flag, xi in zip(sys.nonneg, x)):
        return False
    if any(_dot(r, x) != b for r, b in zip(sys.eq_rows, sys.eq_rhs)):
        return False
    return all(_dot(r, x) <= b for r, b in zip(sys.ineq_rows, sys.ineq_rhs))


def certificate_valid(sys: RationalMatrixSystem, y: Sequence, z: Sequence) -> bool:
    if len(y) != len(sys.eq_rows) or len(z) != len(sys.ineq_rows):
        return False
    if any(zi < 0 for zi in z):
        return False
    for j in range(sys.n_vars):
        col = _dot((r[j] for r in sys.eq_rows), y) + _dot((r[j] for r in sys.ineq_rows), z)
        if col < 0 or (not sys.nonneg[j] and col != 0):
            return False
    return _dot(sys.eq_rhs, y) + _dot(sys.ineq_rhs, z) == -1


def ray_valid(sys: RationalMatrixSystem, ray: Sequence, objective: Sequence, direction: str) -> bool:
    if any(flag and r < 0 for flag, r in zip(sys.nonneg, ray)):
        return False
    if any(_dot(row, ray) != 0 for row in sys.eq_rows):
        return False
    if any(_dot(row, ray) > 0 for row in sys.ineq_rows):
        return False
    gain = _dot(objective, ray)
    return gain < 0 if direction == "min" else gain > 0


# -- simplex ----------------------------------------------------------------

class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj = None
        self.obj_rhs = ZERO   # equals minus the current objective value

    def copy(self):
        t = _Tableau([list(r) for r in self.rows], list(self.rhs), list(self.basis))
        return t

    def set_objective(self, cost):
        obj = list(cost)
        obj_rhs = ZERO
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                obj = [o - cb * a if a else o for o, a in zip(obj, row)]
                obj_rhs -= cb * self.rhs[i]
        self.obj = obj
        self.obj_rhs = obj_rhs

    def pivot(self, r, c):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = [a / piv if a else a for a in row]
            self.rows[r] = row
            self.rhs[r] /= piv
        br = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    self.rows[i] = [o - f * a if a else o for o, a in zip(other, row)]
                    self.rhs[i] -= f * br
        if self.obj is not None:
            f = self.obj[c]
            if f:
                self.obj = [o - f * a if a else o for o, a in zip(self.obj, row)]
                self.obj_rhs -= f * br
        self.basis[r] = c

    def run(self, allowed):
        """Bland's rule. Returns None at optimality or the entering column of an unbounded edge."""
        while True:
            enter = next((j for j in range(allowed) if self.obj[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)


class LinearProgram:
    """One system, phase 1 solved once and shared across objectives.

    Not thread-safe; create one instance per thread.
    """

    def __init__(self, sys: RationalMatrixSystem):
        self.sys = sys
        # standard-form columns: (original variable, sign) then one slack per inequality row
        self.var_cols = []
        for j in range(sys.n_vars):
            self.var_cols.append((j, 1))
            if not sys.nonneg[j]:
                self.var_cols.append((j, -1))
        nv = len(self.var_cols)
        m_eq, m_in = len(sys.eq_rows), len(sys.ineq_rows)
        self.n_struct = nv + m_in
        rows, rhs, signs = [], [], []
        for i, (r, b) in enumerate(list(zip(sys.eq_rows, sys.eq_rhs)) + list(zip(sys.ineq_rows, sys.ineq_rhs))):
            row = [r[j] * s for j, s in self.var_cols] + [ZERO] * m_in
            if i >= m_eq:
                row[nv + i - m_eq] = ONE
            sign = -1 if b < 0 else 1
            if sign < 0:
                row = [-a for a in row]
                b = -b
            rows.append(row)
            rhs.append(b)
            signs.append(sign)
        self.signs = signs
        self.m = len(rows)
        # initial identity basis: nonnegated slacks where possible, artificials elsewhere
        basis, init_cols, n_art = [], [], 0
        for i in range(self.m):
            if i >= m_eq and signs[i] > 0:
                basis.append(nv + i - m_eq)
            else:
                basis.append(self.n_struct + n_art)
                n_art += 1
            init_cols.append(basis[-1])
        for i, row in enumerate(rows):
            row.extend([ZERO] * n_art)
            if basis[i] >= self.n_struct:
                row[basis[i]] = ONE
        self.n_art = n_art
        self.init_cols = init_cols
        self._phase1 = _Tableau(rows, rhs, basis)
        self._ready = None   # tableau after phase 1, artificials removed
        self._infeasible = None
        self._solve_phase1()

    def _solve_phase1(self):
        t = self._phase1
        total = self.n_struct + self.n_art
        cost = [ZERO] * self.n_struct + [ONE] * self.n_art
        t.set_objective(cost)
        t.run(total)   # bounded below by 0, never returns an edge
        w = -t.obj_rhs
        if w > 0:
            pi = [cost[c] - t.obj[c] for c in self.init_cols]
            y_std = [-p / w for p in pi]
            u = [s * y for s, y in zip(self.signs, y_std)]
            m_eq = len(self.sys.eq_rows)
            out = Infeasible(tuple(u[:m_eq]), tuple(u[m_eq:]))
            if not certificate_valid(self.sys, out.y, out.z):
                raise AssertionError("Farkas certificate failed verification")
            self._infeasible = out
            return
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(t.rows):
            if t.basis[i] >= self.n_struct:
                col = next((j for j in range(self.n_struct) if t.rows[i][j] != 0), None)
                if col is None:
                    del t.rows[i], t.rhs[i], t.basis[i]
                    continue
                t.pivot(i, col)
            i += 1
        t.rows = [row[: self.n_struct] for row in t.rows]
        t.obj = None
        self._ready = t

    @property
    def infeasible(self) -> Optional[Infeasible]:
        return self._infeasible

    def _std_point(self, t):
        x = [ZERO] * self.n_struct
        for i, b in enumerate(t.basis):
            x[b] = t.rhs[i]
        return x

    def _to_original(self, x_std):
        x = [ZERO] * self.sys.n_vars
        for col, (j, s) in enumerate(self.var_cols):
            if x_std[col]:
                x[j] += s * x_std[col]
        return tuple(x)

    def feasibility(self):
        if self._infeasible is not None:
            return self._infeasible
        point = self._to_original(self._std_point(self._ready))
        if not point_satisfies(self.sys, point):
            raise AssertionError("phase-1 point failed verification")
        return Feasible(point)

    def optimize(self, objective: Sequence, direction: str = "min"):
        if direction not in ("min", "max"):
            raise ValueError("direction must be 'min' or 'max'")
        if self._infeasible is not None:
            return self._infeasible
        objective = tuple(as_fraction(c) for c in objective)
        sgn = 1 if direction == "min" else -1
        cost = [sgn * s * objective[j] for j, s in self.var_cols] + [ZERO] * (self.n_struct - len(self.var_cols))
        t = self._ready.copy()
        t.set_objective(cost)
        edge = t.run(self.n_struct)
        x_std = self._std_point(t)
        point = self._to_original(x_std)
        if not point_satisfies(self.sys, point):
            raise AssertionError("simplex point failed verification")
        if edge is not None:
            ray_std = [ZERO] * self.n_struct
            ray_std[edge] = ONE
            for i, b in enumerate(t.basis):
                ray_std[b] = -t.rows[i][edge]
            ray = self._to_original(ray_std)
            if not ray_valid(self.sys, ray, objective, direction):
                raise AssertionError("unbounded ray failed verification")
            return Unbounded(point, ray)
        return Optimal(point, _dot(objective, point))


def solve_feasibility(sys: RationalMatrixSystem):
    """Feasible point or Farkas certificate; exactly one is returned."""
    return LinearProgram(sys).feasibility()


def optimize(sys: RationalMatrixSystem, objective: Sequence, direction: str = "min"):
    return LinearProgram(sys).optimize(objective, direction)


# -- exact linear algebra ---------------------------------------------------

def _independent_rows(rows, rhs):
    """Row-reduce; returns (reduced rows, rhs) spanning the same space, or None if inconsistent."""
    work = [[as_fraction(a) for a in r] + [as_fraction(b)] for r, b in zip(rows, rhs)]
    n = len(rows[0]) if rows else 0
    out = []
    col = 0
    while work and col < n:
        piv = next((i for i, r in enumerate(work) if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        prow = work.pop(piv)
        p = prow[col]
        prow = [a / p for a in prow]
        work = [[a - r[col] * b for a, b in zip(r, prow)] if r[col] else r for r in work]
        out.append(prow)
        col += 1
    if any(r[-1] != 0 for r in work):   # leftover rows are 0 = c
        return None
    return [r[:-1] for r in out], [r[-1] for r in out]


def solve_square(M, b) -> Optional[list]:
    """Unique solution of ``M x = b`` for square ``M``, or None when singular."""
    n = len(M)
    a = [[as_fraction(x) for x in r] + [as_fraction(bi)] for r, bi in zip(M, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        row = [x / p for x in a[c]]
        a[c] = row
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], row)]
    return [a[i][n] for i in range(n)]


def rank(rows) -> int:
    if not rows:
        return 0
    red = _independent_rows(rows, [ZERO] * len(rows))
    return len(red[0])


def enumerate_vertices(sys: RationalMatrixSystem, check_bounded: bool = True) -> list[tuple]:
    """All vertices of a bounded polytope, sorted, each the unique solution of its tight rows.

    Candidate tight sets are drawn from the inequality rows plus the bounds
    ``x_j >= 0``; a bound in the set removes its variable, so each candidate
    costs one square solve.
    """
    n = sys.n_vars
    if check_bounded:
        prog = LinearProgram(sys)
        if prog.infeasible is not None:
            return []
        for j in range(n):
            e = [ZERO] * n
            e[j] = ONE
            for direction in ("min", "max"):
                if isinstance(prog.optimize(e, direction), Unbounded):
                    raise UnboundedPolytope(f"variable {j} is unbounded ({direction})")
    if sys.eq_rows:
        red = _independent_rows(list(sys.eq_rows), list(sys.eq_rhs))
        if red is None:
            return []
        E, e_rhs = red
    else:
        E, e_rhs = [], []
    k = n - len(E)
    # inequality-type constraints: ("row", i) or ("bound", j)
    cands = [("row", i) for i in range(len(sys.ineq_rows))] + [("bound", j) for j in range(n) if sys.nonneg[j]]
    total = comb(len(cands), k) if k <= len(cands) else 0
    if total > VERTEX_COMBINATION_CAP:
        raise SizeLimitExceeded(f"vertex enumeration needs {total} candidate tight sets")
    found = set()
    for chosen in combinations(cands, k):
        zero = {j for kind, j in chosen if kind == "bound"}
        keep = [j for j in range(n) if j not in zero]
        rows = [[r[j] for j in keep] for r in E]
        rhs = list(e_rhs)
        for kind, i in chosen:
            if kind == "row":
                rows.append([sys.ineq_rows[i][j] for j in keep])
                rhs.append(sys.ineq_rhs[i])
        sol = solve_square(rows, rhs) if rows else []
        if sol is None:
            continue
        x = [ZERO] * n
        for j, val in zip(keep, sol):
            x[j] = val
        x = tuple(x)
        if x not in found and point_satisfies(sys, x):
            found.add(x)
    return sorted(found)
