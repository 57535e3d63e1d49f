"""Exact rational simplex for small equality-form linear programs.

Solves  min c.x  subject to  A x = b, x >= 0  with all arithmetic exact.
Columns of A are sparse integer vectors (in this package they have at most a
handful of +-1 entries), b is a vector of nonnegative Fractions and c is an
integer vector.  The solver keeps the basis inverse in integer-adjugate form
(M = d * B^-1 with M integral and d = det B), so every pivot is fraction-free
integer arithmetic with one exact division.

Warm restarts are first-class: `resolve_b` reuses the optimal basis through
dual-simplex steps when only b changes (bootstrap replicates, distribution
sweeps), and `resolve_costs` restarts the primal when only c changes
(lower/upper bound pairs share a basis).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = [
    "Column",
    "ExactSimplex",
    "Infeasible",
    "LpOutcome",
    "column_dot",
    "verify_farkas",
]

# A sparse column: tuple of (row index, integer coefficient) pairs.
Column = tuple[tuple[int, int], ...]

# Consecutive degenerate pivots tolerated before switching to Bland's rule.
_DEGENERATE_LIMIT = 30
_MAX_PIVOTS = 200_000


class Infeasible(Exception):
    """Raised when A x = b, x >= 0 has no solution.

    Carries a Farkas certificate: a rational row vector pi with
    pi . A_j <= 0 for every column j and pi . b > 0.
    """

    def __init__(self, farkas: tuple[Fraction, ...], violation: Fraction):
        super().__init__(f"infeasible (Farkas violation {violation})")
        self.farkas = farkas
        self.violation = violation


@dataclass(frozen=True)
class LpOutcome:
    """Optimal value plus primal and dual certificates."""

    value: Fraction
    solution: dict[int, Fraction]  # structural variable -> value, basic vars only
    dual: tuple[Fraction, ...]  # y with y.b == value and c_j - y.A_j >= 0 (min sense)
    basis: tuple[int, ...]
    pivots: int


def column_dot(column: Column, vec: Sequence) -> object:
    """Dot product of a sparse column with a dense vector."""
    total = 0
    for r, coef in column:
        total += coef * vec[r] if coef != 1 else vec[r]
    return total


def verify_farkas(columns: Sequence[Column], b: Sequence[Fraction], pi: Sequence[Fraction]) -> bool:
    """Check that pi certifies infeasibility of A x = b, x >= 0."""
    if sum(p * v for p, v in zip(pi, b)) <= 0:
        return False
    return all(column_dot(col, pi) <= 0 for col in columns)


class ExactSimplex:
    """Two-phase exact simplex over a fixed column set.

    The instance owns the constraint matrix (as sparse columns); b and c can
    vary across solves.  Artificial variables are numbered n .. n+m-1 and are
    never re-admitted once phase 1 ends; rows whose artificial cannot be
    pivoted out are structurally redundant and their artificial stays basic
    at level zero forever.
    """

    def __init__(self, n_rows: int, columns: Sequence[Column], costs: Sequence[int]):
        if len(columns) != len(costs):
            raise ValueError("one cost per column required")
        self.m = n_rows
        self.columns: list[Column] = [tuple(col) for col in columns]
        self.n = len(self.columns)
        self.costs: list[int] = [int(c) for c in costs]
        # Solver state (populated by solve()).
        self._basis: list[int] | None = None  # variable id per row
        self._M: list[list[int]] | None = None  # d * inverse of basis matrix
        self._d: int = 1  # det of basis matrix, kept > 0
        self._btilde: list[int] | None = None  # N * b
        self._N: int = 1  # common denominator of b
        self._xt: list[int] | None = None  # M . btilde, >= 0 when feasible
        self._pivots = 0

    # -- public API ----------------------------------------------------------

    def solve(self, b: Sequence[Fraction]) -> LpOutcome:
        """Cold solve: phase 1 from the all-artificial basis, then phase 2."""
        self._load_b(b)
        m = self.m
        self._basis = [self.n + i for i in range(m)]
        self._M = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        self._d = 1
        self._xt = list(self._btilde)
        self._pivots = 0
        self._run_phase1()
        self._run_primal(self.costs)
        return self._outcome()

    def resolve_b(self, b: Sequence[Fraction]) -> LpOutcome:
        """Warm solve after a change of b only, via dual simplex."""
        if self._basis is None:
            return self.solve(b)
        self._load_b(b)
        self._xt = self._mat_vec(self._btilde)
        self._pivots = 0
        self._run_dual(self.costs)
        self._check_inert_rows()
        return self._outcome()

    def resolve_costs(self, costs: Sequence[int]) -> LpOutcome:
        """Warm solve after a change of c only, restarting the primal."""
        if self._basis is None:
            raise RuntimeError("no basis yet; call solve() first")
        self.costs = [int(c) for c in costs]
        self._pivots = 0
        self._run_primal(self.costs)
        return self._outcome()

    # -- internals -----------------------------------------------------------

    def _load_b(self, b: Sequence[Fraction]) -> None:
        if len(b) != self.m:
            raise ValueError("b has wrong length")
        fracs = [Fraction(v) for v in b]
        if any(v < 0 for v in fracs):
            raise ValueError("b must be nonnegative")
        self._N = lcm(*(v.denominator for v in fracs)) if fracs else 1
        self._btilde = [int(v * self._N) for v in fracs]
        self._bfrac = fracs

    def _column(self, j: int) -> Column:
        if j < self.n:
            return self.columns[j]
        return ((j - self.n, 1),)

    def _cost_of(self, j: int, costs: Sequence[int]) -> int:
        return costs[j] if j < self.n else 0

    def _mat_vec(self, v: Sequence[int]) -> list[int]:
        return [sum(row[k] * v[k] for k in range(self.m) if v[k]) for row in self._M]

    def _col_times_M(self, col: Column) -> list[int]:
        # w = M . A_j, exploiting sparsity of the column.
        M = self._M
        w = [0] * self.m
        for r, coef in col:
            if coef == 1:
                for i in range(self.m):
                    w[i] += M[i][r]
            else:
                for i in range(self.m):
                    w[i] += coef * M[i][r]
        return w

    def _pricing_vector(self, costs: Sequence[int]) -> list[int]:
        # y_int = c_B . M; true duals are y_int / d.
        M = self._M
        y = [0] * self.m
        for i, var in enumerate(self._basis):
            c = self._cost_of(var, costs)
            if c:
                row = M[i]
                for k in range(self.m):
                    if row[k]:
                        y[k] += c * row[k]
        return y

    def _reduced_numerator(self, j: int, y: list[int], costs: Sequence[int]) -> int:
        # sign(reduced cost of j) == sign of this integer, since d > 0
        return self._d * costs[j] - column_dot(self.columns[j], y)

    def _pivot(self, row: int, j: int, w: list[int]) -> None:
        """Replace the basic variable in `row` by variable j (direction w = M.A_j)."""
        M, d, xt = self._M, self._d, self._xt
        wr = w[row]
        if wr == 0:
            raise RuntimeError("zero pivot")
        Mr = M[row]
        xr = xt[row]
        for i in range(self.m):
            if i == row:
                continue
            wi = w[i]
            Mi = M[i]
            if wi:
                for k in range(self.m):
                    Mi[k] = (wr * Mi[k] - wi * Mr[k]) // d
                xt[i] = (wr * xt[i] - wi * xr) // d
            else:
                for k in range(self.m):
                    Mi[k] = (wr * Mi[k]) // d
                xt[i] = (wr * xt[i]) // d
        self._d = wr
        if self._d < 0:
            self._d = -self._d
            for i in range(self.m):
                Mi = M[i]
                for k in range(self.m):
                    Mi[k] = -Mi[k]
                xt[i] = -xt[i]
        self._basis[row] = j
        self._pivots += 1
        if self._pivots > _MAX_PIVOTS:
            raise RuntimeError("pivot limit exceeded")

    def _run_phase1(self) -> None:
        phase1_costs = [0] * self.n
        self._primal_loop(phase1_costs, artificial_cost=1)
        # Optimal phase-1 value = sum of artificial levels.
        total = 0
        for i, var in enumerate(self._basis):
            if var >= self.n:
                total += self._xt[i]
        if total:
            y = self._pricing_vector_art(phase1_costs)
            pi = tuple(Fraction(y[k], self._d) for k in range(self.m))
            raise Infeasible(pi, Fraction(total, self._d * self._N))
        self._evict_artificials()

    def _pricing_vector_art(self, costs: Sequence[int]) -> list[int]:
        # Pricing vector when artificials carry unit cost (phase 1 only).
        M = self._M
        y = [0] * self.m
        for i, var in enumerate(self._basis):
            c = costs[var] if var < self.n else 1
            if c:
                row = M[i]
                for k in range(self.m):
                    if row[k]:
                        y[k] += c * row[k]
        return y

    def _evict_artificials(self) -> None:
        # Pivot artificials out of the basis on any nonzero entry; rows where
        # none exists are structurally redundant and keep an inert artificial.
        for row in range(self.m):
            if self._basis[row] < self.n:
                continue
            Mr = self._M[row]
            for j, col in enumerate(self.columns):
                alpha = column_dot(col, Mr)
                if alpha:
                    self._pivot(row, j, self._col_times_M(col))
                    break

    def _primal_loop(self, costs: Sequence[int], artificial_cost: int = 0) -> None:
        bland = False
        degenerate_streak = 0
        while True:
            if artificial_cost:
                y = self._pricing_vector_art(costs)
            else:
                y = self._pricing_vector(costs)
            d = self._d
            enter = -1
            best = 0
            if bland:
                for j in range(self.n):
                    if d * costs[j] - column_dot(self.columns[j], y) < 0:
                        enter = j
                        break
            else:
                for j in range(self.n):
                    num = d * costs[j] - column_dot(self.columns[j], y)
                    if num < best:
                        best = num
                        enter = j
            if enter < 0:
                return
            w = self._col_times_M(self.columns[enter])
            xt = self._xt
            row = -1
            rx = rw = 0  # ratio of current best leaving row
            for i in range(self.m):
                wi = w[i]
                if wi <= 0:
                    continue
                xi = xt[i]
                if row < 0 or xi * rw < rx * wi or (
                    xi * rw == rx * wi and self._basis[i] < self._basis[row]
                ):
                    row, rx, rw = i, xi, wi
            if row < 0:
                raise RuntimeError("LP unbounded; not expected for bound polytopes")
            degenerate = xt[row] == 0
            self._pivot(row, enter, w)
            if degenerate:
                degenerate_streak += 1
                if degenerate_streak >= _DEGENERATE_LIMIT:
                    bland = True
            else:
                degenerate_streak = 0
                bland = False

    def _run_primal(self, costs: Sequence[int]) -> None:
        self._primal_loop(costs)

    def _run_dual(self, costs: Sequence[int]) -> None:
        # The entering column always comes from the full dual ratio test —
        # anything else loses dual feasibility, after which termination no
        # longer implies optimality.  Bland mode only changes tie-breaking:
        # leaving row by smallest basic variable id, entering column by
        # smallest index among the ratio minimizers (already the default).
        bland = False
        stall = 0
        while True:
            xt = self._xt
            row = -1
            worst = 0
            if bland:
                for i in range(self.m):
                    if xt[i] < 0 and (row < 0 or self._basis[i] < self._basis[row]):
                        row = i
            else:
                for i in range(self.m):
                    if xt[i] < worst:
                        worst = xt[i]
                        row = i
            if row < 0:
                return
            y = self._pricing_vector(costs)
            d = self._d
            Mr = self._M[row]
            enter = -1
            en = ea = 0  # reduced-cost numerator and |alpha| of current best
            for j, col in enumerate(self.columns):
                alpha = column_dot(col, Mr)
                if alpha >= 0:
                    continue
                num = d * costs[j] - column_dot(col, y)
                if enter < 0 or num * ea < en * (-alpha) or (
                    num * ea == en * (-alpha) and j < enter
                ):
                    enter, en, ea = j, num, -alpha
            if enter < 0:
                pi = tuple(Fraction(-Mr[k], self._d) for k in range(self.m))
                raise Infeasible(pi, Fraction(-xt[row], self._d * self._N))
            degenerate = en == 0
            self._pivot(row, enter, self._col_times_M(self.columns[enter]))
            if degenerate:
                stall += 1
                if stall >= _DEGENERATE_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False

    def _check_inert_rows(self) -> None:
        # Dual simplex only repairs negative levels; a positive level on an
        # inert artificial row means b is inconsistent with a redundant row.
        for i, var in enumerate(self._basis):
            if var >= self.n and self._xt[i] > 0:
                Mr = self._M[i]
                pi = tuple(Fraction(Mr[k], self._d) for k in range(self.m))
                raise Infeasible(pi, Fraction(self._xt[i], self._d * self._N))

    def _outcome(self) -> LpOutcome:
        d, N = self._d, self._N
        denom = d * N
        solution: dict[int, Fraction] = {}
        value = Fraction(0)
        for i, var in enumerate(self._basis):
            if var < self.n:
                xv = Fraction(self._xt[i], denom)
                solution[var] = xv
                if self.costs[var]:
                    value += self.costs[var] * xv
        y = self._pricing_vector(self.costs)
        dual = tuple(Fraction(y[k], d) for k in range(self.m))
        return LpOutcome(
            value=value,
            solution=solution,
            dual=dual,
            basis=tuple(self._basis),
            pivots=self._pivots,
        )
