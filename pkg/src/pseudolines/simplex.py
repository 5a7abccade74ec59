"""Exact rational linear programming over free variables.

Problems are ``maximize c.x subject to A x <= b`` with unrestricted x and
exact rational data.  Two solvers share the result type:

- the general entry point works on the dual (our constraint matrices have
  few variables and many rows, so the dual tableau is small) with a
  textbook two-phase simplex; it detects infeasibility and unboundedness.
- callers that already know a feasible vertex basis can pass it and get
  an active-set walk instead, skipping phase one; this is what the
  certification recursion does tens of thousands of times.

Both use Bland's smallest-index anti-cycling rule throughout and are
fully deterministic.  Every "optimal" answer is re-verified from scratch
before being returned: the point satisfies all constraints, the dual
multipliers are nonnegative and reproduce the objective row, and the two
objective values coincide.  With exact arithmetic this turns each solve
into a self-contained optimality certificate.

Internally coefficients are gmpy2 rationals when available (pure-Python
fractions otherwise); the public surface speaks fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

__all__ = ["LinearProgram", "LpSolution", "solve_lp"]

_MAX_PIVOTS = 200_000


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective.x subject to rows[i].x <= rhs[i], x free."""

    var_names: tuple[str, ...]
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.var_names)
        if len(self.objective) != n:
            raise ValueError("objective length does not match variable count")
        if len(self.rows) != len(self.rhs):
            raise ValueError("row and rhs counts differ")
        for row in self.rows:
            if len(row) != n:
                raise ValueError("row length does not match variable count")

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_rows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class LpSolution:
    """status is "optimal", "infeasible" or "unbounded"; optimum and x are
    set only when optimal.  ``basis`` lists one active row per variable at
    the reported vertex (active-set path only)."""

    status: str
    optimum: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    basis: tuple[int, ...] | None = None


def _sparse(row) -> list[tuple[int, object]]:
    return [(j, _Q(v)) for j, v in enumerate(row) if v != 0]


def _verify_optimal(lp: LinearProgram, x, lam_by_row, optimum) -> None:
    """Exact optimality check: feasibility, dual feasibility, equal values."""
    for i, row in enumerate(lp.rows):
        lhs = sum(c * x[j] for j, c in enumerate(row) if c)
        if lhs > lp.rhs[i]:
            raise RuntimeError(f"solver bug: returned point violates row {i}")
    combo = [Fraction(0)] * lp.n_vars
    dual_value = Fraction(0)
    for r, lam in lam_by_row.items():
        if lam < 0:
            raise RuntimeError(f"solver bug: negative multiplier on row {r}")
        dual_value += lam * lp.rhs[r]
        for j, c in enumerate(lp.rows[r]):
            if c:
                combo[j] += lam * c
    if tuple(combo) != tuple(Fraction(v) for v in lp.objective):
        raise RuntimeError("solver bug: multipliers do not reproduce the objective")
    primal_value = sum(Fraction(c) * x[j] for j, c in enumerate(lp.objective) if c)
    if primal_value != optimum or dual_value != optimum:
        raise RuntimeError("solver bug: primal and dual objective values differ")


def solve_lp(lp: LinearProgram, start_basis: tuple[int, ...] | None = None) -> LpSolution:
    """Solve exactly; deterministic (Bland's rule on both pivot choices).

    ``start_basis``: row indices of n independent constraints whose
    intersection point is feasible; enables the phase-one-free active-set
    path and must be correct (checked, ValueError otherwise).
    """
    if start_basis is not None:
        return _solve_active_set(lp, start_basis)
    return _solve_general(lp)


# ---------------------------------------------------------------------------
# active-set path


def _invert(mat):
    """Exact inverse of a small square matrix; ValueError if singular."""
    n = len(mat)
    a = [list(row) + [_Q(1) if i == j else _Q(0) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


_BLAND_TRIGGER = 24  # consecutive zero-step pivots before smallest-index mode


def _solve_active_set(lp: LinearProgram, start_basis) -> LpSolution:
    n, m = lp.n_vars, lp.n_rows
    if len(start_basis) != n or len(set(start_basis)) != n:
        raise ValueError("start basis must name n distinct rows")
    rows = [_sparse(r) for r in lp.rows]
    rhs = [_Q(v) for v in lp.rhs]
    cnz = [(j, _Q(v)) for j, v in enumerate(lp.objective) if v != 0]
    # column view: var j -> [(row, coeff)], for directional derivatives
    cols: list[list[tuple[int, object]]] = [[] for _ in range(n)]
    for r, row in enumerate(rows):
        for j, q in row:
            cols[j].append((r, q))

    work = list(start_basis)
    minv = _invert([[_Q(lp.rows[r][j]) for j in range(n)] for r in work])
    x = [sum(minv[i][l] * rhs[work[l]] for l in range(n)) for i in range(n)]

    slack = []
    in_work = [False] * m
    for r in work:
        in_work[r] = True
    for r in range(m):
        s = rhs[r] - sum(q * x[j] for j, q in rows[r])
        if s < 0:
            raise ValueError(f"start basis vertex violates row {r}")
        slack.append(_Q(0) if in_work[r] else s)

    zero = _Q(0)
    degenerate_streak = 0
    for _ in range(_MAX_PIVOTS):
        lam = [sum(q * minv[i][l] for i, q in cnz) for l in range(n)]
        jpos = None
        if degenerate_streak < _BLAND_TRIGGER:
            # steepest reduced cost, smallest constraint id on ties
            for l in range(n):
                v = lam[l]
                if v < 0 and (
                    jpos is None
                    or v < lam[jpos]
                    or (v == lam[jpos] and work[l] < work[jpos])
                ):
                    jpos = l
        else:
            for l in range(n):
                if lam[l] < 0 and (jpos is None or work[l] < work[jpos]):
                    jpos = l
        if jpos is None:
            optimum = sum(Fraction(q) * Fraction(x[j]) for j, q in cnz)
            xf = tuple(Fraction(v) for v in x)
            lam_by_row = {work[l]: Fraction(lam[l]) for l in range(n)}
            _verify_optimal(lp, xf, lam_by_row, optimum)
            return LpSolution("optimal", optimum, xf, tuple(work))

        d = [-minv[i][jpos] for i in range(n)]
        ad = [zero] * m
        for j in range(n):
            dj = d[j]
            if dj != 0:
                for r, q in cols[j]:
                    ad[r] += dj * q
        best_t = None
        best_r = None
        for r in range(m):
            if ad[r] > 0 and not in_work[r]:
                t = slack[r] / ad[r]
                if best_t is None or t < best_t or (t == best_t and r < best_r):
                    best_t, best_r = t, r
        if best_t is None:
            return LpSolution("unbounded")
        degenerate_streak = 0 if best_t != 0 else degenerate_streak + 1

        if best_t != 0:
            for i in range(n):
                x[i] += best_t * d[i]
            for r in range(m):
                if ad[r] != 0 and not in_work[r]:
                    slack[r] -= best_t * ad[r]
        slack[best_r] = zero
        leaving = work[jpos]
        in_work[leaving] = False
        in_work[best_r] = True
        work[jpos] = best_r
        slack[leaving] = rhs[leaving] - sum(q * x[j] for j, q in rows[leaving])

        # rank-one update of the basis inverse for the replaced row
        y = [sum(q * minv[j][l] for j, q in rows[best_r]) for l in range(n)]
        piv = y[jpos]
        inv = 1 / piv
        for i in range(n):
            minv[i][jpos] *= inv
        for l in range(n):
            if l != jpos and y[l] != 0:
                f = y[l]
                for i in range(n):
                    minv[i][l] -= f * minv[i][jpos]
    raise RuntimeError("pivot limit exceeded; possible cycling bug")


# ---------------------------------------------------------------------------
# general path: two-phase simplex on the dual


def _solve_general(lp: LinearProgram) -> LpSolution:
    n, m = lp.n_vars, lp.n_rows
    # dual: min rhs.lam  s.t.  A^T lam = objective, lam >= 0
    sign = []
    tab = []
    for i in range(n):
        ci = _Q(lp.objective[i])
        s = -1 if ci < 0 else 1
        sign.append(s)
        row = [s * _Q(lp.rows[r][i]) for r in range(m)]
        row += [_Q(1) if k == i else _Q(0) for k in range(n)]  # artificials
        row.append(s * ci)
        tab.append(row)
    basis = [m + i for i in range(n)]
    rhs_col = m + n

    def pivot(pr: int, pc: int, cost_row):
        inv = 1 / tab[pr][pc]
        tab[pr] = [v * inv for v in tab[pr]]
        prow = tab[pr]
        for r in range(n):
            if r != pr and tab[r][pc] != 0:
                f = tab[r][pc]
                tab[r] = [v - f * w for v, w in zip(tab[r], prow)]
        f = cost_row[pc]
        if f != 0:
            for j in range(len(cost_row)):
                cost_row[j] -= f * prow[j]
        basis[pr] = pc

    def run_phase(costs, allowed_cols) -> bool:
        """Returns False when the phase objective is unbounded below."""
        cost_row = list(costs) + [_Q(0)]
        for r in range(n):
            cb = costs[basis[r]]
            if cb != 0:
                for j in range(len(cost_row)):
                    cost_row[j] -= cb * tab[r][j]
            else:
                cost_row[rhs_col] -= _Q(0)
        # cost_row[j] = reduced cost; cost_row[rhs] = -objective value
        for _ in range(_MAX_PIVOTS):
            pc = next((j for j in allowed_cols if cost_row[j] < 0), None)
            if pc is None:
                return True
            pr = None
            best = None
            for r in range(n):
                if tab[r][pc] > 0:
                    t = tab[r][rhs_col] / tab[r][pc]
                    if best is None or t < best or (t == best and basis[r] < basis[pr]):
                        best, pr = t, r
            if pr is None:
                return False
            pivot(pr, pc, cost_row)
        raise RuntimeError("pivot limit exceeded; possible cycling bug")

    phase1_costs = [_Q(0)] * m + [_Q(1)] * n
    if not run_phase(phase1_costs, range(m + n)):
        raise RuntimeError("phase one cannot be unbounded")
    if any(tab[r][rhs_col] != 0 and basis[r] >= m for r in range(n)):
        # dual infeasible: primal is unbounded or empty; decide which
        return _resolve_no_dual(lp)

    # pivot leftover zero-level artificials out where possible
    for r in range(n):
        if basis[r] >= m:
            pc = next((j for j in range(m) if tab[r][j] != 0), None)
            if pc is not None:
                dummy = [_Q(0)] * (m + n + 1)
                pivot(r, pc, dummy)

    phase2_costs = [_Q(v) for v in lp.rhs] + [_Q(0)] * n
    if not run_phase(phase2_costs, range(m)):
        return LpSolution("infeasible")  # dual unbounded below

    lam_by_row = {}
    for r in range(n):
        if basis[r] < m and tab[r][rhs_col] != 0:
            lam_by_row[basis[r]] = Fraction(tab[r][rhs_col])
    optimum = sum(Fraction(lp.rhs[r]) * v for r, v in lam_by_row.items())
    # primal point = equation multipliers, read off the artificial columns
    x = []
    for i in range(n):
        xi = sum(phase2_costs[basis[r]] * tab[r][m + i] for r in range(n))
        x.append(Fraction(sign[i] * xi))
    _verify_optimal(lp, tuple(x), lam_by_row, optimum)
    return LpSolution("optimal", optimum, tuple(x))


def _resolve_no_dual(lp: LinearProgram) -> LpSolution:
    """No dual solution exists: classify the primal as unbounded or empty.

    Feasibility problem: maximize -t subject to A x - t <= b, -t <= 0.
    It is feasible and bounded, so the recursive solve always returns
    optimal; optimum 0 means the original primal is feasible (hence
    unbounded), negative optimum means it is empty.
    """
    names = lp.var_names + ("_t",)
    objective = tuple([Fraction(0)] * lp.n_vars) + (Fraction(-1),)
    rows = tuple(tuple(r) + (Fraction(-1),) for r in lp.rows)
    rows += (tuple([Fraction(0)] * lp.n_vars) + (Fraction(-1),),)
    rhs = tuple(lp.rhs) + (Fraction(0),)
    aux = LinearProgram(names, objective, rows, rhs)
    sol = _solve_general(aux)
    if sol.status != "optimal":
        raise RuntimeError("feasibility problem must have an optimum")
    return LpSolution("unbounded" if sol.optimum == 0 else "infeasible")
