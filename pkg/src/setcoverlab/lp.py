"""Covering LP: from-scratch dense simplex plus exact certification.

The primal is  min w.x  s.t.  each element's sets sum to >= 1,  x >= 0.
We run a tableau simplex on the dual packing program (max 1.y subject to
per-set loads <= w, y >= 0), whose slack basis is immediately feasible, so
no two-phase start is needed.  Dantzig pricing is used until a degeneracy
streak, then Bland's rule until the objective moves again.  The tableau is
refactorized from the original data every so many pivots and again before
optimality is declared, so drift never decides termination; the primal
solution is the simplex multipliers of that final refactorization.

Because the float tableau can drift, the solver then tries to certify the
result exactly: the float primal/dual pair is snapped to small rationals
and checked in exact arithmetic (feasibility of both sides plus equal
objectives proves optimality by weak duality); for small systems a full
exact basis solve is attempted as a fallback.  When certification succeeds
the outcome carries the exact rational objective and solution.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LengthMismatch, NonOptimalLp, NonPositiveWeight, NumericalFailure
from .greedy import GreedyTrace
from .instance import Instance, validate

DEFAULT_TOL = 1e-9
BLAND_STREAK = 40
REFRESH_INTERVAL = 1000  # pivots between refactorizations (drift control)
EXACT_CHECK_LIMIT = 1_000_000  # skip certification when m*n exceeds this
EXACT_SOLVE_MAX_N = 200
RATIONALIZE_DENOM = 10**12

STATUS_OPTIMAL = "optimal"
STATUS_ITERATION_LIMIT = "iteration-limit"


@dataclass(frozen=True)
class FractionalCover:
    """Per-set coefficients satisfying every coverage constraint."""

    x: tuple
    weight: object


@dataclass(frozen=True)
class LpOutcome:
    cover: FractionalCover
    objective: float
    status: str
    iterations: int
    tol: float
    exact_objective: Fraction | None = None
    exact_x: tuple[Fraction, ...] | None = None


def _dual_data(instance: Instance):
    """Constraint matrix [D | I], rhs w and objective c of the dual LP."""
    m, n = instance.m, instance.n
    a = np.zeros((n, m + n))
    w = np.zeros(n)
    for i, entry in enumerate(instance.sets):
        for e in entry.elements:
            a[i, e - 1] = 1.0
        a[i, m + i] = 1.0
        w[i] = float(entry.weight)
    c = np.zeros(m + n)
    c[:m] = 1.0
    return a, w, c


def _refactorize(a, w, c, basis):
    """Rebuild the tableau and multipliers from scratch for the basis.

    Pivoting drifts the dense tableau; recomputing B^-1 [A | w] and the
    reduced-cost row from the original data bounds the error by a single
    solve, exactly like reinversion in a revised simplex.
    """
    b_mat = a[:, basis]
    try:
        body = np.linalg.solve(b_mat, np.column_stack([a, w]))
        pi = np.linalg.solve(b_mat.T, c[basis])
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular basis during refactorization: {exc}")
    obj = np.append(c - pi @ a, -(pi @ w))
    return np.vstack([body, obj]), pi


def solve_lp(instance: Instance, tol: float = DEFAULT_TOL,
             max_iterations: int | None = None) -> LpOutcome:
    """Minimize the covering LP; returns the best vertex found.

    status is "optimal" when the simplex reached reduced-cost optimality
    within tol on a freshly refactorized tableau, "iteration-limit" when
    the pivot budget ran out first.
    """
    validate(instance)
    for i, entry in enumerate(instance.sets):
        if entry.weight <= 0:
            raise NonPositiveWeight(f"set {i} has non-positive weight")
    m, n = instance.m, instance.n
    if max_iterations is None:
        max_iterations = 100 * (m + n) + 1000

    a, w, c = _dual_data(instance)
    basis = list(range(m, m + n))
    t, pi = _refactorize(a, w, c, basis)
    iterations = 0
    since_refresh = 0
    streak = 0
    bland = False
    while True:
        obj_row = t[n, : m + n]
        if bland:
            candidates = np.nonzero(obj_row > tol)[0]
            enter = int(candidates[0]) if candidates.size else -1
        else:
            enter = int(np.argmax(obj_row))
            if obj_row[enter] <= tol:
                enter = -1
        if enter < 0:
            if since_refresh == 0:
                status = STATUS_OPTIMAL
                break
            t, pi = _refactorize(a, w, c, basis)
            since_refresh = 0
            continue
        if iterations >= max_iterations:
            status = STATUS_ITERATION_LIMIT
            break
        col = t[:n, enter]
        rows = np.nonzero(col > tol)[0]
        if rows.size == 0:
            raise NumericalFailure("dual LP appears unbounded; corrupt tableau")
        ratios = t[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        leave = int(min(tied, key=lambda r: basis[r]))
        pivot = t[leave, enter]
        t[leave] /= pivot
        factors = t[:, enter].copy()
        factors[leave] = 0.0
        t -= np.outer(factors, t[leave])
        basis[leave] = enter
        iterations += 1
        since_refresh += 1
        if since_refresh >= REFRESH_INTERVAL:
            t, pi = _refactorize(a, w, c, basis)
            since_refresh = 0
        if best <= tol:
            streak += 1
            if streak >= BLAND_STREAK:
                bland = True
        else:
            streak = 0
            bland = False

    # optimality is only ever declared right after a refactorization, so pi
    # and the tableau are fresh here
    x = np.maximum(pi, 0.0) if status == STATUS_OPTIMAL \
        else np.maximum(-t[n, m : m + n], 0.0)
    objective = float(sum(float(e.weight) * xi for e, xi in zip(instance.sets, x)))
    y = np.zeros(m)
    for r, v in enumerate(basis):
        if v < m:
            y[v] = t[r, -1]

    exact_obj = None
    exact_x = None
    if status == STATUS_OPTIMAL and m * n <= EXACT_CHECK_LIMIT:
        exact = _certify(instance, x, y)
        if exact is None and n <= EXACT_SOLVE_MAX_N:
            exact = _certify_from_basis(instance, basis)
        if exact is not None:
            exact_x, exact_obj = exact
            objective = float(exact_obj)
            x = exact_x

    cover = FractionalCover(x=tuple(x), weight=exact_obj if exact_obj is not None
                            else objective)
    return LpOutcome(cover=cover, objective=objective, status=status,
                     iterations=iterations, tol=tol,
                     exact_objective=exact_obj, exact_x=exact_x)


def _snap(values) -> list[Fraction]:
    return [Fraction(float(v)).limit_denominator(RATIONALIZE_DENOM)
            for v in values]


def _check_pair(instance: Instance, x, y):
    """Exact weak-duality certificate check for a rational primal/dual pair.

    Returns (x, objective) when x is primal-feasible, y is dual-feasible
    and the objectives match exactly; None otherwise.
    """
    if any(xi < 0 for xi in x) or any(yj < 0 for yj in y):
        return None
    loads = [Fraction(0)] * instance.m
    dual_load = []
    for entry, xi in zip(instance.sets, x):
        acc = Fraction(0)
        for e in entry.elements:
            loads[e - 1] += xi
            acc += y[e - 1]
        dual_load.append(acc)
    if any(load < 1 for load in loads):
        return None
    if any(dl > entry.weight for dl, entry in zip(dual_load, instance.sets)):
        return None
    primal = sum((entry.weight * xi for entry, xi in zip(instance.sets, x)),
                 Fraction(0))
    dual = sum(y, Fraction(0))
    if primal != dual:
        return None
    return tuple(x), primal


def _certify(instance: Instance, x_float, y_float):
    """Rationalize the float solution pair and verify it exactly."""
    return _check_pair(instance, _snap(x_float), _snap(y_float))


def _certify_from_basis(instance: Instance, basis):
    """Exact-rational solve of the final basis, then the same certificate.

    Solves B u = w for the dual basic values and pi B = c_B for the primal
    multipliers by Gaussian elimination over Fractions.
    """
    m, n = instance.m, instance.n
    cols = []
    c_b = []
    for v in basis:
        col = [Fraction(0)] * n
        if v < m:
            for i, entry in enumerate(instance.sets):
                if v + 1 in entry.elements:
                    col[i] = Fraction(1)
            c_b.append(Fraction(1))
        else:
            col[v - m] = Fraction(1)
            c_b.append(Fraction(0))
        cols.append(col)
    w = [entry.weight for entry in instance.sets]
    u = _solve_exact(cols, w, by_columns=True)
    pi = _solve_exact(cols, c_b, by_columns=False)
    if u is None or pi is None:
        return None
    y = [Fraction(0)] * m
    for v, uv in zip(basis, u):
        if v < m:
            y[v] = uv
    return _check_pair(instance, pi, y)


def _solve_exact(cols, rhs, by_columns: bool):
    """Solve B z = rhs (by_columns) or z B = rhs (transposed) in rationals."""
    n = len(cols)
    if by_columns:
        a = [[cols[j][i] for j in range(n)] for i in range(n)]
    else:
        a = [list(col) for col in cols]
    b = list(rhs)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        b[c], b[piv] = b[piv], b[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        b[c] *= inv
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[c])]
                b[r] -= f * b[c]
    return b


def check_fractional_cover(instance: Instance, x, tol: float = DEFAULT_TOL) -> bool:
    """True iff x is (within tol) nonnegative and covers every element."""
    if len(x) != instance.n:
        raise LengthMismatch(f"expected {instance.n} coefficients, got {len(x)}")
    if any(xi < -tol for xi in x):
        return False
    loads = [0.0] * instance.m if not isinstance(x[0], Fraction) \
        else [Fraction(0)] * instance.m
    for entry, xi in zip(instance.sets, x):
        for e in entry.elements:
            loads[e - 1] += xi
    return all(load >= 1 - tol for load in loads)


def r_estimate(trace: GreedyTrace, lp: LpOutcome):
    """Instance-wise upper bound w(Gr)/w(Opt_LP) on the greedy ratio."""
    if lp.status != STATUS_OPTIMAL:
        raise NonOptimalLp(f"LP status is {lp.status}")
    if lp.exact_objective is not None:
        return trace.total_weight / lp.exact_objective
    return float(trace.total_weight) / lp.objective


def integrality_gap(opt_weight: Fraction, lp: LpOutcome):
    """w(Opt)/w(Opt_LP): how loose the relaxation is on this instance."""
    if lp.status != STATUS_OPTIMAL:
        raise NonOptimalLp(f"LP status is {lp.status}")
    if lp.exact_objective is not None:
        return Fraction(opt_weight) / lp.exact_objective
    return float(opt_weight) / lp.objective


def solution_to_csv(lp: LpOutcome) -> str:
    out = io.StringIO()
    out.write("set_index,x\n")
    for i, xi in enumerate(lp.cover.x):
        out.write(f"{i},{xi}\n")
    return out.getvalue()


def write_lp_format(instance: Instance) -> str:
    """CPLEX-LP text of the covering program, for external cross-checks."""
    lines = ["Minimize"]
    terms = " + ".join(
        f"{float(entry.weight):.12g} x{i}" for i, entry in enumerate(instance.sets)
    )
    lines.append(f" obj: {terms}")
    lines.append("Subject To")
    for e in range(1, instance.m + 1):
        holders = [i for i, entry in enumerate(instance.sets)
                   if e in entry.elements]
        lhs = " + ".join(f"x{i}" for i in holders)
        lines.append(f" e{e}: {lhs} >= 1")
    lines.append("Bounds")
    for i in range(instance.n):
        lines.append(f" 0 <= x{i}")
    lines.append("End")
    return "\n".join(lines) + "\n"
