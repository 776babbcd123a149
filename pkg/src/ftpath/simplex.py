"""Dense two-phase simplex over exact rationals.

Small and deliberately boring: Fraction arithmetic end to end (so
optimal values are exact), Bland's rule (so cycling is impossible and
results are deterministic), and a plain tableau.  Problem sizes in this
package are a few hundred rows and columns at most.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["LPInfeasible", "LPUnbounded", "solve_lp",
           "LESS_EQUAL", "GREATER_EQUAL", "EQUAL"]

ZERO = Fraction(0)
ONE = Fraction(1)

LESS_EQUAL = "<="
GREATER_EQUAL = ">="
EQUAL = "=="


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


def solve_lp(objective, rows, num_vars: int) -> tuple[list[Fraction], Fraction]:
    """Minimize ``objective . x`` subject to ``rows``, with all ``x >= 0``.

    ``objective`` maps variable index to cost (sparse dict or dense
    list); each row is ``(coeffs, sense, rhs)`` with sparse ``coeffs``
    and sense one of ``<=``, ``>=``, ``==``.

    Returns ``(x, value)`` with exact rationals.

    Raises:
        LPInfeasible: the constraints admit no non-negative solution.
        LPUnbounded: the objective is unbounded below.
    """
    if isinstance(objective, dict):
        cost = [Fraction(objective.get(j, 0)) for j in range(num_vars)]
    else:
        cost = [Fraction(c) for c in objective] + [ZERO] * (num_vars - len(objective))

    # Canonical equalities with rhs >= 0; slack signs flip with the row.
    slack_total = sum(1 for _, sense, _ in rows if sense != EQUAL)
    ncols = num_vars + slack_total
    matrix: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_col = num_vars
    slack_of_row: list[int | None] = []
    for coeffs, sense, b in rows:
        row = [ZERO] * ncols
        for j, a in coeffs.items():
            row[j] = Fraction(a)
        b = Fraction(b)
        if sense == LESS_EQUAL:
            row[slack_col] = ONE
            slack_of_row.append(slack_col)
            slack_col += 1
        elif sense == GREATER_EQUAL:
            row[slack_col] = -ONE
            slack_of_row.append(slack_col)
            slack_col += 1
        elif sense == EQUAL:
            slack_of_row.append(None)
        else:
            raise ValueError(f"unknown sense {sense!r}")
        if b < 0:
            row = [-a for a in row]
            b = -b
        matrix.append(row)
        rhs.append(b)

    nrows = len(matrix)
    if nrows == 0:
        return [ZERO] * num_vars, ZERO

    # A slack column whose coefficient survived as +1 can start basic
    # (each slack sits in exactly one row); other rows get an artificial
    # variable appended past every real column.
    basis: list[int] = [-1] * nrows
    for i in range(nrows):
        sc = slack_of_row[i]
        if sc is not None and matrix[i][sc] == ONE:
            basis[i] = sc
    total_cols = ncols
    for i in range(nrows):
        if basis[i] == -1:
            for row in matrix:
                row.append(ZERO)
            matrix[i][total_cols] = ONE
            basis[i] = total_cols
            total_cols += 1

    def pivot(red: list[Fraction], val: list[Fraction], row_i: int, col_j: int) -> None:
        prow = matrix[row_i]
        p = prow[col_j]
        if p != ONE:
            inv = ONE / p
            matrix[row_i] = prow = [a * inv for a in prow]
            rhs[row_i] *= inv
        nz = [j for j, a in enumerate(prow) if a != ZERO]
        for r in range(nrows):
            if r == row_i:
                continue
            f = matrix[r][col_j]
            if f == ZERO:
                continue
            row = matrix[r]
            for j in nz:
                row[j] -= f * prow[j]
            rhs[r] -= f * rhs[row_i]
        f = red[col_j]
        if f != ZERO:
            for j in nz:
                red[j] -= f * prow[j]
            val[0] += f * rhs[row_i]
        basis[row_i] = col_j

    def optimize(red: list[Fraction], val: list[Fraction], allowed: int) -> None:
        # Bland's rule: smallest improving column, smallest basic leaver.
        while True:
            enter = -1
            for j in range(allowed):
                if red[j] < ZERO:
                    enter = j
                    break
            if enter < 0:
                return
            leave, best = -1, None
            for i in range(nrows):
                a = matrix[i][enter]
                if a > ZERO:
                    ratio = rhs[i] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave < 0:
                raise LPUnbounded("objective decreases without bound")
            pivot(red, val, leave, enter)

    def reduced(costs: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        red = list(costs) + [ZERO] * (total_cols - len(costs))
        val = [ZERO]
        for i in range(nrows):
            f = red[basis[i]]
            if f != ZERO:
                prow = matrix[i]
                for j in range(total_cols):
                    if prow[j] != ZERO:
                        red[j] -= f * prow[j]
                val[0] += f * rhs[i]
        return red, val

    # Phase 1: drive artificial variables to zero.
    if total_cols > ncols:
        phase1 = [ZERO] * ncols + [ONE] * (total_cols - ncols)
        red, val = reduced(phase1)
        optimize(red, val, total_cols)
        if val[0] != ZERO:
            raise LPInfeasible("no feasible point")
        for i in range(nrows - 1, -1, -1):
            if basis[i] < ncols:
                continue
            swap = next((j for j in range(ncols) if matrix[i][j] != ZERO), None)
            if swap is not None:
                pivot(red, val, i, swap)
            else:
                # Redundant row: drop it (and let pivot see the new size).
                del matrix[i], rhs[i], basis[i]
                nrows = len(matrix)

    # Phase 2: the real objective, artificial columns off limits.
    red, val = reduced(cost)
    optimize(red, val, ncols)

    x = [ZERO] * num_vars
    for i in range(nrows):
        if basis[i] < num_vars:
            x[basis[i]] = rhs[i]
    return x, val[0]
