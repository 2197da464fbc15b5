"""Small dense linear algebra over exact rationals (and floats).

Matrices are plain lists of row lists.  Everything here is sized for
frames of dimension <= 12, so simplicity beats asymptotics: Gauss-Jordan
for inversion, fraction-free-ish RREF for nullspaces, and symmetric
congruence elimination for the inertia of a quadratic form.
"""

from __future__ import annotations

from fractions import Fraction

from .tensor import FLOAT, FLOAT_RTOL, RATIONAL, Scalar

Matrix = list[list[Scalar]]


def _pivot_row(rows: Matrix, col: int, start: int, mode: str) -> int | None:
    """Best pivot row at/below ``start``: first nonzero (rational) or
    largest magnitude (float)."""
    if mode == FLOAT:
        best, best_abs = None, 0.0
        for r in range(start, len(rows)):
            a = abs(rows[r][col])
            if a > best_abs:
                best, best_abs = r, a
        return best if best_abs > 0.0 else None
    for r in range(start, len(rows)):
        if rows[r][col] != 0:
            return r
    return None


def invert(matrix: Matrix, mode: str = RATIONAL) -> Matrix:
    """Inverse by Gauss-Jordan with pivoting.  Raises ValueError if singular."""
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(matrix)]
    if mode == FLOAT:
        aug = [[float(a) for a in row] for row in aug]
    for col in range(n):
        piv = _pivot_row(aug, col, col, mode)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col] if mode == FLOAT else Fraction(aug[col][col])
        aug[col] = [a / p for a in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if f == 0:
                continue
            aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Exact reduced row-echelon form.  Returns (rref_rows, pivot_columns)."""
    rows = [[Fraction(a) for a in row] for row in rows]
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [a / p for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Matrix, n_cols: int | None = None) -> list[list[Fraction]]:
    """Exact basis of the right nullspace of ``rows``.

    Free variables are set to 1 one at a time, so the basis is in
    column-echelon-complement form and is deterministic.
    """
    if not rows:
        if not n_cols:
            return []
        basis = []
        for j in range(n_cols):
            v = [Fraction(0)] * n_cols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    n_cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(v)
    return basis


def inertia(sym: Matrix, mode: str = RATIONAL) -> tuple[int, int, int]:
    """Sylvester inertia (n_pos, n_neg, n_zero) of a symmetric matrix.

    Symmetric congruence elimination: diagonal pivots are consumed
    directly; when the remaining diagonal vanishes but an off-diagonal
    entry a_ij survives, the basis change e_i -> e_i + e_j produces a
    nonzero diagonal entry without leaving the rationals.
    """
    n = len(sym)
    m = [list(row) for row in sym]
    if mode == FLOAT:
        m = [[float(a) for a in row] for row in m]
        scale = max((abs(a) for row in m for a in row), default=0.0)
        tol = FLOAT_RTOL * (1.0 + scale)
        near_zero = lambda a: abs(a) <= tol
    else:
        near_zero = lambda a: a == 0

    pos = neg = zero = 0
    active = list(range(n))
    while active:
        piv = None
        for i in active:
            if not near_zero(m[i][i]):
                piv = i
                break
        if piv is None:
            off = None
            for ii, i in enumerate(active):
                for j in active[ii + 1:]:
                    if not near_zero(m[i][j]):
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                zero += len(active)
                break
            i, j = off
            # e_i -> e_i + e_j: row and column update of the Gram matrix.
            for k in active:
                m[i][k] = m[i][k] + m[j][k]
            for k in active:
                m[k][i] = m[k][i] + m[k][j]
            continue
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != piv]
        pq = p if mode == FLOAT else Fraction(p)
        for i in rest:
            f = m[i][piv] / pq
            if f != 0:
                for j in rest:
                    m[i][j] = m[i][j] - f * m[piv][j]
            m[i][piv] = 0
        for i in rest:
            m[piv][i] = 0
        active = rest
    return pos, neg, zero
