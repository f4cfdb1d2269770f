"""Dense exact linear algebra over the rationals.

Everything here works on plain lists of lists of ``fractions.Fraction``
(or ints).  Sizes are small (a few hundred at most), so the emphasis is
on determinism and exactness rather than speed: pivoting always picks
the largest entry by absolute value, breaking ties by the smallest row
index, which makes every nullspace basis reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def _copy(rows: Matrix) -> Matrix:
    return [list(r) for r in rows]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column list."""
    a = _copy(rows)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        best = None
        best_abs = None
        for i in range(r, nrows):
            v = a[i][c]
            if v != 0:
                av = abs(v)
                if best is None or av > best_abs:
                    best, best_abs = i, av
        if best is None:
            continue
        a[r], a[best] = a[best], a[r]
        piv = a[r][c]
        a[r] = [v / piv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of the right nullspace, one vector per free column.

    Free variables are set to 1 one at a time in increasing column
    order, so the output basis is canonical.
    """
    if not rows:
        n = ncols if ncols is not None else 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(rows: Matrix, rhs: Vector) -> Vector | None:
    """One solution of ``rows @ x = rhs`` or None if inconsistent.

    Free variables are set to zero.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    n = len(rows[0]) if rows else 0
    for r, pc in enumerate(pivots):
        if pc == n:
            return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    return x


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_mul(s: Fraction, a: Matrix) -> Matrix:
    return [[s * x for x in row] for row in a]


def is_positive_semidefinite(a: Matrix) -> bool:
    """Exact PSD test for a symmetric rational matrix.

    Symmetric Gaussian elimination: a negative pivot or a zero pivot
    with a nonzero row rules PSD out.
    """
    m = _copy(a)
    n = len(m)
    for k in range(n):
        d = m[k][k]
        if d < 0:
            return False
        if d == 0:
            if any(m[k][j] != 0 for j in range(k, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = m[i][k] / d
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True


def nullity(rows: Matrix, ncols: int) -> int:
    return ncols - rank(rows)
