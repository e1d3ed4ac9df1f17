"""Small exact linear-algebra kernel over the rationals.

Everything here works on plain Python sequences of ``int``/``Fraction`` so the
results are exact.  Sizes in this package stay small (tens of columns), which
keeps naive Gaussian elimination perfectly adequate.
"""

from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_row(row: Sequence) -> List[int]:
    """Scale a rational row to integers (same direction, not normalized)."""
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = _lcm(den, x.denominator)
    return [int(Fraction(x) * den) for x in row]


def primitive(row: Sequence) -> Tuple[int, ...]:
    """Primitive integer vector on the same ray (positive multiple of ``row``)."""
    ints = integer_row(row)
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rref(rows: Iterable[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(mat):
            break
        p = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        pv = mat[r][c]
        if pv != 1:
            mat[r] = [x / pv for x in mat[r]]
        prow = mat[r]
        for i in range(len(mat)):
            if i != r:
                f = mat[i][c]
                if f:
                    row = mat[i]
                    mat[i] = [a - f * b for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


class RankTracker:
    """Incremental rank of a growing set of rows using integer elimination."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._basis: List[Tuple[int, List[int]]] = []  # (pivot column, row)

    @property
    def rank(self) -> int:
        return len(self._basis)

    def reduce(self, row: Sequence) -> List[int]:
        v = integer_row(row)
        for c, b in self._basis:
            if v[c]:
                f, g = b[c], v[c]
                d = gcd(f, g)
                fa, ga = f // d, g // d
                v = [fa * x - ga * y for x, y in zip(v, b)]
        return v

    def add(self, row: Sequence) -> bool:
        """Insert ``row``; return True if it increased the rank."""
        v = self.reduce(row)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        g = 0
        for x in v:
            g = gcd(g, x)
        v = [x // g for x in v]
        self._basis.append((piv, v))
        return True

    def contains(self, row: Sequence) -> bool:
        return not any(self.reduce(row))


def rank(rows: Iterable[Sequence]) -> int:
    rows = list(rows)
    if not rows:
        return 0
    t = RankTracker(len(rows[0]))
    for r in rows:
        t.add(r)
        if t.rank == t.ncols:
            break
    return t.rank


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Vector]:
    """Basis of ``{x : A x = 0}``; one vector per free column, in column order."""
    mat, piv = rref(rows, ncols) if rows else ([], [])
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for r, pc in enumerate(piv):
            x[pc] = -mat[r][free]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """One solution of ``A x = b`` (free variables set to zero) or None."""
    if not a:
        return None
    n = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    mat, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(piv):
        x[pc] = mat[r][n]
    return tuple(x)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix (Bareiss, fraction free)."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))
