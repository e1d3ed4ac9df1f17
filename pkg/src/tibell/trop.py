"""Exact min-plus (tropical) algebra over the rationals extended by +infinity.

Scalars are :class:`fractions.Fraction` or the singleton :data:`INF`.  Matrices
are immutable :class:`TropMatrix` objects; every operation returns a new one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .digraph import DiGraph, period, scc
from .errors import BudgetExceeded, DimensionMismatch, InputError, NegativeCycle, NotIrreducible


class _PlusInfinity:
    """The tropical zero: absorbing for ``+``, neutral for ``min``."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = lambda self: "inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise InputError("inf - inf is undefined")
        return self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("tropical-inf")

    def __reduce__(self):
        return (_PlusInfinity, ())


INF = _PlusInfinity()
ExtendedRational = Union[Fraction, _PlusInfinity]


def to_extended(x) -> ExtendedRational:
    """Coerce ints, Fractions, ``"p/q"`` strings, ``"inf"`` and ``math.inf``."""
    if x is INF or x is None:
        return INF
    if isinstance(x, bool):
        raise InputError("booleans are not tropical scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if x == math.inf:
            return INF
        if x == -math.inf:
            raise InputError("-inf is not an element of the min-plus semiring")
        raise InputError("floating-point entries are not accepted; pass exact rationals")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "∞"):
            return INF
        if s in ("-inf", "-infinity", "-∞"):
            raise InputError("-inf is not an element of the min-plus semiring")
        try:
            return Fraction(s)
        except ValueError as exc:
            raise InputError(f"cannot parse {x!r} as a rational") from exc
    raise InputError(f"unsupported scalar type {type(x).__name__}")


class TropMatrix:
    """Square min-plus matrix with exact entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_extended(x) for x in r) for r in rows)
        n = len(rows)
        if n < 1:
            raise InputError("matrix must have at least one row")
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("tropical matrix must be square")
        self.n = n
        self.rows: Tuple[Tuple[ExtendedRational, ...], ...] = rows

    @classmethod
    def _raw(cls, rows) -> "TropMatrix":
        m = object.__new__(cls)
        m.n = len(rows)
        m.rows = tuple(tuple(r) for r in rows)
        return m

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, TropMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"TropMatrix([{body}])"

    def __matmul__(self, other):
        if isinstance(other, TropMatrix):
            return trop_mul(self, other)
        return trop_apply(self, other)

    def shift(self, c) -> "TropMatrix":
        """Tropical scalar product ``c ⊙ A``: adds ``c`` to every finite entry."""
        c = Fraction(c)
        return TropMatrix._raw([[x if x is INF else x + c for x in r] for r in self.rows])

    def graph(self) -> DiGraph:
        return DiGraph(self.n, [(i, j) for i in range(self.n) for j in range(self.n)
                                if self.rows[i][j] is not INF])

    def is_finite(self) -> bool:
        return all(x is not INF for r in self.rows for x in r)


TropVector = Tuple[ExtendedRational, ...]


@dataclass(frozen=True)
class StabilizationReport:
    lam: Fraction
    sigma: int
    n0: int
    kleene_steps: int

    def verify(self, a: TropMatrix, upto: int) -> bool:
        """Recheck ``A^(N+σ) = σλ ⊙ A^N`` directly for ``n0 <= N <= upto``."""
        p = trop_power(a, self.n0)
        q = trop_power(a, self.n0 + self.sigma)
        shift = self.sigma * self.lam
        for _ in range(self.n0, upto + 1):
            if q != p.shift(shift):
                return False
            p, q = trop_mul(p, a), trop_mul(q, a)
        return True


def trop_identity(n: int) -> TropMatrix:
    z = Fraction(0)
    return TropMatrix._raw([[z if i == j else INF for j in range(n)] for i in range(n)])


def trop_mul(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    n = a.n
    cols = [[(k, b.rows[k][j]) for k in range(n) if b.rows[k][j] is not INF] for j in range(n)]
    out = []
    for i in range(n):
        ai = a.rows[i]
        row = []
        for j in range(n):
            best = INF
            for k, bkj in cols[j]:
                aik = ai[k]
                if aik is not INF:
                    s = aik + bkj
                    if best is INF or s < best:
                        best = s
            row.append(best)
        out.append(row)
    return TropMatrix._raw(out)


def trop_add(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    """Entrywise minimum (tropical sum)."""
    if a.n != b.n:
        raise DimensionMismatch("size mismatch")
    return TropMatrix._raw([[y if (x is INF or (y is not INF and y < x)) else x
                             for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)])


def trop_power(a: TropMatrix, k: int) -> TropMatrix:
    if k < 1:
        raise InputError("tropical power needs k >= 1")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else trop_mul(result, base)
        k >>= 1
        if k:
            base = trop_mul(base, base)
    return result


def trop_trace(a: TropMatrix) -> ExtendedRational:
    return min((a.rows[i][i] for i in range(a.n)), default=INF)


def trop_apply(a: TropMatrix, v: Sequence) -> TropVector:
    """Matrix-vector product ``A ⊙ v``."""
    v = tuple(to_extended(x) for x in v)
    if len(v) != a.n:
        raise DimensionMismatch("vector length does not match matrix")
    out = []
    for r in a.rows:
        best = INF
        for x, y in zip(r, v):
            if x is not INF and y is not INF:
                s = x + y
                if best is INF or s < best:
                    best = s
        out.append(best)
    return tuple(out)


def is_irreducible(a: TropMatrix) -> bool:
    return len(scc(a.graph())) == 1


def _require_irreducible(a: TropMatrix) -> None:
    if not is_irreducible(a):
        raise NotIrreducible("the matrix graph is not strongly connected")


def karp_eigenvalue(a: TropMatrix) -> Fraction:
    """Minimum cycle mean (Karp).  Equal to the unique tropical eigenvalue."""
    _require_irreducible(a)
    n = a.n
    pred = [[(i, a.rows[i][j]) for i in range(n) if a.rows[i][j] is not INF] for j in range(n)]
    d: List[List[ExtendedRational]] = [[INF] * n for _ in range(n + 1)]
    d[0][0] = Fraction(0)
    for k in range(1, n + 1):
        prev, cur = d[k - 1], d[k]
        for j in range(n):
            best = INF
            for i, w in pred[j]:
                if prev[i] is not INF:
                    s = prev[i] + w
                    if best is INF or s < best:
                        best = s
            cur[j] = best
    lam = None
    for v in range(n):
        if d[n][v] is INF:
            continue
        worst = None
        for k in range(n):
            if d[k][v] is not INF:
                q = (d[n][v] - d[k][v]) / (n - k)
                if worst is None or q > worst:
                    worst = q
        if lam is None or worst < lam:
            lam = worst
    return lam


def _kleene_sequence(a: TropMatrix):
    """Yield the partial sums A, A⊕A², ... (each as a matrix)."""
    p = a
    while True:
        yield p
        p = trop_add(a, trop_mul(p, a))


def kleene_plus(a: TropMatrix) -> TropMatrix:
    """``A⁺ = A ⊕ A² ⊕ … ⊕ Aⁿ``: least weight of a path of any length >= 1."""
    seq = _kleene_sequence(a)
    p = None
    for _ in range(a.n):
        p = next(seq)
    if any(p.rows[i][i] is not INF and p.rows[i][i] < 0 for i in range(a.n)):
        raise NegativeCycle("negative cycle: the Kleene series diverges")
    return p


def kleene_steps(a: TropMatrix) -> int:
    """Smallest k with (partial sum)_k = (partial sum)_(k+1)."""
    kleene_plus(a)  # raises on negative cycles
    seq = _kleene_sequence(a)
    prev = next(seq)
    k = 1
    for cur in seq:
        if cur == prev:
            return k
        prev = cur
        k += 1


def normalized(a: TropMatrix) -> Tuple[Fraction, TropMatrix]:
    lam = karp_eigenvalue(a)
    return lam, a.shift(-lam)


def is_eigenvector(a: TropMatrix, v: Sequence, lam) -> bool:
    v = tuple(to_extended(x) for x in v)
    if any(x is INF for x in v):
        return False
    lam = Fraction(lam)
    return trop_apply(a, v) == tuple(x + lam for x in v)


def trop_eigenvector(a: TropMatrix) -> TropVector:
    lam, ap = normalized(a)
    plus = kleene_plus(ap)
    j = next(j for j in range(a.n) if plus.rows[j][j] == 0)
    v = tuple(plus.rows[i][j] for i in range(a.n))
    if not is_eigenvector(a, v, lam):  # pragma: no cover - theory guarantees this
        raise AssertionError("eigenvector verification failed")
    return v


def critical_graph(a: TropMatrix) -> DiGraph:
    lam = karp_eigenvalue(a)
    v = trop_eigenvector(a)
    n = a.n
    gv = DiGraph(n, [(k, l) for k in range(n) for l in range(n)
                     if a.rows[k][l] is not INF and a.rows[k][l] + v[l] - v[k] == lam])
    keep = set()
    for comp in scc(gv):
        if len(comp) > 1 or gv.has_edge(comp[0], comp[0]):
            keep.add(frozenset(comp))
    where = {x: c for c in keep for x in c}
    return DiGraph(n, [(i, j) for i, j in gv.edges if i in where and where[i] is where.get(j)])


def critical_components(g: DiGraph) -> List[List[int]]:
    return [c for c in scc(g) if len(c) > 1 or g.has_edge(c[0], c[0])]


def cyclicity(a: TropMatrix) -> int:
    g = critical_graph(a)
    sigma = 1
    for comp in critical_components(g):
        sigma = math.lcm(sigma, period(g, comp))
    return sigma


def stabilization(a: TropMatrix, max_n: int = 10_000) -> StabilizationReport:
    lam = karp_eigenvalue(a)
    sigma = cyclicity(a)
    shift = sigma * lam
    powers = [a]
    for _ in range(sigma):
        powers.append(trop_mul(powers[-1], a))
    n = 1
    while True:
        # powers[i] holds A^(n+i) for i = 0..sigma
        if powers[sigma] == powers[0].shift(shift):
            break
        if n >= max_n:
            raise BudgetExceeded(f"no stabilization up to N = {max_n}")
        powers.pop(0)
        powers.append(trop_mul(powers[-1], a))
        n += 1
    return StabilizationReport(lam=lam, sigma=sigma, n0=n, kleene_steps=kleene_steps(a.shift(-lam)))
