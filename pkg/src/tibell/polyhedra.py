"""Exact polyhedral computations: hulls, extreme points, cone rays, triangulations.

Vectors are tuples of ``Fraction``.  Inequalities are stored as
``(normal, offset)`` pairs meaning ``normal . x >= offset`` with primitive
integer coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlp, linalg
from .errors import BudgetExceeded, DegenerateInput, InputError, NotPointed

Vec = Tuple[Fraction, ...]
Row = Tuple[Tuple[int, ...], int]


def _vec(x: Iterable) -> Vec:
    return tuple(Fraction(v) for v in x)


@dataclass(frozen=True)
class VRep:
    points: Tuple[Vec, ...]
    rays: Tuple[Vec, ...] = ()

    def __post_init__(self):
        pts = tuple(_vec(p) for p in self.points)
        rays = tuple(_vec(r) for r in self.rays)
        dims = {len(v) for v in pts + rays}
        if len(dims) > 1:
            raise InputError("all vectors must share the ambient dimension")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rays", rays)

    @property
    def dim(self) -> int:
        v = self.points or self.rays
        return len(v[0]) if v else 0


@dataclass(frozen=True)
class HRep:
    """``normal . x >= offset`` for every inequality, ``==`` for every equation."""

    inequalities: Tuple[Row, ...]
    equations: Tuple[Row, ...] = ()

    def contains(self, x: Sequence) -> bool:
        return (all(linalg.dot(a, x) >= b for a, b in self.inequalities)
                and all(linalg.dot(a, x) == b for a, b in self.equations))

    def tight(self, x: Sequence) -> List[int]:
        return [k for k, (a, b) in enumerate(self.inequalities) if linalg.dot(a, x) == b]


@dataclass(frozen=True)
class Cone:
    apex: Vec
    rays: Tuple[Vec, ...]


def canonical_inequality(normal: Sequence, offset) -> Row:
    """Primitive integer scaling (positive factor only; direction is meaningful)."""
    p = linalg.primitive(list(normal) + [offset])
    return tuple(p[:-1]), p[-1]


def canonical_equation(normal: Sequence, offset) -> Row:
    a, b = canonical_inequality(normal, offset)
    lead = next((x for x in a if x), 0)
    if lead < 0:
        a, b = tuple(-x for x in a), -b
    return a, b


# ---------------------------------------------------------------- double description

def _dd(rows: List[Tuple[int, ...]], d: int, max_rays: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : r . y >= 0 for r in rows}``.

    With ``max_rays`` set, an intermediate cone larger than that raises
    :class:`BudgetExceeded` whose ``partial`` attribute holds its rays.
    """
    order = sorted(range(len(rows)), key=lambda i: (sum(1 for x in rows[i] if x), rows[i]))
    tracker = linalg.RankTracker(d)
    init = []
    for i in order:
        if tracker.add(rows[i]):
            init.append(i)
            if len(init) == d:
                break
    if len(init) < d:
        raise NotPointed("the cone contains a line")
    B = [[Fraction(x) for x in rows[i]] for i in init]
    # columns of B^{-1} are the initial rays: row_i . r_j = delta_ij
    inv_rows = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        inv_rows.append(linalg.solve(B, e))
    rays = [linalg.primitive(col) for col in inv_rows]
    processed = list(init)
    # zero set bitmask over positions in `processed`
    zeros = []
    for j, r in enumerate(rays):
        zeros.append(sum(1 << k for k, i in enumerate(processed) if linalg.dot(rows[i], r) == 0))
    initset = set(init)
    rest = [i for i in order if i not in initset]
    for i in rest:
        a = rows[i]
        vals = [linalg.dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << len(processed)
        new_rays, new_zeros = [], []
        for k in pos:
            new_rays.append(rays[k])
            new_zeros.append(zeros[k])
        for k in zer:
            new_rays.append(rays[k])
            new_zeros.append(zeros[k] | bit)
        if neg:
            for p in pos:
                for q in neg:
                    common = zeros[p] & zeros[q]
                    if bin(common).count("1") < d - 2:
                        continue
                    adjacent = True
                    for k in range(len(rays)):
                        if k != p and k != q and (zeros[k] & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vp, vq = vals[p], vals[q]
                    r = tuple(vp * x - vq * y for x, y in zip(rays[q], rays[p]))
                    new_rays.append(linalg.primitive(r))
                    new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
        processed.append(i)
        if max_rays is not None and len(rays) > max_rays:
            exc = BudgetExceeded(f"double description exceeded {max_rays} intermediate rays")
            exc.partial = sorted(set(rays))
            raise exc
    return sorted(set(rays))


def _pivot_coordinates(vectors: Sequence[Sequence]) -> List[int]:
    """Coordinates on which the projection is injective over span(vectors)."""
    if not vectors:
        return []
    _, piv = linalg.rref(vectors, len(vectors[0]))
    return piv


def affine_rank(points: Sequence[Sequence]) -> int:
    pts = [_vec(p) for p in points]
    if not pts:
        raise InputError("need at least one point")
    p0 = pts[0]
    return linalg.rank([tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]) if len(pts) > 1 else 0


def hull(v: VRep) -> HRep:
    """Facets and affine-hull equations of ``conv(points) + cone(rays)``."""
    if not v.points:
        raise InputError("hull needs at least one point")
    d = v.dim
    p0 = v.points[0]
    dirs = [tuple(a - b for a, b in zip(p, p0)) for p in v.points[1:]] + list(v.rays)
    dirs = [x for x in dirs if any(x)]
    if not dirs:
        raise DegenerateInput("all points coincide")
    eqs = []
    for e in linalg.nullspace(dirs, d):
        eqs.append(canonical_equation(e, linalg.dot(e, p0)))
    J = _pivot_coordinates(dirs)
    k = len(J)
    rows = []
    for p in v.points:
        rows.append(linalg.integer_row([p[j] for j in J] + [-1]))
    for r in v.rays:
        rows.append(linalg.integer_row([r[j] for j in J] + [0]))
    rows = [tuple(linalg.primitive(r)) for r in rows if any(r)]
    ineqs = set()
    for y in _dd(sorted(set(rows)), k + 1):
        a, b = y[:k], y[k]
        if not any(a):
            continue
        normal = [0] * d
        for j, x in zip(J, a):
            normal[j] = x
        ineqs.add(canonical_inequality(normal, b))
    return HRep(tuple(sorted(ineqs)), tuple(sorted(set(eqs))))


def rays_from_hrep(h: HRep, max_rays: Optional[int] = None) -> Cone:
    """Extreme rays of the homogeneous cone described by ``h``."""
    if any(b != 0 for _, b in h.inequalities + h.equations):
        raise InputError("rays_from_hrep needs a homogeneous system")
    rows = [a for a, _ in h.inequalities]
    dim = len(rows[0]) if rows else len(h.equations[0][0])
    eqrows = [a for a, _ in h.equations]
    basis = linalg.nullspace(eqrows, dim) if eqrows else [
        tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    if not basis:
        return Cone(tuple(Fraction(0) for _ in range(dim)), ())
    k = len(basis)
    sub = [linalg.primitive([linalg.dot(a, b) for b in basis]) for a in rows]
    sub = sorted({r for r in sub if any(r)})
    if linalg.rank(sub) < k:
        raise NotPointed("the cone contains a line")
    def lift(z):
        y = [sum(zi * b[c] for zi, b in zip(z, basis)) for c in range(dim)]
        return tuple(Fraction(x) for x in linalg.primitive(y))

    try:
        found = _dd(sub, k, max_rays)
    except BudgetExceeded as exc:
        exc.partial = sorted({lift(z) for z in exc.partial})
        raise
    return Cone(tuple(Fraction(0) for _ in range(dim)), tuple(sorted({lift(z) for z in found})))


# ---------------------------------------------------------------- extreme points

def _rationalize(x: np.ndarray):
    for scale in (1, 8, 64, 1024, 1 << 16, 1 << 24):
        yield [int(round(v * scale)) for v in x]


def _certify_vertex(gens: List[Tuple[int, ...]]):
    """Try to decide pointedness of cone(gens) with a float LP plus exact checks.

    Returns an integer functional positive on every generator, ``False`` for an
    exact non-pointedness certificate, or ``None`` when undecided.
    """
    from scipy.optimize import linprog

    G = np.array(gens, dtype=float)
    d = G.shape[1]
    scale = np.abs(G).max(axis=1)
    scale[scale == 0] = 1.0
    Gs = G / scale[:, None]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = linprog(np.zeros(d), A_ub=-Gs, b_ub=-np.ones(len(gens)),
                      bounds=[(None, None)] * d, method="highs")
    if res.status == 0:
        for xi in _rationalize(res.x):
            if all(sum(a * b for a, b in zip(g, xi)) > 0 for g in gens):
                return tuple(xi)
        return None
    if res.status == 2:
        # look for y >= 0, sum y = 1, sum y_g g = 0 supported where the float LP says
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            A_eq = np.vstack([Gs.T, np.ones(len(gens))])
            b_eq = np.zeros(d + 1)
            b_eq[-1] = 1.0
            res2 = linprog(np.zeros(len(gens)), A_eq=A_eq, b_eq=b_eq,
                           bounds=[(0, None)] * len(gens), method="highs")
        if res2.status != 0:
            return None
        support = [k for k, y in enumerate(res2.x) if y > 1e-9]
        M = [[gens[k][c] for k in support] for c in range(d)] + [[1] * len(support)]
        y = exactlp.feasible_point(M, [0] * d + [1])
        if y is not None:
            return False
    return None


def is_vertex(p: Sequence, others: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> bool:
    """Exact test that ``p`` is a vertex of ``conv({p} + others) + cone(rays)``.

    Equivalent to pointedness of the tangent cone generated by ``q - p`` and the rays.
    """
    gens = []
    for q in others:
        g = linalg.integer_row([Fraction(a) - Fraction(b) for a, b in zip(q, p)])
        if any(g):
            gens.append(linalg.primitive(g))
    for r in rays:
        g = linalg.primitive(linalg.integer_row(r))
        if any(g):
            gens.append(g)
    gens = sorted(set(gens))
    if not gens:
        return True
    verdict = _certify_vertex(gens)
    if verdict is not None:
        return verdict is not False
    d = len(gens[0])
    M = [[g[c] for g in gens] for c in range(d)] + [[1] * len(gens)]
    return exactlp.feasible_point(M, [0] * d + [1]) is None


def separating_functional(p: Sequence, others: Sequence[Sequence],
                          rays: Sequence[Sequence] = ()) -> Optional[Tuple[int, ...]]:
    """Integer ``xi`` with ``xi.(q - p) > 0`` for every other point and ``xi.r > 0`` on rays,
    or ``None`` if the float search fails (``p`` may still be a vertex)."""
    gens = [linalg.primitive(linalg.integer_row([Fraction(a) - Fraction(b) for a, b in zip(q, p)]))
            for q in others]
    gens += [linalg.primitive(linalg.integer_row(r)) for r in rays]
    gens = sorted({g for g in gens if any(g)})
    if not gens:
        return tuple([0] * len(p))
    xi = _certify_vertex(gens)
    return xi if isinstance(xi, tuple) else None


def extreme_points(v: VRep) -> List[Vec]:
    """Vertices of ``conv(points) + cone(rays)`` in input order, duplicates removed."""
    seen, pts = set(), []
    for p in v.points:
        if p not in seen:
            seen.add(p)
            pts.append(p)
    out = []
    for k, p in enumerate(pts):
        if is_vertex(p, pts[:k] + pts[k + 1:], v.rays):
            out.append(p)
    return out


# ---------------------------------------------------------------- triangulation

def triangulate_cone(c: Cone, order: Optional[Sequence[int]] = None) -> List[Tuple[int, ...]]:
    """Placing triangulation of ``cone(rays)``; returns maximal simplices as index tuples.

    Rays are placed in ``order`` (default: input order).  A ray that falls inside
    the cone spanned so far is skipped, as usual for placing triangulations.
    """
    rays = [tuple(linalg.integer_row(r)) for r in c.rays]
    if order is None:
        order = list(range(len(rays)))
    simplices: List[Tuple[int, ...]] = []
    span: List[int] = []
    J: List[int] = []
    tracker = None
    for idx in order:
        v = rays[idx]
        if not any(v):
            continue
        if not simplices:
            simplices = [(idx,)]
            span = [idx]
            tracker = linalg.RankTracker(len(v))
            tracker.add(v)
            J = _pivot_coordinates([rays[i] for i in span])
            continue
        if tracker.add(v):
            span.append(idx)
            J = _pivot_coordinates([rays[i] for i in span])
            simplices = [s + (idx,) for s in simplices]
            continue

        def det_with(face, x):
            return linalg.det([[rays[i][j] for j in J] for i in face] + [[x[j] for j in J]])

        count: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
        for s in simplices:
            for k in range(len(s)):
                ridge = s[:k] + s[k + 1:]
                count.setdefault(ridge, []).append(s)
        added = []
        for ridge, owners in count.items():
            if len(owners) != 1:
                continue
            s = owners[0]
            u = next(i for i in s if i not in ridge)
            dv = det_with(ridge, v)
            if dv == 0:
                continue
            du = det_with(ridge, rays[u])
            if (dv > 0) != (du > 0):
                added.append(ridge + (idx,))
        simplices.extend(added)
    return sorted(tuple(sorted(s)) for s in simplices)


def simplex_faces(simplices: Sequence[Tuple[int, ...]], max_size: Optional[int] = None):
    """All nonempty faces (subsets) of the maximal simplices, deduplicated and sorted."""
    from itertools import combinations

    faces = set()
    for s in simplices:
        top = len(s) if max_size is None else min(max_size, len(s))
        for k in range(1, top + 1):
            faces.update(combinations(s, k))
    return sorted(faces, key=lambda f: (len(f), f))
