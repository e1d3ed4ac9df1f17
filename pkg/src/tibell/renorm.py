"""Bell inequalities that are fixed points of tropical renormalization.

We look for coefficient vectors ``a = (alpha, lam)`` with ``F'(a)^2 = F'(a)`` in
the min-plus sense, where ``F'(a) = F(alpha) - lam`` on the De Bruijn edges.
The relaxation ``F'_ik + F'_kj - F'_ij >= 0`` is a pointed polyhedral cone; the
exact solutions are the union of those faces on which every group ``(i, j)``
has at least one tight triple.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from . import linalg
from .bell import BellInequality, Scenario, edge_vectors
from .errors import BudgetExceeded, DimensionMismatch, InputError
from .polyhedra import HRep, rays_from_hrep
from .trop import INF, TropMatrix, trop_mul

LinearForm = Tuple[Fraction, ...]
Entry = Union[LinearForm, type(INF)]


@dataclass(frozen=True)
class ParametricTropMatrix:
    n: int
    entries: Tuple[Tuple[Entry, ...], ...]
    variables: Tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def entry(self, i: int, j: int) -> Entry:
        return self.entries[i][j]

    def evaluate(self, a: Sequence) -> TropMatrix:
        if len(a) != self.nvars:
            raise DimensionMismatch(f"expected {self.nvars} parameters, got {len(a)}")
        a = [Fraction(x) for x in a]
        return TropMatrix._raw([[x if x is INF else linalg.dot(x, a) for x in row]
                                for row in self.entries])


def _variable_names(sc: Scenario, single: bool) -> List[str]:
    names = [f"A{x}" for x in range(sc.m)] if single else []
    for rho in range(1, sc.R + 1):
        for x in range(sc.m):
            for y in range(sc.m):
                names.append(f"A{x}A{y}" if sc.R == 1 else f"A{x}A{y}@{rho}")
    return names + ["lambda"]


def build_parametric(scenario: Scenario, include_single_body: bool = True) -> ParametricTropMatrix:
    """Entry ``(mu, nu)`` is ``alpha . psi_edge - lam`` on De Bruijn edges, INF elsewhere."""
    n = scenario.nodes
    skip = 0 if include_single_body else scenario.m
    rows: List[List[Entry]] = [[INF] * n for _ in range(n)]
    for (mu, nu), psi in edge_vectors(scenario).items():
        rows[mu][nu] = tuple(psi[skip:]) + (Fraction(-1),)
    return ParametricTropMatrix(n, tuple(tuple(r) for r in rows),
                                tuple(_variable_names(scenario, include_single_body)))


def _triples(p: ParametricTropMatrix) -> List[Tuple[int, int, int]]:
    n = p.n
    return [(i, j, k) for i in range(n) for j in range(n) for k in range(n)
            if p.entries[i][j] is not INF and p.entries[i][k] is not INF
            and p.entries[k][j] is not INF]


def fixed_point_cone(p: ParametricTropMatrix) -> HRep:
    """One inequality ``L_ijk >= 0`` per all-finite triple, ordered by (i, j) then k."""
    ineqs = []
    for i, j, k in _triples(p):
        a, b, c = p.entries[i][k], p.entries[k][j], p.entries[i][j]
        ineqs.append((tuple(x + y - z for x, y, z in zip(a, b, c)), Fraction(0)))
    return HRep(tuple(ineqs))


@dataclass(frozen=True)
class RenormFace:
    rays: Tuple[LinearForm, ...]
    achieved: FrozenSet[int]  # indices into the triple list of the cone


@dataclass(frozen=True)
class RenormSolutionSet:
    variables: Tuple[str, ...]
    faces: Tuple[RenormFace, ...]
    rays: Tuple[LinearForm, ...]
    infeasible_groups: Tuple[Tuple[int, int], ...] = ()
    complete: bool = True
    notes: Dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def solution_rays(self) -> List[LinearForm]:
        return sorted({r for f in self.faces for r in f.rays})


def is_fixed_point(p: ParametricTropMatrix, a: Sequence) -> bool:
    """``F'(a)^2 = F'(a)`` on every entry with a finite target."""
    f = p.evaluate(a)
    sq = trop_mul(f, f)
    return all(f.rows[i][j] is INF or sq.rows[i][j] == f.rows[i][j]
               for i in range(p.n) for j in range(p.n))


def _maximal_faces(good: List[int], achieved: List[FrozenSet[int]],
                   groups: List[FrozenSet[int]]) -> List[Tuple[int, ...]]:
    """Inclusion-maximal sets of rays whose common tight set meets every group."""

    def ok(s: FrozenSet[int]) -> bool:
        return all(s & g for g in groups)

    def closure(common: FrozenSet[int]) -> Tuple[int, ...]:
        return tuple(r for r in good if achieved[r] >= common)

    seen = set()
    frontier = []
    for r in good:
        face = closure(achieved[r])
        if face not in seen:
            seen.add(face)
            frontier.append(face)
    faces = set(frontier)
    while frontier:
        nxt = []
        for face in frontier:
            common = frozenset.intersection(*(achieved[r] for r in face))
            for r in good:
                if r in face:
                    continue
                c2 = common & achieved[r]
                if not ok(c2):
                    continue
                bigger = closure(c2)
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
                    faces.add(bigger)
        frontier = nxt
    return sorted(f for f in faces if not any(set(f) < set(g) for g in faces))


def solve_fixed_points(p: ParametricTropMatrix, max_rays: Optional[int] = None,
                       seed: int = 0) -> RenormSolutionSet:
    """All solutions of ``F'(a)^2 = F'(a)`` as a union of cone faces."""
    triples = _triples(p)
    h = fixed_point_cone(p)
    index: Dict[Tuple[int, int], List[int]] = {}
    for t, (i, j, _) in enumerate(triples):
        index.setdefault((i, j), []).append(t)
    infeasible = tuple(sorted((i, j) for i in range(p.n) for j in range(p.n)
                              if p.entries[i][j] is not INF and (i, j) not in index))
    groups = [frozenset(v) for _, v in sorted(index.items())]

    def tight(r) -> FrozenSet[int]:
        return frozenset(t for t, (a, _) in enumerate(h.inequalities) if linalg.dot(a, r) == 0)

    try:
        cone = rays_from_hrep(h, max_rays=max_rays)
    except BudgetExceeded as exc:
        found = [r for r in exc.partial if h.contains(r) and is_fixed_point(p, r)]
        partial = RenormSolutionSet(p.variables, tuple(RenormFace((r,), tight(r)) for r in found),
                                    tuple(found), infeasible, complete=False,
                                    notes={"reason": str(exc)})
        exc.partial = partial
        raise
    rays = list(cone.rays)
    achieved = [tight(r) for r in rays]
    if infeasible:
        faces: List[Tuple[int, ...]] = []
    else:
        good = [k for k, a in enumerate(achieved) if all(a & g for g in groups)]
        faces = _maximal_faces(good, achieved, groups)
    rng = random.Random(seed)
    out = []
    for face in faces:
        gens = [rays[k] for k in face]
        mix = [Fraction(rng.randint(1, 97), rng.randint(1, 13)) for _ in gens]
        interior = [sum(w * g[c] for w, g in zip(mix, gens)) for c in range(p.nvars)]
        for x in gens + [interior]:
            if not is_fixed_point(p, x):  # pragma: no cover - guaranteed by the face condition
                raise AssertionError(f"face generator {x} is not a fixed point")
        common = frozenset.intersection(*(achieved[k] for k in face))
        out.append(RenormFace(tuple(gens), common))
    return RenormSolutionSet(p.variables, tuple(out), tuple(rays), infeasible)


def c_coordinates(ray: Sequence) -> Tuple[Fraction, ...]:
    """Two-body TINN (m=2) coefficients in the Hadamard combinations ``c0..c3`` plus lambda."""
    if len(ray) != 5:
        raise InputError("expects (a00, a01, a10, a11, lambda)")
    a00, a01, a10, a11, lam = (Fraction(x) for x in ray)
    return (a00 + a01 + a10 + a11, a00 - a01 + a10 - a11,
            a00 + a01 - a10 - a11, a00 - a01 - a10 + a11, lam)


def to_inequality(scenario: Scenario, p: ParametricTropMatrix, a: Sequence) -> BellInequality:
    """Bell inequality ``alpha . q >= lam`` (per party) for a solution ``a``."""
    if len(a) != p.nvars:
        raise DimensionMismatch("parameter vector has the wrong length")
    coeffs = [Fraction(x) for x in a[:-1]]
    alpha = [Fraction(0)] * (scenario.dim - len(coeffs)) + coeffs
    return BellInequality(scenario, tuple(alpha), Fraction(a[-1]),
                          {"renorm_invariant": "true"})
