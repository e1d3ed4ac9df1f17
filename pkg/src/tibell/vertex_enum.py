"""Vertices of the closed-path polytopes p_N(Γ) via error sets.

For a simple cycle ``c`` of length ``l`` and a residue ``r``, the error set
collects the vertices of the convex hull of all c-irreducible lattice points in
the cone with apex ``r w(c)`` spanned by ``w(c') - w(c)``.  For large ``N`` the
vertices of ``p_N`` are exactly ``w(c) + e/N`` with ``e`` from the error set of
``(c, N mod l)``.

Internally matrices are integer vectors indexed by the sorted edge list of the
graph.  The lattice points ``eps`` stored in an :class:`ErrorSet` live in
``W(r)`` (total weight ``r``) and may be negative on the edges of ``c``; the
published error terms are ``eps - r w(c)``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bell import Scenario, edge_vectors
from .digraph import DiGraph, SimpleCycle, simple_cycles
from .errors import BudgetExceeded, CapExceeded, InputError
from .polyhedra import (Cone, VRep, extreme_points, is_vertex, separating_functional,
                        simplex_faces, triangulate_cone)
from .trop import INF, TropMatrix, trop_power, trop_trace

IntVec = Tuple[int, ...]
CACHE_ENV = "TIBELL_CACHE_DIR"
CACHE_FORMAT = "tibell-error-sets/1"


# ---------------------------------------------------------------- graph context

class _Ctx:
    """Edge indexing and cycle data shared by all computations on one graph."""

    def __init__(self, g: DiGraph, max_cycles: Optional[int] = None):
        self.g = g
        self.n = g.n
        self.edges = g.sorted_edges()
        self.eidx = {e: k for k, e in enumerate(self.edges)}
        try:
            self.cycles = simple_cycles(g, cap=max_cycles)
        except CapExceeded as exc:
            raise BudgetExceeded(str(exc)) from exc
        self.W: Dict[SimpleCycle, IntVec] = {c: self.vec(c.edges()) for c in self.cycles}

    def vec(self, edges: Iterable[Tuple[int, int]]) -> IntVec:
        v = [0] * len(self.edges)
        for e in edges:
            v[self.eidx[e]] += 1
        return tuple(v)

    def matrix(self, v: Sequence) -> Tuple[Tuple, ...]:
        rows = [[0] * self.n for _ in range(self.n)]
        for (i, j), x in zip(self.edges, v):
            rows[i][j] = x
        return tuple(tuple(r) for r in rows)

    def from_matrix(self, rows) -> IntVec:
        return tuple(rows[i][j] for i, j in self.edges)

    def connected(self, v: Sequence[int], c: SimpleCycle) -> bool:
        """c-irreducibility: support of v plus the edges of c is connected."""
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent.setdefault(a, a)
            parent.setdefault(b, b)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for (i, j), x in zip(self.edges, v):
            if x:
                union(i, j)
        for i, j in c.edges():
            union(i, j)
        return len({find(x) for x in parent}) == 1

    def c_support(self, v: Sequence[int], c: SimpleCycle) -> frozenset:
        nodes = set(c.nodes)
        for (i, j), x in zip(self.edges, v):
            if x:
                nodes.update((i, j))
        return frozenset(nodes)

    def key(self) -> str:
        blob = json.dumps({"n": self.n, "edges": self.edges}, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _combo(ctx: _Ctx, terms: Iterable[Tuple[int, IntVec]]) -> IntVec:
    out = [0] * len(ctx.edges)
    for k, v in terms:
        if k:
            for i, x in enumerate(v):
                if x:
                    out[i] += k * x
    return tuple(out)


def _off_cycle_nonneg(v: Sequence[int], on_c: Sequence[bool]) -> bool:
    return all(x >= 0 or oc for x, oc in zip(v, on_c))


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class ErrorSet:
    cycle: SimpleCycle
    residue: int
    n: int
    edges: Tuple[Tuple[int, int], ...]
    points: Tuple[IntVec, ...]  # lattice points eps in W(r), over `edges`

    def matrices(self) -> List[Tuple[Tuple[int, ...], ...]]:
        """The lattice points ``eps`` as integer n x n matrices."""
        out = []
        for v in self.points:
            rows = [[0] * self.n for _ in range(self.n)]
            for (i, j), x in zip(self.edges, v):
                rows[i][j] = x
            out.append(tuple(tuple(r) for r in rows))
        return out

    @property
    def members(self) -> List[Tuple[Tuple[Fraction, ...], ...]]:
        """Error terms ``e = eps - r w(c)`` (rational matrices in W(0))."""
        l = self.cycle.length
        cedges = set(self.cycle.edges())
        out = []
        for m in self.matrices():
            out.append(tuple(tuple(Fraction(x) - (Fraction(self.residue, l) if (i, j) in cedges else 0)
                                   for j, x in enumerate(row)) for i, row in enumerate(m)))
        return out

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class VertexReport:
    N: int
    vertices: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    per_cycle_counts: Dict[SimpleCycle, int] = field(default_factory=dict)
    pipeline: str = ""
    projected_vertices: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    @property
    def count(self) -> int:
        return len(self.vertices)


# ---------------------------------------------------------------- p_*

def _normalize(ctx: _Ctx, v: Sequence[int], total: int):
    return ctx.matrix([Fraction(x, total) for x in v])


def p_star_vertices(g: DiGraph) -> List[Tuple[Tuple[Fraction, ...], ...]]:
    ctx = _Ctx(g)
    return sorted(_normalize(ctx, ctx.W[c], c.length) for c in ctx.cycles)


def vertex_upper_bound(g: DiGraph) -> int:
    C = len(simple_cycles(g))
    return C * (g.n + 1) ** (C - 1) if C else 0


# ---------------------------------------------------------------- error sets

def _removable_zero_sum(ctx: _Ctx, c: SimpleCycle, multiset: Sequence[SimpleCycle],
                        base: IntVec) -> bool:
    """True if some nonempty sub-multiset of total length = 0 mod l(c) can be dropped
    while keeping c-irreducibility.  Such points are never vertices."""
    l = c.length
    counts: Dict[SimpleCycle, int] = {}
    for x in multiset:
        counts[x] = counts.get(x, 0) + 1
    items = sorted(counts.items())
    for take in itertools.product(*[range(k + 1) for _, k in items]):
        if not any(take):
            continue
        if sum(t * x.length for t, (x, _) in zip(take, items)) % l:
            continue
        rest = [x for t, (x, k) in zip(take, items) if k - t > 0]
        support = _combo(ctx, [(1, ctx.W[x]) for x in rest])
        if ctx.connected(support, c):
            return True
    return False


def _in_E_prime(ctx: _Ctx, c: SimpleCycle, eps: IntVec, used: Iterable[SimpleCycle],
                on_c: Sequence[bool]) -> bool:
    """Exchange test: moving lcm-weight from c' to c must leave the candidate set."""
    l = c.length
    Wc = ctx.W[c]
    for cp in set(used):
        L = math.lcm(l, cp.length)
        shifted = _combo(ctx, [(1, eps), (L // l, Wc), (-(L // cp.length), ctx.W[cp])])
        if _off_cycle_nonneg(shifted, on_c) and ctx.connected(shifted, c):
            return False
    return True


def _point(ctx: _Ctx, c: SimpleCycle, lam: Dict[SimpleCycle, int]) -> Tuple[IntVec, int]:
    total = sum(k * x.length for x, k in lam.items())
    lam_c = -(total // c.length)
    eps = _combo(ctx, [(lam_c, ctx.W[c])] + [(k, ctx.W[x]) for x, k in lam.items()])
    return eps, total


def _candidates_multiset(ctx: _Ctx, c: SimpleCycle, r: int, max_candidates: int):
    """All cycle multisets (without c) of size <= n-1 passing the vertex filters."""
    l = c.length
    on_c = [e in set(c.edges()) for e in ctx.edges]
    others = [x for x in ctx.cycles if x != c]
    out = {}
    limit = ctx.n - 1
    for size in range(0, limit + 1):
        for ms in itertools.combinations_with_replacement(others, size):
            if sum(x.length for x in ms) % l != r:
                continue
            lam: Dict[SimpleCycle, int] = {}
            for x in ms:
                lam[x] = lam.get(x, 0) + 1
            if any(k > math.lcm(l, x.length) // x.length for x, k in lam.items()):
                continue
            eps, _ = _point(ctx, c, lam)
            if eps in out or not ctx.connected(eps, c):
                continue
            if _removable_zero_sum(ctx, c, ms, eps):
                continue
            if not _in_E_prime(ctx, c, eps, lam, on_c):
                continue
            out[eps] = None
            if len(out) > max_candidates:
                raise BudgetExceeded("too many error-set candidates")
    return list(out)


def _cone_discard(ctx: _Ctx, c: SimpleCycle, S: Sequence[SimpleCycle], on_c) -> bool:
    """True when no point in the relative interior of cone(S) can be a vertex."""
    l = c.length
    M = _combo(ctx, [(1, ctx.W[x]) for x in S])
    if not ctx.connected(M, c):
        return True  # S does not connect to c
    supp = ctx.c_support(M, c)
    for x in S:
        L = math.lcm(l, x.length)
        M2 = _combo(ctx, [(1, M), (-(L // x.length), ctx.W[x])])
        if _off_cycle_nonneg(M2, on_c) and ctx.connected(M2, c) and ctx.c_support(M2, c) == supp:
            return True  # an lcm-multiple of x trades for c, support unchanged
    for x, y in itertools.combinations(S, 2):
        if x.length != y.length:
            continue
        d = _combo(ctx, [(1, ctx.W[x]), (-1, ctx.W[y])])
        ok = True
        for s in (1, -1):
            M2 = _combo(ctx, [(1, M), (s, d)])
            if not (_off_cycle_nonneg(M2, on_c) and ctx.connected(M2, c)
                    and ctx.c_support(M2, c) == supp):
                ok = False
                break
        if ok:
            return True  # x and y exchange in both directions
    return False


def _rays(ctx: _Ctx, c: SimpleCycle) -> Tuple[List[SimpleCycle], List[IntVec]]:
    others = [x for x in ctx.cycles if x != c]
    l = c.length
    rays = [tuple(l * a - x.length * b for a, b in zip(ctx.W[x], ctx.W[c])) for x in others]
    return others, rays


def _candidates_triangulation(ctx: _Ctx, c: SimpleCycle, r: int, max_candidates: int,
                              order: Optional[Sequence[int]] = None):
    """Triangulate the exchange cone, prune simplices, enumerate lattice points."""
    l = c.length
    on_c = [e in set(c.edges()) for e in ctx.edges]
    others, rays = _rays(ctx, c)
    simplices = triangulate_cone(Cone(tuple([0] * len(ctx.edges)), tuple(rays)), order)
    limit = ctx.n - 1
    out = {}
    faces = [()] + simplex_faces(simplices, limit)
    for face in faces:
        S = [others[i] for i in face]
        if S and _cone_discard(ctx, c, S, on_c):
            continue
        bounds = [range(1, math.lcm(l, x.length) // x.length + 2) for x in S]
        for lams in itertools.product(*bounds):
            if sum(lams) > limit and S:
                continue
            if sum(k * x.length for k, x in zip(lams, S)) % l != r:
                continue
            lam = dict(zip(S, lams))
            eps, _ = _point(ctx, c, lam)
            if eps in out or not ctx.connected(eps, c):
                continue
            ms = [x for x, k in lam.items() for _ in range(k)]
            if _removable_zero_sum(ctx, c, ms, eps):
                continue
            if not _in_E_prime(ctx, c, eps, S, on_c):
                continue
            out[eps] = None
            if len(out) > max_candidates:
                raise BudgetExceeded("too many error-set candidates")
    return list(out)


def _error_set(ctx: _Ctx, c: SimpleCycle, r: int, method: str, max_candidates: int,
               order=None) -> ErrorSet:
    if not 0 <= r < c.length:
        raise InputError(f"residue {r} out of range for a cycle of length {c.length}")
    if method == "triangulation":
        cand = _candidates_triangulation(ctx, c, r, max_candidates, order)
    elif method == "multiset":
        cand = _candidates_multiset(ctx, c, r, max_candidates)
    else:
        raise InputError(f"unknown error-set method {method!r}")
    _, rays = _rays(ctx, c)
    cand = sorted(cand)
    keep = [p for k, p in enumerate(cand) if is_vertex(p, cand[:k] + cand[k + 1:], rays)]
    return ErrorSet(c, r, ctx.n, tuple(ctx.edges), tuple(keep))


def error_set(g: DiGraph, c: SimpleCycle, r: int, method: str = "triangulation",
              max_cycles: int = 5000, max_candidates: int = 200_000,
              order: Optional[Sequence[int]] = None) -> ErrorSet:
    """Error set of ``(c, r)``: lattice points ``eps`` spanning the vertices near ``N w(c)``."""
    ctx = _Ctx(g, max_cycles)
    if c not in ctx.W:
        raise InputError(f"{c} is not a simple cycle of the graph")
    return _error_set(ctx, c, r, method, max_candidates, order)


# ---------------------------------------------------------------- assembly and cache

@dataclass
class ErrorSetTable:
    """All error sets of one graph plus derived thresholds."""

    graph: DiGraph
    sets: Dict[Tuple[SimpleCycle, int], ErrorSet]
    min_valid_N: int

    def assemble(self, N: int) -> Tuple[List[IntVec], Dict[SimpleCycle, int]]:
        ctx = _Ctx(self.graph)
        pts, counts = [], {}
        for c in ctx.cycles:
            r = N % c.length
            a = (N - r) // c.length
            es = self.sets[(c, r)]
            counts[c] = len(es)
            for eps in es.points:
                pts.append(tuple(a * w + x for w, x in zip(ctx.W[c], eps)))
        return pts, counts


def _positivity_threshold(ctx: _Ctx, sets: Dict[Tuple[SimpleCycle, int], ErrorSet]) -> int:
    """Smallest N such that every assembled matrix for every N' >= N is positive on c."""
    worst = 0
    for (c, r), es in sets.items():
        idx = [ctx.eidx[e] for e in c.edges()]
        for eps in es.points:
            need = 1 - min(eps[k] for k in idx)  # positivity on c needs a >= need
            last_bad = (need - 1) * c.length + r
            if need > 0 and last_bad >= 1:
                worst = max(worst, last_bad)
    return worst + 1


def _cache_path(ctx: _Ctx, cache_dir: Optional[str]) -> Path:
    base = Path(cache_dir or os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "tibell")
    return base / f"errsets-{ctx.key()[:32]}.json"


def _dump(ctx: _Ctx, table: ErrorSetTable, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "format": CACHE_FORMAT,
        "key": ctx.key(),
        "n": ctx.n,
        "edges": [list(e) for e in ctx.edges],
        "min_valid_N": table.min_valid_N,
        "sets": [{"cycle": list(c.nodes), "r": r, "points": [list(p) for p in es.points]}
                 for (c, r), es in sorted(table.sets.items())],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, indent=1))
    tmp.replace(path)


def _load(ctx: _Ctx, path: Path) -> Optional[ErrorSetTable]:
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if doc.get("format") != CACHE_FORMAT or doc.get("key") != ctx.key():
        return None
    sets = {}
    for s in doc["sets"]:
        c = SimpleCycle(tuple(s["cycle"]))
        sets[(c, s["r"])] = ErrorSet(c, s["r"], ctx.n, tuple(ctx.edges),
                                     tuple(tuple(p) for p in s["points"]))
    return ErrorSetTable(ctx.g, sets, doc["min_valid_N"])


def error_set_table(g: DiGraph, method: str = "triangulation", cache_dir: Optional[str] = None,
                    use_cache: bool = True, rebuild: bool = False, max_cycles: int = 5000,
                    max_candidates: int = 200_000) -> ErrorSetTable:
    """Compute (or load from the cache) every error set of ``g`` and the N thresholds."""
    ctx = _Ctx(g, max_cycles)
    path = _cache_path(ctx, cache_dir)
    if use_cache and not rebuild:
        cached = _load(ctx, path)
        if cached is not None:
            return cached
    sets = {}
    for c in ctx.cycles:
        for r in range(c.length):
            sets[(c, r)] = _error_set(ctx, c, r, method, max_candidates)
    table = ErrorSetTable(g, sets, _positivity_threshold(ctx, sets))
    if use_cache:
        _dump(ctx, table, path)
    return table


def separation_N(table: ErrorSetTable) -> int:
    """Smallest N0 >= min_valid_N after which clusters of different (c, r) never share a point.

    Below it the assembled list still gives every vertex but some coincide, so the
    count is smaller than the sum of the error-set sizes.  The check covers two
    periods past the last collision; further out the clusters only drift apart.
    """
    L = 1
    for c, _ in table.sets:
        L = math.lcm(L, c.length)
    N0 = N = table.min_valid_N
    while N < N0 + 2 * L:
        pts, _ = table.assemble(N)
        if len(set(pts)) != len(pts):
            N0 = N + 1
        N += 1
    return N0


def min_valid_N(g: DiGraph, **kw) -> int:
    return error_set_table(g, **kw).min_valid_N


# ---------------------------------------------------------------- p_N

def _balanced_points(ctx: _Ctx, N: int, budget: int) -> List[IntVec]:
    """All nonnegative integer balanced edge vectors of total N (depth-first)."""
    E = len(ctx.edges)
    order = sorted(range(E), key=lambda k: (max(ctx.edges[k]), ctx.edges[k]))
    last_use = {}
    for pos, k in enumerate(order):
        i, j = ctx.edges[k]
        last_use[i] = pos
        last_use[j] = pos
    closing = [[] for _ in range(E)]
    for v, pos in last_use.items():
        closing[pos].append(v)
    imb = [0] * ctx.n
    cur = [0] * E
    out: List[IntVec] = []

    def rec(pos: int, left: int):
        if pos == E:
            if left == 0:
                out.append(tuple(cur))
                if len(out) > budget:
                    raise BudgetExceeded(f"more than {budget} lattice points")
            return
        k = order[pos]
        i, j = ctx.edges[k]
        hi = left
        for x in range(hi + 1):
            cur[k] = x
            imb[i] += x
            imb[j] -= x
            if all(imb[v] == 0 for v in closing[pos]):
                rec(pos + 1, left - x)
            imb[i] -= x
            imb[j] += x
        cur[k] = 0

    rec(0, N)
    return out


def _weakly_irreducible(ctx: _Ctx, v: Sequence[int]) -> bool:
    edges = [e for e, x in zip(ctx.edges, v) if x]
    if not edges:
        return True
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent.setdefault(i, i)
        parent.setdefault(j, j)
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    return len({find(x) for x in parent}) == 1


def brute_force_p_N(g: DiGraph, N: int, budget: int = 2_000_000) -> List[Tuple[Tuple[Fraction, ...], ...]]:
    """Exact vertex set of p_N by exhaustive lattice-point enumeration."""
    return [_normalize(_Ctx(g), v, N) for v in _brute_force_points(_Ctx(g), N, budget)]


def _brute_force_points(ctx: _Ctx, N: int, budget: int) -> List[IntVec]:
    pts = [p for p in _balanced_points(ctx, N, budget) if any(p) and _weakly_irreducible(ctx, p)]
    pset = set(pts)
    # sound prefilter: drop midpoints p = (q1 + q2)/2 along short cycle-exchange directions
    dirs = set()
    for x, y in itertools.combinations(ctx.cycles, 2):
        a, b = ctx.W[x], ctx.W[y]
        dirs.add(tuple(y.length * s - x.length * t for s, t in zip(a, b)))
    dirs = [d for d in dirs if any(d)]
    survivors = []
    for p in pts:
        mid = False
        for d in dirs:
            q1 = tuple(s + t for s, t in zip(p, d))
            if q1 in pset and tuple(s - t for s, t in zip(p, d)) in pset:
                mid = True
                break
        if not mid:
            survivors.append(p)
    survivors.sort()
    return [p for k, p in enumerate(survivors)
            if is_vertex(p, survivors[:k] + survivors[k + 1:])]


def p_N_vertices(g: DiGraph, N: int, table: Optional[ErrorSetTable] = None,
                 brute_budget: int = 2_000_000, **kw) -> VertexReport:
    if N < 1:
        raise InputError("N must be positive")
    ctx = _Ctx(g, kw.get("max_cycles", 5000))
    if table is None:
        table = error_set_table(g, **kw)
    if N >= table.min_valid_N:
        pts, counts = table.assemble(N)
        pts = sorted(set(pts))  # clusters of different cycles may touch for small N
        pipeline = "error-sets"
    else:
        pts = _brute_force_points(ctx, N, brute_budget)
        counts = {}
        pipeline = "brute-force"
    for p in pts:
        if any(x < 0 for x in p) or sum(p) != N or not _weakly_irreducible(ctx, p):  # pragma: no cover
            raise AssertionError("assembled matrix is not a closed-path weight matrix")
    verts = tuple(sorted(_normalize(ctx, p, N) for p in pts))
    return VertexReport(N, verts, counts, pipeline)


def _min_closed_walk(g: DiGraph, edges, xi: Sequence[int], N: int):
    rows = [[INF] * g.n for _ in range(g.n)]
    for (i, j), x in zip(edges, xi):
        rows[i][j] = Fraction(x)
    return trop_trace(trop_power(TropMatrix._raw(rows), N))


def certify_p_N_vertex(g: DiGraph, point: Sequence[int], N: int, xi: Sequence[int]) -> bool:
    """Exact proof that the lattice point ``point`` (edge vector, total N) is a vertex of P_N.

    Independent of error sets: the minimum of an integer functional over all closed
    walks of length N is a min-plus trace.  ``point`` must attain it for ``xi`` and
    for every perturbation ``(2N+1) xi +- e_k``; then the minimizing face is ``{point}``.
    """
    edges = g.sorted_edges()
    if len(point) != len(edges) or len(xi) != len(edges):
        raise InputError("vector length does not match the edge count")
    K = 2 * N + 1
    tests = [tuple(xi)]
    for k in range(len(edges)):
        for s in (1, -1):
            t = [K * x for x in xi]
            t[k] += s
            tests.append(tuple(t))
    for t in tests:
        if _min_closed_walk(g, edges, t, N) != sum(a * b for a, b in zip(t, point)):
            return False
    return True


def certify_vertices(g: DiGraph, points: Sequence[Sequence[int]], N: int) -> List[bool]:
    """Certify each point of a candidate vertex list of P_N (edge vectors)."""
    pts = [tuple(p) for p in points]
    out = []
    for k, p in enumerate(pts):
        xi = separating_functional(p, pts[:k] + pts[k + 1:])
        out.append(xi is not None and certify_p_N_vertex(g, p, N, xi))
    return out


# ---------------------------------------------------------------- projections

def _phi(scenario: Scenario, ctx: _Ctx, v: Sequence, total) -> Tuple[Fraction, ...]:
    ev = edge_vectors(scenario)
    out = [Fraction(0)] * scenario.dim
    for e, x in zip(ctx.edges, v):
        if x:
            for k, y in enumerate(ev[e]):
                out[k] += x * y
    return tuple(o / total for o in out)


def projected_p_N(scenario: Scenario, N: int, table: Optional[ErrorSetTable] = None,
                  **kw) -> VertexReport:
    g = scenario.graph()
    rep = p_N_vertices(g, N, table, **kw)
    ctx = _Ctx(g)
    proj = {_phi(scenario, ctx, ctx.from_matrix(m), 1) for m in rep.vertices}
    verts = extreme_points(VRep(tuple(sorted(proj))))
    return VertexReport(N, rep.vertices, rep.per_cycle_counts, rep.pipeline, tuple(sorted(verts)))


def projected_error_counts(scenario: Scenario, table: ErrorSetTable) -> Dict[Tuple[SimpleCycle, int], int]:
    """Vertices of the projected error polyhedron per (c, r), for cycles that are
    vertices of the projected star polytope."""
    g = scenario.graph()
    ctx = _Ctx(g)
    star = {c: _phi(scenario, ctx, ctx.W[c], c.length) for c in ctx.cycles}
    uniq = sorted(set(star.values()))
    ext = set(extreme_points(VRep(tuple(uniq))))
    out = {}
    for c in ctx.cycles:
        if star[c] not in ext:
            continue
        rays = [tuple(a - b for a, b in zip(star[x], star[c])) for x in ctx.cycles if x != c]
        for r in range(c.length):
            pts = sorted({_phi(scenario, ctx, e, 1) for e in table.sets[(c, r)].points})
            out[(c, r)] = len(extreme_points(VRep(tuple(pts), tuple(rays))))
    return out
