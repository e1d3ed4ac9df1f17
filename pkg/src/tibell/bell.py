"""Translation-invariant Bell scenarios on a ring of N parties.

Each party has ``m`` binary-outcome inputs; correlators couple parties up to
distance ``R``.  A local deterministic strategy (LDS) of one party is an integer
``s`` in ``[0, 2**m)`` whose bit ``m-1-x`` is the outcome for input ``x``.

Coefficient layout (length ``m + R*m*m``): one-body block indexed by ``x``,
then for ``rho = 1..R`` a block indexed by ``(x, y)`` in lexicographic order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .digraph import ClosedPath, DiGraph, circulation_space, de_bruijn, node_index, node_tuple
from .errors import CapExceeded, DimensionMismatch, Inconsistent, InputError, InvalidPath
from .trop import (
    INF,
    StabilizationReport,
    TropMatrix,
    critical_graph,
    karp_eigenvalue,
    stabilization,
    trop_identity,
    trop_mul,
    trop_power,
    trop_trace,
)

CorrelatorVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Scenario:
    m: int
    R: int
    N: Optional[int] = None

    def __post_init__(self):
        if self.m < 2 or self.R < 1:
            raise InputError("need m >= 2 inputs and range R >= 1")
        if self.N is not None and self.N < 2 * self.R + 1:
            raise InputError("ring size must satisfy N >= 2R+1")

    @property
    def dim(self) -> int:
        return self.m + self.R * self.m * self.m

    @property
    def alphabet(self) -> int:
        return 2 ** self.m

    @property
    def nodes(self) -> int:
        return 2 ** (self.R * self.m)

    def graph(self) -> DiGraph:
        return _de_bruijn_cached(self.alphabet, self.R)


@lru_cache(maxsize=None)
def _de_bruijn_cached(alphabet: int, order: int) -> DiGraph:
    return de_bruijn(alphabet, order)


@dataclass(frozen=True)
class BellInequality:
    """``alpha . q >= beta`` with ``beta`` normalized per party."""

    scenario: Scenario
    alpha: Tuple[Fraction, ...]
    beta: Optional[Fraction] = None
    annotations: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.alpha)
        if len(a) != self.scenario.dim:
            raise DimensionMismatch(
                f"alpha has length {len(a)}, scenario needs {self.scenario.dim}")
        object.__setattr__(self, "alpha", a)
        if self.beta is not None:
            object.__setattr__(self, "beta", Fraction(self.beta))

    @classmethod
    def of(cls, m: int, R: int, alpha, beta=None, N=None) -> "BellInequality":
        return cls(Scenario(m, R, N), tuple(alpha), beta)


# ---------------------------------------------------------------- correlators

def outcome(m: int, s: int, x: int) -> int:
    return (s >> (m - 1 - x)) & 1


def psi_single(m: int, s: int) -> Tuple[int, ...]:
    if not 0 <= s < 2 ** m:
        raise InputError(f"strategy {s} out of range for m={m}")
    return tuple(1 - 2 * outcome(m, s, x) for x in range(m))


@lru_cache(maxsize=None)
def _psi_edge(m: int, R: int, strategies: Tuple[int, ...]) -> CorrelatorVector:
    ps = [psi_single(m, s) for s in strategies]
    out = [Fraction(sum(p[x] for p in ps), R + 1) for x in range(m)]
    for rho in range(1, R + 1):
        terms = R + 1 - rho
        for x in range(m):
            for y in range(m):
                tot = sum(ps[j][x] * ps[j + rho][y] for j in range(terms))
                out.append(Fraction(tot, terms))
    return tuple(out)


def psi_edge(scenario: Scenario, strategies: Sequence[int]) -> CorrelatorVector:
    strategies = tuple(int(s) for s in strategies)
    if len(strategies) != scenario.R + 1:
        raise InputError(f"need {scenario.R + 1} strategies, got {len(strategies)}")
    return _psi_edge(scenario.m, scenario.R, strategies)


def edge_strategies(scenario: Scenario, mu: int, nu: int) -> Tuple[int, ...]:
    """Strategy window ``(s_0..s_R)`` of the De Bruijn edge ``mu -> nu``."""
    a, R = scenario.alphabet, scenario.R
    tm, tn = node_tuple(mu, a, R), node_tuple(nu, a, R)
    if tm[1:] != tn[:-1]:
        raise InvalidPath(f"{tm} -> {tn} is not a De Bruijn edge")
    return tm + tn[-1:]


def path_from_strategies(scenario: Scenario, strategies: Sequence[int]) -> ClosedPath:
    """De Bruijn closed path visited by the cyclic strategy vector ``strategies``."""
    N, R, a = len(strategies), scenario.R, scenario.alphabet
    return ClosedPath(tuple(node_index([strategies[(i + k) % N] for k in range(R)], a)
                            for i in range(N)))


def strategies_from_path(scenario: Scenario, path: ClosedPath) -> Tuple[int, ...]:
    a, R = scenario.alphabet, scenario.R
    for mu, nu in path.edges():
        edge_strategies(scenario, mu, nu)
    return tuple(node_tuple(mu, a, R)[0] for mu in path.nodes)


def projected_point(scenario: Scenario, path) -> CorrelatorVector:
    if not isinstance(path, ClosedPath):
        path = ClosedPath(tuple(path))
    n = scenario.nodes
    if any(not 0 <= v < n for v in path.nodes):
        raise InvalidPath("node index out of range")
    total = [Fraction(0)] * scenario.dim
    for mu, nu in path.edges():
        for k, x in enumerate(psi_edge(scenario, edge_strategies(scenario, mu, nu))):
            total[k] += x
    N = len(path)
    return tuple(t / N for t in total)


def edge_vectors(scenario: Scenario) -> Dict[Tuple[int, int], CorrelatorVector]:
    g = scenario.graph()
    return {(mu, nu): psi_edge(scenario, edge_strategies(scenario, mu, nu))
            for mu, nu in g.sorted_edges()}


def value(ineq: BellInequality, path) -> Fraction:
    """Per-party value ``alpha . q`` of a deterministic strategy (closed path)."""
    return linalg.dot(ineq.alpha, projected_point(ineq.scenario, path))


# ---------------------------------------------------------------- F(alpha)

def build_F(ineq: BellInequality) -> TropMatrix:
    sc = ineq.scenario
    n = sc.nodes
    rows = [[INF] * n for _ in range(n)]
    for (mu, nu), psi in edge_vectors(sc).items():
        rows[mu][nu] = linalg.dot(ineq.alpha, psi)
    return TropMatrix._raw(rows)


def alpha_from_F(f: TropMatrix, scenario: Scenario) -> Tuple[Fraction, ...]:
    g = scenario.graph()
    if f.n != scenario.nodes:
        raise DimensionMismatch("matrix size does not match the scenario")
    for i in range(f.n):
        for j in range(f.n):
            if (f.rows[i][j] is INF) == g.has_edge(i, j):
                raise Inconsistent(f"finite pattern differs from the De Bruijn graph at {(i, j)}")
    ev = edge_vectors(scenario)
    edges = sorted(ev)
    a = [ev[e] for e in edges]
    b = [f.rows[i][j] for i, j in edges]
    sol = linalg.solve(a, b)
    if sol is None:
        raise Inconsistent("no coefficient vector reproduces the matrix")
    # the edge vectors span the full coefficient space, so the solution is unique
    return sol


# ---------------------------------------------------------------- bounds

def _check_N(sc: Scenario, N: int) -> None:
    if N < 2 * sc.R + 1:
        raise InputError(f"need N >= 2R+1 = {2 * sc.R + 1}, got {N}")


def classical_bound(ineq: BellInequality, N: int, method: int = 1) -> Fraction:
    """Per-party classical bound on a ring of ``N`` parties."""
    _check_N(ineq.scenario, N)
    F = build_F(ineq)
    if method == 1:
        t = trop_trace(trop_power(F, N))
    elif method == 2:
        G = trop_mul(F, F)
        q, r = divmod(N, 2)
        T = F if r else trop_identity(F.n)
        t = trop_trace(trop_mul(trop_power(G, q), T))
    elif method == 3:
        H = trop_power(F, 3)
        q, r = divmod(N, 3)
        T = trop_power(F, r) if r else trop_identity(F.n)
        t = trop_trace(trop_mul(trop_power(H, q), T))
    else:
        raise InputError(f"unknown method {method}")
    return t / N


def thermo_bound(ineq: BellInequality) -> Fraction:
    F = build_F(ineq)
    lam = karp_eigenvalue(F)
    G = trop_mul(F, F)
    H = trop_mul(G, F)
    if karp_eigenvalue(G) != 2 * lam or karp_eigenvalue(H) != 3 * lam:  # pragma: no cover
        raise AssertionError("eigenvalues of F, F^2, F^3 are inconsistent")
    return lam


@dataclass(frozen=True)
class OptimalStrategies:
    paths: Tuple[ClosedPath, ...]
    truncated: bool
    value: Optional[Fraction]   # per-party optimum beta_N
    source: str = "critical-graph"


def closed_walks(g: DiGraph, N: int, cap: Optional[int] = None) -> Tuple[List[ClosedPath], bool]:
    """All closed walks of length N (distinct starting points count separately)."""
    out: List[ClosedPath] = []
    succ = [g.successors(i) for i in range(g.n)]
    pred: Dict[int, List[int]] = {}
    for i, j in g.edges:
        pred.setdefault(j, []).append(i)
    for start in range(g.n):
        if not succ[start]:
            continue
        # back[k]: nodes that reach start in exactly k steps
        back = [set() for _ in range(N + 1)]
        back[0] = {start}
        for k in range(1, N + 1):
            back[k] = {i for j in back[k - 1] for i in pred.get(j, ())}
        if start not in back[N]:
            continue
        path = [start]
        stack = [iter(succ[start])]
        while stack:
            depth = len(path)
            if depth == N:
                if g.has_edge(path[-1], start):
                    out.append(ClosedPath(tuple(path)))
                    if cap is not None and len(out) >= cap:
                        return out, True
                stack.pop()
                path.pop()
                continue
            for w in stack[-1]:
                if w in back[N - depth]:
                    path.append(w)
                    stack.append(iter(succ[w]))
                    break
            else:
                stack.pop()
                path.pop()
    return out, False


def _minimal_walks(F: TropMatrix, N: int, cap: Optional[int]) -> Tuple[List[ClosedPath], bool]:
    """Closed walks of length N whose weight equals trace(F^N), by backtracking on powers of F."""
    n = F.n
    powers = [trop_identity(n)]
    for _ in range(N - 1):
        powers.append(trop_mul(powers[-1], F))
    target = trop_trace(trop_mul(powers[-1], F))
    out: List[ClosedPath] = []

    def rec(start, path, w):
        v = path[-1]
        if len(path) == N:
            e = F.rows[v][start]
            if e is not INF and w + e == target:
                out.append(ClosedPath(tuple(path)))
                return cap is not None and len(out) >= cap
            return False
        left = N - len(path)  # edges still needed after u, closing edge included
        for u in range(n):
            e = F.rows[v][u]
            rest = powers[left].rows[u][start]
            if e is INF or rest is INF or w + e + rest != target:
                continue
            path.append(u)
            if rec(start, path, w + e):
                return True
            path.pop()
        return False

    for s in range(n):
        if rec(s, [s], Fraction(0)):
            return out, True
    return out, False


def optimal_strategies(ineq: BellInequality, N: int, cap: Optional[int] = 100_000) -> OptimalStrategies:
    """Every closed path of length N attaining the classical bound.

    When the ring attains the thermodynamic value (beta_N = lambda) these are
    exactly the length-N closed walks of the critical graph.  Otherwise no
    critical walk of that length exists and the minimizers are found by
    backtracking on the min-plus powers of F.
    """
    _check_N(ineq.scenario, N)
    F = build_F(ineq)
    lam = karp_eigenvalue(F)
    beta = classical_bound(ineq, N)
    if beta == lam:
        paths, truncated = closed_walks(critical_graph(F), N, cap)
        source = "critical-graph"
    else:
        paths, truncated = _minimal_walks(F, N, cap)
        source = "min-plus-backtracking"
    for p in paths:
        if value(ineq, p) != beta:  # pragma: no cover - guaranteed by construction
            raise AssertionError(f"path {p.nodes} misses the bound")
    return OptimalStrategies(tuple(paths), truncated, beta, source)


# ---------------------------------------------------------------- faces

@dataclass(frozen=True)
class FaceReport:
    span_rank: int          # rank(A . Lambda)
    dimension: int          # affine dimension of the face
    ambient: int            # m + R m^2
    whole_polytope: bool

    @property
    def is_facet(self) -> bool:
        return self.dimension == self.ambient - 1


def face_report(ineq: BellInequality) -> FaceReport:
    sc = ineq.scenario
    F = build_F(ineq)
    crit = critical_graph(F)
    n = sc.nodes
    ev = edge_vectors(sc)
    basis = circulation_space(crit)
    span_rows, aff_rows = [], []
    for lam in basis:
        vec = [Fraction(0)] * sc.dim
        tot = Fraction(0)
        for (i, j) in crit.edges:
            c = lam[i * n + j]
            if c:
                tot += c
                for k, x in enumerate(ev[(i, j)]):
                    vec[k] += c * x
        span_rows.append(vec)
        aff_rows.append(vec + [tot])
    span = linalg.rank(span_rows)
    dim = linalg.rank(aff_rows) - 1
    return FaceReport(span, dim, sc.dim, dim == sc.dim)


def face_dimension(ineq: BellInequality) -> int:
    """Dimension of the face of the local polytope on which the bound is attained.

    Equals ``rank(A Λ) - 1`` whenever the origin lies off the face's affine
    span; the homogenized rank used here also covers the degenerate case.
    """
    return face_report(ineq).dimension


# ---------------------------------------------------------------- symmetries

@dataclass(frozen=True)
class SymmetryElement:
    """``(g . alpha)[i] = sign[i] * alpha[perm[i]]``."""

    perm: Tuple[int, ...]
    sign: Tuple[int, ...]
    label: str = field(default="", compare=False)

    def apply(self, alpha: Sequence) -> Tuple[Fraction, ...]:
        return tuple(s * Fraction(alpha[p]) for p, s in zip(self.perm, self.sign))

    def __call__(self, ineq: BellInequality) -> BellInequality:
        return BellInequality(ineq.scenario, self.apply(ineq.alpha), ineq.beta)


def _index(m: int, rho: int, x: int, y: int = 0) -> int:
    if rho == 0:
        return x
    return m + (rho - 1) * m * m + x * m + y


def symmetry_group(scenario: Scenario) -> List[SymmetryElement]:
    """Party reflection x input permutations x per-input outcome flips."""
    m, R = scenario.m, scenario.R
    out = []
    for flip in (False, True):
        for pi in itertools.permutations(range(m)):
            for mask in range(2 ** m):
                sgn = [(-1) ** ((mask >> x) & 1) for x in range(m)]
                perm = [0] * scenario.dim
                sign = [1] * scenario.dim
                for x in range(m):
                    perm[x] = pi[x]
                    sign[x] = sgn[x]
                for rho in range(1, R + 1):
                    for x in range(m):
                        for y in range(m):
                            src = (pi[y], pi[x]) if flip else (pi[x], pi[y])
                            k = _index(m, rho, x, y)
                            perm[k] = _index(m, rho, *src)
                            sign[k] = sgn[x] * sgn[y]
                label = f"flip={int(flip)} perm={pi} outcome-mask={mask}"
                out.append(SymmetryElement(tuple(perm), tuple(sign), label))
    return out


def orbit(ineq: BellInequality) -> List[Tuple[Fraction, ...]]:
    return sorted({g.apply(ineq.alpha) for g in symmetry_group(ineq.scenario)})


def canonical_class(ineq: BellInequality) -> BellInequality:
    return BellInequality(ineq.scenario, orbit(ineq)[0], ineq.beta)


def classify_inequality(ineq: BellInequality, max_n: int = 10_000) -> StabilizationReport:
    return stabilization(build_F(ineq), max_n)


# ---------------------------------------------------------------- star polytope

def cycle_correlators(scenario: Scenario, cap: Optional[int] = None):
    """Projected correlator vector of every simple cycle of the De Bruijn graph."""
    from .digraph import iter_simple_cycles

    ev = edge_vectors(scenario)
    den = math.lcm(*(x.denominator for v in ev.values() for x in v))
    iev = {e: [int(x * den) for x in v] for e, v in ev.items()}
    out = []
    for k, c in enumerate(iter_simple_cycles(scenario.graph())):
        if cap is not None and k >= cap:
            raise CapExceeded(f"more than {cap} simple cycles")
        tot = [0] * scenario.dim
        for e in c.edges():
            for i, x in enumerate(iev[e]):
                tot[i] += x
        out.append((c, tuple(Fraction(t, den * c.length) for t in tot)))
    out.sort()
    return out


@dataclass(frozen=True)
class StarPolytope:
    cycle_count: int
    distinct: Tuple[CorrelatorVector, ...]
    extreme: Optional[Tuple[CorrelatorVector, ...]]
    dropped: Tuple = ()       # cycles whose vector is not an extreme point
    affine_rank: int = 0


def star_polytope(scenario: Scenario, extreme: bool = True, cap: Optional[int] = None) -> StarPolytope:
    """Normalized cycle polytope projected to correlator space."""
    from .polyhedra import VRep, affine_rank, extreme_points

    pairs = cycle_correlators(scenario, cap)
    distinct = tuple(sorted({v for _, v in pairs}))
    rank = affine_rank(distinct)
    if not extreme:
        return StarPolytope(len(pairs), distinct, None, (), rank)
    ext = tuple(extreme_points(VRep(distinct)))
    keep = set(ext)
    dropped = tuple(c for c, v in pairs if v not in keep)
    return StarPolytope(len(pairs), distinct, ext, dropped, rank)


def facet_classes(scenario: Scenario, inequalities) -> List[Tuple[BellInequality, int]]:
    """Group ``(alpha, beta)`` facets into symmetry classes; returns representative and size."""
    classes: Dict[Tuple, List] = {}
    for a, b in inequalities:
        ineq = BellInequality(scenario, tuple(a), b)
        rep = canonical_class(ineq)
        classes.setdefault((rep.alpha, rep.beta), []).append(ineq)
    return [(BellInequality(scenario, a, b), len(v)) for (a, b), v in sorted(classes.items())]
