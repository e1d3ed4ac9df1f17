"""Directed graphs, simple cycles, closed paths and weight matrices.

Nodes are the integers ``0..n-1``.  Self-loops are allowed, parallel edges are
not.  All routines are deterministic: components come out ordered by their
smallest member and cycles are returned in canonical form, sorted.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .errors import CapExceeded, InputError, InvalidPath, NotBalanced, SizeOverflow

Edge = Tuple[int, int]


class DiGraph:
    """A simple digraph on nodes ``0..n-1`` (self-loops allowed)."""

    __slots__ = ("n", "edges", "_succ")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise InputError("node count must be nonnegative")
        es = []
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge {(i, j)} out of range for n={n}")
            es.append((i, j))
        if len(set(es)) != len(es):
            raise InputError("duplicate edges are not allowed")
        self.n = n
        self.edges: FrozenSet[Edge] = frozenset(es)
        succ: List[List[int]] = [[] for _ in range(n)]
        for i, j in sorted(self.edges):
            succ[i].append(j)
        self._succ = tuple(tuple(s) for s in succ)

    def successors(self, i: int) -> Tuple[int, ...]:
        return self._succ[i]

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def nodes_with_edges(self) -> List[int]:
        seen = set()
        for i, j in self.edges:
            seen.add(i)
            seen.add(j)
        return sorted(seen)

    def subgraph(self, nodes: Iterable[int]) -> "DiGraph":
        keep = set(nodes)
        return DiGraph(self.n, [(i, j) for i, j in self.edges if i in keep and j in keep])

    def __eq__(self, other):
        return isinstance(other, DiGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"DiGraph(n={self.n}, edges={len(self.edges)})"


def complete_graph(n: int, loops: bool = True) -> DiGraph:
    return DiGraph(n, [(i, j) for i in range(n) for j in range(n) if loops or i != j])


@dataclass(frozen=True, order=True)
class SimpleCycle:
    """A simple cycle, stored rotated so that its smallest node comes first."""

    nodes: Tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(int(x) for x in self.nodes)
        if not nodes:
            raise InputError("a cycle needs at least one node")
        if len(set(nodes)) != len(nodes):
            raise InputError(f"repeated node in simple cycle {nodes}")
        k = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[k:] + nodes[:k])

    @property
    def length(self) -> int:
        return len(self.nodes)

    def edges(self) -> List[Edge]:
        ns = self.nodes
        return [(ns[i], ns[(i + 1) % len(ns)]) for i in range(len(ns))]

    def weight_matrix(self, n: int) -> "WeightMatrix":
        return weight_matrix(ClosedPath(self.nodes), n)

    def __repr__(self):
        return "(" + ",".join(map(str, self.nodes)) + ")"


@dataclass(frozen=True)
class ClosedPath:
    """A closed walk ``(i_1, ..., i_N)``; the edge ``(i_N, i_1)`` closes it."""

    nodes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(x) for x in self.nodes))
        if not self.nodes:
            raise InvalidPath("closed path must be nonempty")

    def __len__(self):
        return len(self.nodes)

    def edges(self) -> List[Edge]:
        ns = self.nodes
        return [(ns[i], ns[(i + 1) % len(ns)]) for i in range(len(ns))]

    def check(self, g: DiGraph) -> None:
        for e in self.edges():
            if not g.has_edge(*e):
                raise InvalidPath(f"edge {e} is not in the graph")


@dataclass(frozen=True)
class WeightMatrix:
    """Integer edge-use counts on an ``n``-node graph, stored row-major."""

    n: int
    entries: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "WeightMatrix":
        n = len(rows)
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        if any(len(r) != n for r in ent):
            raise InputError("weight matrix must be square")
        return cls(n, ent)

    @classmethod
    def zero(cls, n: int) -> "WeightMatrix":
        return cls(n, tuple((0,) * n for _ in range(n)))

    @property
    def total(self) -> int:
        return sum(map(sum, self.entries))

    def __getitem__(self, ij: Edge) -> int:
        return self.entries[ij[0]][ij[1]]

    def support(self) -> List[Edge]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.entries[i][j]]

    def is_balanced(self) -> bool:
        e = self.entries
        return all(sum(e[i]) == sum(e[k][i] for k in range(self.n)) for i in range(self.n))

    def flat(self) -> Tuple[int, ...]:
        return tuple(x for r in self.entries for x in r)

    def __add__(self, other: "WeightMatrix") -> "WeightMatrix":
        return WeightMatrix(self.n, tuple(tuple(a + b for a, b in zip(r, s))
                                          for r, s in zip(self.entries, other.entries)))

    def scale(self, k: int) -> "WeightMatrix":
        return WeightMatrix(self.n, tuple(tuple(k * a for a in r) for r in self.entries))


# ---------------------------------------------------------------- components

def scc(g: DiGraph) -> List[List[int]]:
    """Strongly connected components (iterative Tarjan), ordered by minimal member."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, pos = work[-1]
            succ = g.successors(v)
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        onstack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def is_strongly_connected(g: DiGraph) -> bool:
    return g.n > 0 and len(scc(g)) == 1


def _undirected_connected(nodes: Iterable[int], edges: Iterable[Edge]) -> bool:
    nodes = set(nodes)
    if len(nodes) <= 1:
        return True
    adj: Dict[int, List[int]] = defaultdict(list)
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    start = next(iter(nodes))
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen >= nodes


def period(g: DiGraph, nodes: Sequence[int]) -> int:
    """gcd of all cycle lengths inside the strongly connected node set ``nodes``."""
    from math import gcd

    keep = set(nodes)
    root = min(keep)
    level = {root: 0}
    order = [root]
    for v in order:
        for w in g.successors(v):
            if w in keep and w not in level:
                level[w] = level[v] + 1
                order.append(w)
    p = 0
    for v in keep:
        for w in g.successors(v):
            if w in keep:
                p = gcd(p, level[v] + 1 - level[w])
    return abs(p)


# ---------------------------------------------------------------- simple cycles

def _johnson_from(succ: Dict[int, List[int]], s: int) -> Iterator[Tuple[int, ...]]:
    path = [s]
    blocked = {s}
    B: Dict[int, set] = defaultdict(set)
    stack = [iter(succ[s])]
    closed = [False]

    def unblock(v):
        todo = [v]
        while todo:
            u = todo.pop()
            if u in blocked:
                blocked.discard(u)
                todo.extend(B[u])
                B[u].clear()

    while stack:
        nbrs = stack[-1]
        for w in nbrs:
            if w == s:
                yield tuple(path)
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                closed.append(False)
                stack.append(iter(succ[w]))
                blocked.add(w)
                break
        else:
            stack.pop()
            v = path.pop()
            if closed.pop():
                if closed:
                    closed[-1] = True
                unblock(v)
            else:
                for w in succ[v]:
                    B[w].add(v)


def iter_simple_cycles(g: DiGraph) -> Iterator[SimpleCycle]:
    """Johnson's algorithm; every cycle is produced once, already canonical."""
    for i in range(g.n):
        if g.has_edge(i, i):
            yield SimpleCycle((i,))
    noloops = [(i, j) for i, j in g.edges if i != j]
    for s in range(g.n):
        sub = DiGraph(g.n, [(i, j) for i, j in noloops if i >= s and j >= s])
        comp = next((c for c in scc(sub) if s in c), None)
        if comp is None or len(comp) < 2:
            continue
        members = set(comp)
        succ = {v: [w for w in sub.successors(v) if w in members] for v in comp}
        for cyc in _johnson_from(succ, s):
            yield SimpleCycle(cyc)


def simple_cycles(g: DiGraph, cap: Optional[int] = None) -> List[SimpleCycle]:
    out = []
    for c in iter_simple_cycles(g):
        out.append(c)
        if cap is not None and len(out) > cap:
            raise CapExceeded(f"more than {cap} simple cycles")
    out.sort()
    return out


def simple_cycle_count_formula(nodes: int) -> int:
    if nodes < 1:
        raise InputError("nodes must be positive")
    return sum(factorial(nodes) // (k * factorial(nodes - k)) for k in range(1, nodes + 1))


def de_bruijn(alphabet: int, order: int, max_nodes: int = 1 << 20) -> DiGraph:
    """De Bruijn graph; node index is the big-endian base-``alphabet`` value of the tuple."""
    if alphabet < 2 or order < 1:
        raise InputError("need alphabet >= 2 and order >= 1")
    n = alphabet ** order
    if n > max_nodes:
        raise SizeOverflow(f"De Bruijn graph with {n} nodes exceeds {max_nodes}")
    return DiGraph(n, [(mu, (mu * alphabet) % n + s) for mu in range(n) for s in range(alphabet)])


def node_tuple(index: int, alphabet: int, order: int) -> Tuple[int, ...]:
    digits = []
    for _ in range(order):
        index, d = divmod(index, alphabet)
        digits.append(d)
    return tuple(reversed(digits))


def node_index(digits: Sequence[int], alphabet: int) -> int:
    v = 0
    for d in digits:
        v = v * alphabet + d
    return v


# ---------------------------------------------------------------- weight matrices

def weight_matrix(p, n: int) -> WeightMatrix:
    if not isinstance(p, ClosedPath):
        p = ClosedPath(tuple(p))
    rows = [[0] * n for _ in range(n)]
    for i, j in p.edges():
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidPath(f"node out of range in {p.nodes}")
        rows[i][j] += 1
    return WeightMatrix.from_rows(rows)


def _check_weight(w: WeightMatrix) -> None:
    if any(x < 0 for r in w.entries for x in r):
        raise NotBalanced("weight matrix has negative entries")
    if not w.is_balanced():
        raise NotBalanced("row sums differ from column sums")


def _smallest_cycle(succ: Dict[int, List[int]]) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest simple cycle (canonical form) of a support graph."""
    pred: Dict[int, List[int]] = defaultdict(list)
    for v, ws in succ.items():
        for w in ws:
            pred[w].append(v)
    for s in sorted(succ):
        if s in succ[s]:
            return (s,)
        # nodes above s that can get back to s without dipping below it
        back = {s}
        todo = [s]
        while todo:
            v = todo.pop()
            for u in pred[v]:
                if u > s and u not in back:
                    back.add(u)
                    todo.append(u)
        path = [s]
        onpath = {s}
        stack = [iter(sorted(w for w in succ[s] if w > s and w in back))]
        while stack:
            v = path[-1]
            if v != s and s in succ[v]:
                return tuple(path)
            for w in stack[-1]:
                if w not in onpath:
                    path.append(w)
                    onpath.add(w)
                    stack.append(iter(sorted(x for x in succ.get(w, ()) if x > s and x in back)))
                    break
            else:
                stack.pop()
                onpath.discard(path.pop())
    return None


def decompose_into_cycles(w: WeightMatrix) -> List[Tuple[SimpleCycle, int]]:
    """Greedy peeling of the lexicographically smallest cycle in the support."""
    _check_weight(w)
    n = w.n
    rem = [list(r) for r in w.entries]
    out: Dict[SimpleCycle, int] = {}
    while True:
        succ = {i: [j for j in range(n) if rem[i][j]] for i in range(n)}
        succ = {i: s for i, s in succ.items() if s}
        if not succ:
            break
        cyc = _smallest_cycle(succ)
        if cyc is None:  # impossible for balanced input
            raise NotBalanced("support contains an edge on no cycle")
        c = SimpleCycle(cyc)
        k = min(rem[i][j] for i, j in c.edges())
        for i, j in c.edges():
            rem[i][j] -= k
        out[c] = out.get(c, 0) + k
    return sorted(out.items())


def _support_graph(rows: Sequence[Sequence[int]]) -> List[Edge]:
    n = len(rows)
    return [(i, j) for i in range(n) for j in range(n) if rows[i][j]]


def is_weakly_irreducible(w) -> bool:
    rows = w.entries if isinstance(w, WeightMatrix) else w
    edges = _support_graph(rows)
    nodes = {x for e in edges for x in e}
    return _undirected_connected(nodes, edges)


def c_support(w, c: SimpleCycle) -> FrozenSet[int]:
    rows = w.entries if isinstance(w, WeightMatrix) else w
    edges = _support_graph(rows) + c.edges()
    return frozenset(x for e in edges for x in e)


def is_c_irreducible(w, c: SimpleCycle) -> bool:
    rows = w.entries if isinstance(w, WeightMatrix) else w
    edges = _support_graph(rows) + c.edges()
    nodes = {x for e in edges for x in e}
    return _undirected_connected(nodes, edges)


def circulation_space(g: DiGraph) -> List[Tuple[Fraction, ...]]:
    """Exact basis of balanced matrices supported on ``g``; vectors are row-major n*n."""
    n = g.n
    edges = g.sorted_edges()
    cons = []
    for v in range(n):
        row = [0] * len(edges)
        for k, (i, j) in enumerate(edges):
            if i == v:
                row[k] += 1
            if j == v:
                row[k] -= 1
        cons.append(row)
    basis = linalg.nullspace(cons, len(edges))
    out = []
    for b in basis:
        flat = [Fraction(0)] * (n * n)
        for k, (i, j) in enumerate(edges):
            flat[i * n + j] = b[k]
        out.append(tuple(flat))
    return out


def closed_path_count(g: DiGraph, N: int) -> int:
    if N < 1:
        raise InputError("N must be positive")
    n = g.n
    a = [[1 if g.has_edge(i, j) else 0 for j in range(n)] for i in range(n)]
    res = [[int(i == j) for j in range(n)] for i in range(n)]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    base, e = a, N
    while e:
        if e & 1:
            res = mul(res, base)
        base = mul(base, base)
        e >>= 1
    return sum(res[i][i] for i in range(n))
