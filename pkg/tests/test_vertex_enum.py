import json
import math
import random
from fractions import Fraction

import pytest

from tibell.bell import Scenario
from tibell.digraph import DiGraph, SimpleCycle, complete_graph, de_bruijn, simple_cycles
from tibell.errors import BudgetExceeded, InputError
from tibell.polyhedra import VRep, hull
from tibell.polyhedra import separating_functional
from tibell.vertex_enum import (
    _Ctx,
    _balanced_points,
    _weakly_irreducible,
    brute_force_p_N,
    certify_p_N_vertex,
    error_set,
    error_set_table,
    p_N_vertices,
    p_star_vertices,
    projected_error_counts,
    projected_p_N,
    separation_N,
    vertex_upper_bound,
)

K3 = complete_graph(3)
K4 = complete_graph(4)
DB22 = de_bruijn(2, 2)


def flat(m):
    return tuple(x for row in m for x in row)


def sizes_by_length(table):
    out = {}
    for (c, r), es in table.sets.items():
        out.setdefault((c.length, r), set()).add(len(es))
    return out


def test_upper_bound():
    assert vertex_upper_bound(K4) == 24 * 5 ** 23
    assert vertex_upper_bound(complete_graph(5)) == 89 * 6 ** 88


def test_self_loop_graph():
    g = DiGraph(1, [(0, 0)])
    table = error_set_table(g, use_cache=False)
    assert table.min_valid_N == 1
    for N in (1, 2, 7):
        assert p_N_vertices(g, N, table).vertices == ((tuple([Fraction(1)]),),)


def test_error_set_rejects_foreign_cycle():
    with pytest.raises(InputError):
        error_set(K3, SimpleCycle((0, 5)), 0)


@pytest.mark.parametrize("g", [K3, DB22], ids=["K3", "DB22"])
def test_methods_agree(g):
    a = error_set_table(g, use_cache=False)
    b = error_set_table(g, method="multiset", use_cache=False)
    assert a.sets == b.sets and a.min_valid_N == b.min_valid_N


@pytest.mark.parametrize("seed", range(4))
def test_triangulation_order_does_not_matter(seed):
    rng = random.Random(seed)
    for c in simple_cycles(DB22):
        for r in range(c.length):
            base = error_set(DB22, c, r)
            k = len(simple_cycles(DB22)) - 1
            order = list(range(k))
            rng.shuffle(order)
            assert error_set(DB22, c, r, order=order).points == base.points


def test_zero_residue_sets_are_trivial():
    table = error_set_table(DB22, use_cache=False)
    for (c, r), es in table.sets.items():
        if r == 0:
            assert es.points == (tuple(0 for _ in es.edges),)


@pytest.mark.parametrize("g,Ns", [(K3, range(5, 13)), (DB22, range(10, 21))], ids=["K3", "DB22"])
def test_assembly_matches_brute_force(g, Ns):
    table = error_set_table(g, use_cache=False)
    for N in Ns:
        assert N >= table.min_valid_N
        rep = p_N_vertices(g, N, table)
        assert rep.pipeline == "error-sets"
        assert list(rep.vertices) == sorted(brute_force_p_N(g, N))


def test_thresholds():
    t3 = error_set_table(K3, use_cache=False)
    t22 = error_set_table(DB22, use_cache=False)
    assert (t3.min_valid_N, separation_N(t3)) == (5, 8)
    assert (t22.min_valid_N, separation_N(t22)) == (10, 18)
    # past separation, the vertex count is the plain sum of error-set sizes
    for N in range(18, 30):
        pts, counts = t22.assemble(N)
        assert len(set(pts)) == sum(counts.values())


def test_small_N_falls_back_to_brute_force():
    rep = p_N_vertices(DB22, 4, use_cache=False)
    assert rep.pipeline == "brute-force" and rep.count == 6


def test_cache_round_trip(tmp_path):
    t1 = error_set_table(K3, cache_dir=str(tmp_path))
    files = list(tmp_path.glob("errsets-*.json"))
    assert len(files) == 1
    assert json.loads(files[0].read_text())["format"] == "tibell-error-sets/1"
    t2 = error_set_table(K3, cache_dir=str(tmp_path))
    assert t2.sets == t1.sets and t2.min_valid_N == t1.min_valid_N
    files[0].write_text("{ broken")
    t3 = error_set_table(K3, cache_dir=str(tmp_path))
    assert t3.sets == t1.sets
    assert json.loads(files[0].read_text())["format"] == "tibell-error-sets/1"


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TIBELL_CACHE_DIR", str(tmp_path))
    error_set_table(DB22)
    assert len(list(tmp_path.glob("errsets-*.json"))) == 1


def test_large_graph_exceeds_budget():
    with pytest.raises(BudgetExceeded):
        error_set_table(de_bruijn(4, 2), use_cache=False)


@pytest.mark.parametrize("g", [K3, K4, DB22], ids=["K3", "K4", "DB22"])
def test_containment_and_divisible_equality(g, request):
    star = [flat(m) for m in p_star_vertices(g)]
    h = hull(VRep(star))
    table = request.getfixturevalue("k4_table") if g == K4 else error_set_table(g, use_cache=False)
    ctx = _Ctx(g)
    L = math.lcm(*range(1, g.n + 1))
    for N in range(1, 25):
        if N >= table.min_valid_N:
            pts = [flat(m) for m in p_N_vertices(g, N, table).vertices]
        else:
            # every closed-walk point, which is stronger than checking vertices only
            pts = [flat(ctx.matrix([Fraction(x, N) for x in p]))
                   for p in _balanced_points(ctx, N, 10 ** 7) if any(p) and _weakly_irreducible(ctx, p)]
        assert all(h.contains(p) for p in pts), N
        if N % L == 0:
            assert sorted(pts) == sorted(set(star)), N


def test_k4_error_set_sizes(k4_table):
    got = sizes_by_length(k4_table)
    assert got == {(1, 0): {1}, (2, 0): {1}, (2, 1): {26}, (3, 0): {1}, (3, 1): {18}, (3, 2): {18},
                   (4, 0): {1}, (4, 1): {24}, (4, 2): {12}, (4, 3): {24}}


def test_k4_two_cycle_cluster_is_certified(k4_table):
    # each of the 26 points near N w(c) for a 2-cycle is proved a vertex of P_19
    # by min-plus traces, independent of the error-set construction
    ctx = _Ctx(K4)
    c = SimpleCycle((0, 1))
    pts, _ = k4_table.assemble(19)
    a = 9
    cluster = [tuple(a * w + x for w, x in zip(ctx.W[c], eps)) for eps in k4_table.sets[(c, 1)].points]
    assert len(set(cluster)) == 26 and set(cluster) <= set(pts)
    for q in cluster:
        xi = separating_functional(q, [x for x in pts if x != q])
        assert xi is not None and certify_p_N_vertex(K4, q, 19, xi)


def test_certificate_rejects_non_vertices():
    ctx = _Ctx(K4)
    a, b = ctx.W[SimpleCycle((0,))], ctx.W[SimpleCycle((1,))]
    mid = tuple(x + y for x, y in zip(a, b))  # two loops joined by nothing: midpoint of 2w(0), 2w(1)
    xi = tuple(1 if x else 2 for x in mid)
    assert not certify_p_N_vertex(K4, mid, 2, xi)
    assert certify_p_N_vertex(K4, tuple(2 * x for x in a), 2, tuple(0 if x else 1 for x in a))


def test_k4_counts_by_residue(k4_table):
    want = [24, 448, 226, 312, 160, 448, 90, 448, 160, 312, 226, 448]
    assert separation_N(k4_table) == 18 and k4_table.min_valid_N == 10
    for N in range(18, 30):
        assert p_N_vertices(K4, N, k4_table).count == want[N % 12]
    # below separation the clusters collide and the count drops
    assert [p_N_vertices(K4, N, k4_table).count for N in (11, 13, 17)] == [424, 424, 424]


def test_k4_projected_error_counts(k4_table):
    got = {}
    for (c, r), v in projected_error_counts(Scenario(2, 1), k4_table).items():
        got.setdefault((c.length, r), []).append(v)
    assert {k: sorted(set(v)) for k, v in got.items()} == {
        (1, 0): [1], (2, 0): [1], (2, 1): [14, 16], (3, 0): [1], (3, 1): [8], (3, 2): [8],
        (4, 0): [1], (4, 1): [24], (4, 2): [12], (4, 3): [24]}
    assert len(got[(4, 0)]) == 2


@pytest.mark.parametrize("N", [18, 21])
def test_k4_projected_counts_two_routes(k4_table, N):
    sc = Scenario(2, 1)
    direct = len(projected_p_N(sc, N, k4_table).projected_vertices)
    counts = projected_error_counts(sc, k4_table)
    summed = sum(v for (c, r), v in counts.items() if r == N % c.length)
    assert direct == summed == {18: 42, 21: 152}[N]
