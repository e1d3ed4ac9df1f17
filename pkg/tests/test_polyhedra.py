import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from tibell import linalg
from tibell.errors import BudgetExceeded, DegenerateInput, InputError, NotPointed
from tibell.polyhedra import (
    Cone,
    HRep,
    VRep,
    affine_rank,
    extreme_points,
    hull,
    is_vertex,
    rays_from_hrep,
    separating_functional,
    simplex_faces,
    triangulate_cone,
)


def point_sets(dmin=2, dmax=4):
    return st.integers(dmin, dmax).flatmap(lambda d: st.lists(
        st.tuples(*[st.integers(-5, 5)] * d), min_size=d + 2, max_size=14, unique=True))


def scipy_planes(pts):
    h = ConvexHull(np.array(pts, dtype=float))
    planes = set()
    for eq in h.equations:
        eq = eq / np.linalg.norm(eq[:-1])
        planes.add(tuple(np.round(eq, 6)))
    return h, planes


def full_dim(pts):
    return affine_rank(pts) == len(pts[0])


@given(point_sets())
@settings(max_examples=60, deadline=None)
def test_hull_matches_scipy(pts):
    if not full_dim(pts):
        return
    h = hull(VRep(pts))
    sh, planes = scipy_planes(pts)
    assert not h.equations
    assert len(h.inequalities) == len(planes)
    for a, b in h.inequalities:
        assert all(linalg.dot(a, p) >= b for p in pts)
        tight = [p for p in pts if linalg.dot(a, p) == b]
        assert affine_rank(tight) == len(pts[0]) - 1
        n = np.array([float(x) for x in a])
        # scipy writes n.x + c <= 0 with outward n; ours is inward
        key = tuple(np.round(np.append(-n, float(b)) / np.linalg.norm(n), 6))
        assert key in planes
    ours = sorted(extreme_points(VRep(pts)))
    theirs = sorted(tuple(Fraction(int(x)) for x in pts[k]) for k in sh.vertices)
    assert ours == theirs


def test_hull_of_lower_dimensional_set_reports_equations():
    pts = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    h = hull(VRep(pts))
    assert h.equations == (((0, 0, 1), 1),)
    assert len(h.inequalities) == 4
    with pytest.raises(DegenerateInput):
        hull(VRep([(1, 2), (1, 2)]))
    with pytest.raises(InputError):
        VRep([(1, 2), (1, 2, 3)])


def test_hull_with_rays():
    h = hull(VRep([(0, 0)], rays=[(1, 0), (0, 1)]))
    assert sorted(h.inequalities) == [((0, 1), 0), ((1, 0), 0)]


def cross_section_rays(rng, k, d=3):
    return [tuple(rng.randint(-6, 6) for _ in range(d - 1)) + (rng.randint(1, 4),) for _ in range(k)]


def sections(rays):
    return np.array([[x / r[-1] for x in r[:-1]] for r in rays], dtype=float)


@pytest.mark.parametrize("seed", range(12))
def test_rays_from_hrep_recovers_generators(seed):
    rng = random.Random(seed)
    d = 3 + seed % 2
    gens = cross_section_rays(rng, 9, d)
    if affine_rank([tuple(s) for s in sections(gens).tolist()]) < d - 1:
        return
    h = hull(VRep([(0,) * d], rays=gens))
    cone = rays_from_hrep(h)
    sh = ConvexHull(sections(gens))
    want = {tuple(round(x, 9) for x in sections([gens[k]])[0]) for k in sh.vertices}
    got = {tuple(round(x, 9) for x in row) for row in sections(cone.rays)}
    assert got == want


def test_rays_from_hrep_errors():
    with pytest.raises(NotPointed):
        rays_from_hrep(HRep((((1, 0), Fraction(0)),)))
    with pytest.raises(InputError):
        rays_from_hrep(HRep((((1, 0), Fraction(1)),)))
    orthant = HRep(tuple((tuple(int(i == j) for j in range(6)), Fraction(0)) for i in range(6)))
    assert len(rays_from_hrep(orthant).rays) == 6


def test_rays_budget_keeps_partial_result():
    # cone over a 2-D polygon with many sides: the budget triggers mid-run
    n = 12
    gens = [(round(100 * np.cos(2 * np.pi * k / n)), round(100 * np.sin(2 * np.pi * k / n)), 100)
            for k in range(n)]
    h = hull(VRep([(0, 0, 0)], rays=gens))
    with pytest.raises(BudgetExceeded) as info:
        rays_from_hrep(h, max_rays=4)
    assert isinstance(info.value.partial, list)


@given(point_sets(2, 3))
@settings(max_examples=40, deadline=None)
def test_is_vertex_and_certificate(pts):
    pts = sorted(set(pts))
    for k, p in enumerate(pts):
        others = pts[:k] + pts[k + 1:]
        v = is_vertex(p, others)
        xi = separating_functional(p, others)
        if xi is not None:
            assert v
            assert all(sum(a * (b - c) for a, b, c in zip(xi, q, p)) > 0 for q in others)
        if full_dim(pts):
            sh = ConvexHull(np.array(pts, dtype=float))
            assert v == (k in set(sh.vertices))


@pytest.mark.parametrize("seed", range(10))
def test_placing_triangulation_covers_cone(seed):
    rng = random.Random(100 + seed)
    rays = cross_section_rays(rng, 8)
    sec = sections(rays)
    if affine_rank([tuple(s) for s in sec.tolist()]) < 2:
        return
    area = ConvexHull(sec).volume
    order = list(range(len(rays)))
    for _ in range(3):
        simplices = triangulate_cone(Cone((0, 0, 0), tuple(map(tuple, rays))), order)
        total = 0.0
        for s in simplices:
            assert len(s) == 3
            tri = sec[list(s)]
            total += abs(np.linalg.det(np.c_[tri, np.ones(3)])) / 2
        assert total == pytest.approx(area)
        rng.shuffle(order)


def test_simplex_faces():
    faces = simplex_faces([(0, 1, 2), (1, 2, 3)], max_size=2)
    assert faces[:4] == [(0,), (1,), (2,), (3,)]
    assert (1, 2) in faces and (0, 3) not in faces and all(len(f) <= 2 for f in faces)
