"""Hyperbolic lattices: root enumeration, reflections, pairing graphs."""

import random
from itertools import product

import pytest

from matgrouplab.groups import CapExceeded
from matgrouplab.lattices import (
    QuadLattice,
    cartan_involution,
    cartan_roots,
    component_fingerprint,
    min_distance_graph,
)
from matgrouplab.matrices import IntMatrix

EVEN_LORENTZ3 = QuadLattice.of([[2, 0, 0], [0, 2, 0], [0, 0, -2]])
LORENTZ4 = QuadLattice.of([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])


def test_lattice_validation():
    with pytest.raises(ValueError):
        QuadLattice.of([[1, 0], [0, 1]])  # definite
    with pytest.raises(ValueError):
        QuadLattice.of([[0, 1], [2, 0]])  # not symmetric
    with pytest.raises(ValueError):
        QuadLattice.of([[1, 0, 0], [0, 1]])  # not square
    lat = QuadLattice.of([[1, 0], [0, -1]])
    assert lat.n == 2
    assert lat.bilinear([1, 2], [3, 4]) == 3 - 8
    assert lat.quad([2, 1]) == 3


def brute_force_roots(lat: QuadLattice, height: int) -> list[tuple[int, ...]]:
    # Full box scan, independent of the solve-last-coordinate trick.
    out = []
    for v in product(range(-height, height + 1), repeat=lat.n):
        if any(v) and lat.quad(v) == -2:
            out.append(v)
    return sorted(out)


def test_roots_match_brute_force():
    rng = random.Random(3)
    lattices = [EVEN_LORENTZ3, LORENTZ4, QuadLattice.of([[1, 0], [0, -1]])]
    # a few random signature (n-1, 1) Grams via diag +- small off-diagonal
    for _ in range(10):
        n = rng.randint(2, 3)
        while True:
            g = [[0] * n for _ in range(n)]
            for i in range(n):
                g[i][i] = rng.choice([1, 2, 3]) if i < n - 1 else -rng.choice([1, 2])
            if n >= 2:
                g[0][n - 1] = g[n - 1][0] = rng.randint(-1, 1)
            try:
                lattices.append(QuadLattice.of(g))
                break
            except ValueError:
                continue
    for lat in lattices:
        for h in (1, 2, 3):
            assert cartan_roots(lat, h) == brute_force_roots(lat, h)


def test_roots_even_lorentz_counts():
    # diag(2,2,-2): exactly the two (0,0,+-1) roots at height 2, and the
    # (+-2,+-2,+-3) orbit joins at height 3 for 10 in total.
    roots2 = cartan_roots(EVEN_LORENTZ3, 2)
    assert roots2 == [(0, 0, -1), (0, 0, 1)]
    roots3 = cartan_roots(EVEN_LORENTZ3, 3)
    assert len(roots3) == 10
    assert (2, 2, 3) in roots3 and (-2, 2, -3) in roots3


def test_roots_lorentz4_count():
    # diag(1,1,1,-1) at height 2: permutations of (+-1,+-1,0) with last
    # coordinate +-2 solved from 1 + 1 - 4 = -2; 3 position pairs x 4 signs
    # x 2 last-signs = 24.
    roots = cartan_roots(LORENTZ4, 2)
    assert len(roots) == 24
    for v in roots:
        assert LORENTZ4.quad(v) == -2
        assert sorted(map(abs, v[:3])) == [0, 1, 1] and abs(v[3]) == 2


def test_roots_cap():
    with pytest.raises(CapExceeded):
        cartan_roots(LORENTZ4, 30, cap=100)


def test_involution_properties():
    rng = random.Random(9)
    for lat in (EVEN_LORENTZ3, LORENTZ4):
        roots = cartan_roots(lat, 3)
        for v in rng.sample(roots, min(6, len(roots))):
            r = cartan_involution(lat, v)
            assert (r * r).is_identity
            assert r.det() in (1, -1)
            # r fixes the Gram form: r^T G r = G entrywise.
            g = lat.gram
            n = lat.n
            rt = r.transpose()
            lhs = rt * IntMatrix(g) * r
            assert lhs == IntMatrix(g)
            # r sends v to -v
            image = [sum(r.rows[i][k] * v[k] for k in range(n)) for i in range(n)]
            assert image == [-x for x in v]


def test_involution_rejects_non_root():
    with pytest.raises(ValueError):
        cartan_involution(LORENTZ4, (1, 0, 0, 0))  # quad = 1, not -2


def test_min_distance_graph_edges_are_exact():
    graph = min_distance_graph(LORENTZ4, 2)
    assert len(graph.vertices) == 24
    # recompute every pairing from the Gram matrix directly
    expected = []
    for i in range(24):
        for j in range(i + 1, 24):
            if LORENTZ4.bilinear(graph.vertices[i], graph.vertices[j]) == -3:
                expected.append((i, j))
    assert list(graph.edges) == expected
    assert len(graph.edges) == 48


def test_min_distance_graph_components():
    graph = min_distance_graph(LORENTZ4, 2)
    assert len(graph.components) == 2
    assert all(len(c) == 12 for c in graph.components)
    # components partition the vertices
    all_vs = sorted(v for comp in graph.components for v in comp)
    assert all_vs == list(range(24))


def test_min_distance_graph_edgeless_case():
    # diag(2,2,-2) has even pairings only, so no -3 edges exist.
    graph = min_distance_graph(EVEN_LORENTZ3, 3)
    assert len(graph.vertices) == 10
    assert graph.edges == ()
    assert len(graph.components) == 10


def test_component_fingerprint():
    graph = min_distance_graph(LORENTZ4, 2)
    fp0 = component_fingerprint(graph, 0)
    fp1 = component_fingerprint(graph, 1)
    assert fp0.size == fp1.size == 12
    assert fp0.degree_sequence == (4,) * 12
    assert fp0.diameter == 3
    assert fp0.to_dict() == fp1.to_dict()
    total_pairs = sum(c for _, c in fp0.pair_values)
    assert total_pairs == 12 * 11 // 2
    # singleton component fingerprint
    g2 = min_distance_graph(EVEN_LORENTZ3, 2)
    fp = component_fingerprint(g2, 0)
    assert fp.size == 1 and fp.diameter == 0 and fp.degree_sequence == (0,)


def test_vertex_cap():
    with pytest.raises(CapExceeded):
        min_distance_graph(LORENTZ4, 2, vertex_cap=10)


def test_reflection_group_preserves_form():
    # Generators from one component: every ball element fixes the form.
    from matgrouplab.groups import GenSet, ball_enumerate

    graph = min_distance_graph(LORENTZ4, 2)
    comp = graph.components[0]
    gens = [cartan_involution(LORENTZ4, graph.vertices[i]) for i in comp[:4]]
    S = GenSet.from_matrices(gens)
    ball = ball_enumerate(S, 3)
    gmat = IntMatrix(LORENTZ4.gram)
    for m in ball.elements:
        assert m.transpose() * gmat * m == gmat
