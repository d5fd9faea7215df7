"""Hyperbolic integral lattices: roots, reflections, distance graphs.

A `QuadLattice` is an integer symmetric Gram matrix G of signature
(n-1, 1) with bilinear form B(u, v) = u^T G v.  Roots are the vectors with
self-pairing B(v, v) = -2 inside a coordinate box; every root v induces an
integral involution r_v = I + v v^T G (it negates v, fixes the
B-orthogonal complement, and preserves G).  The minimum-distance graph
joins roots with pairing B(v, w) = -3; its components are certified by
combinatorial fingerprints (degree sequence, diameter, pairwise pairing
multiset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .forms import symmetric_signature
from .groups import CapExceeded
from .matrices import IntMatrix

ROOT_NORM = -2
EDGE_PAIRING = -3


@dataclass(frozen=True)
class QuadLattice:
    """Integer symmetric Gram matrix of signature (n-1, 1)."""

    gram: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "QuadLattice":
        gram = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("Gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        sig = symmetric_signature(gram)
        if sig != (n - 1, 1, 0):
            raise ValueError(
                f"Gram matrix must have signature ({n - 1}, 1); got {sig}"
            )
        return cls(gram=gram)

    @property
    def n(self) -> int:
        return len(self.gram)

    def bilinear(self, u: Sequence[int], v: Sequence[int]) -> int:
        g = self.gram
        n = self.n
        return sum(u[i] * g[i][j] * v[j] for i in range(n) for j in range(n))

    def quad(self, v: Sequence[int]) -> int:
        return self.bilinear(v, v)


def cartan_roots(
    lattice: QuadLattice,
    height: int,
    cap: int = 10_000_000,
) -> list[tuple[int, ...]]:
    """All v with coordinates in [-height, height] and B(v, v) = -2.

    The first n-1 coordinates run over the box; the last coordinate is
    solved exactly from the quadratic (integer square root, no floats).
    Output is sorted lexicographically.
    """
    if height < 0:
        raise ValueError("height must be >= 0")
    n = lattice.n
    g = lattice.gram
    width = 2 * height + 1
    if width ** (n - 1) > max(cap, 1):
        raise CapExceeded(
            f"root enumeration box {width}^{n - 1} exceeds cap {cap}", cap
        )
    a = g[n - 1][n - 1]
    roots: list[tuple[int, ...]] = []
    for prefix in product(range(-height, height + 1), repeat=n - 1):
        prefix_form = sum(
            prefix[i] * g[i][j] * prefix[j] for i in range(n - 1) for j in range(n - 1)
        )
        b = 2 * sum(prefix[i] * g[i][n - 1] for i in range(n - 1))
        c = prefix_form - ROOT_NORM  # a x^2 + b x + c = 0
        candidates: list[int] = []
        if a == 0:
            if b == 0:
                if c == 0:
                    candidates = list(range(-height, height + 1))
            else:
                x, rem = divmod(-c, b)
                if rem == 0:
                    candidates = [x]
        else:
            disc = b * b - 4 * a * c
            if disc >= 0:
                s = math.isqrt(disc)
                if s * s == disc:
                    for num in (-b + s, -b - s):
                        x, rem = divmod(num, 2 * a)
                        if rem == 0:
                            candidates.append(x)
        for x in candidates:
            if -height <= x <= height:
                v = prefix + (x,)
                if any(v):
                    roots.append(v)
        if len(roots) > cap:
            raise CapExceeded(f"root count exceeded cap {cap}", cap)
    return sorted(set(roots))


def cartan_involution(lattice: QuadLattice, v: Sequence[int]) -> IntMatrix:
    """The reflection r_v = I + v v^T G for a root v (B(v, v) = -2).

    Integral because the usual reflection coefficient 2 B(x, v)/B(v, v)
    collapses to -B(x, v) at self-pairing -2.
    """
    if lattice.quad(v) != ROOT_NORM:
        raise ValueError(f"not a root: B(v, v) = {lattice.quad(v)} != {ROOT_NORM}")
    n = lattice.n
    g = lattice.gram
    vg = [sum(v[k] * g[k][j] for k in range(n)) for j in range(n)]
    rows = [
        [(1 if i == j else 0) + v[i] * vg[j] for j in range(n)]
        for i in range(n)
    ]
    return IntMatrix(rows)


@dataclass(frozen=True)
class MinDistGraph:
    """Roots joined when B(v, w) = -3, with connected components."""

    lattice: QuadLattice
    height: int
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]  # index pairs, i < j
    components: tuple[tuple[int, ...], ...]  # sorted tuples of vertex indices

    @property
    def component_of(self) -> dict[int, int]:
        out = {}
        for ci, comp in enumerate(self.components):
            for v in comp:
                out[v] = ci
        return out

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def min_distance_graph(
    lattice: QuadLattice,
    height: int,
    cap: int = 10_000_000,
    vertex_cap: int = 20_000,
) -> MinDistGraph:
    """Build the pairing -3 graph on the height-bounded roots.

    Edge detection is exact and quadratic in the number of roots, so a
    separate vertex cap protects the pairing pass.
    """
    roots = cartan_roots(lattice, height, cap=cap)
    if len(roots) > vertex_cap:
        raise CapExceeded(
            f"{len(roots)} roots exceed the vertex cap {vertex_cap}", vertex_cap
        )
    edges = []
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if lattice.bilinear(roots[i], roots[j]) == EDGE_PAIRING:
                edges.append((i, j))
    adj: list[list[int]] = [[] for _ in roots]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * len(roots)
    components = []
    for start in range(len(roots)):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(tuple(sorted(comp)))
    return MinDistGraph(
        lattice=lattice,
        height=height,
        vertices=tuple(roots),
        edges=tuple(edges),
        components=tuple(sorted(components)),
    )


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism-grade invariants of one component."""

    size: int
    degree_sequence: tuple[int, ...]  # descending
    diameter: int  # 0 for a single vertex
    pair_values: tuple[tuple[int, int], ...]  # (pairing value, count), sorted

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "degree_sequence": list(self.degree_sequence),
            "diameter": self.diameter,
            "pair_values": [list(t) for t in self.pair_values],
        }


def component_fingerprint(graph: MinDistGraph, component_index: int) -> Fingerprint:
    comp = graph.components[component_index]
    adj = graph.neighbors()
    members = set(comp)
    degrees = sorted((sum(1 for w in adj[v] if w in members) for v in comp), reverse=True)
    # diameter by BFS from every vertex, restricted to the component
    diameter = 0 if len(comp) == 1 else -1
    for src in comp:
        dist = {src: 0}
        queue = [src]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for w in adj[u]:
                if w in members and w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if len(dist) == len(comp):
            diameter = max(diameter, max(dist.values()))
        else:
            raise AssertionError("component must be connected")
    values: dict[int, int] = {}
    comp_list = list(comp)
    for i in range(len(comp_list)):
        for j in range(i + 1, len(comp_list)):
            val = graph.lattice.bilinear(
                graph.vertices[comp_list[i]], graph.vertices[comp_list[j]]
            )
            values[val] = values.get(val, 0) + 1
    return Fingerprint(
        size=len(comp),
        degree_sequence=tuple(degrees),
        diameter=diameter,
        pair_values=tuple(sorted(values.items())),
    )
