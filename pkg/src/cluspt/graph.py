"""Clustered graph model, induced views and Dijkstra shortest-path trees.

Vertex ids are 1-based everywhere in the public API.  Weights are held in a
dense matrix padded with an unused row/column 0 so that ``w[u][v]`` indexes
directly by vertex id.  Absent edges carry ``math.inf``.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import ContractError, InstanceError

INF = math.inf


@dataclass(frozen=True, eq=False)
class ClusteredInstance:
    """Weighted undirected graph with a vertex partition and a source vertex.

    Exactly one of ``coords`` (Euclidean plane, complete graph) or ``matrix``
    (explicit symmetric weights, ``inf`` marks an absent edge) is given.
    ``source`` may be ``None`` only for instances read in headless mode;
    every solver entry point requires it.
    """

    name: str
    n: int
    clusters: tuple[tuple[int, ...], ...]
    source: Optional[int]
    coords: Optional[tuple[tuple[float, float], ...]] = None
    matrix: Optional[tuple[tuple[float, ...], ...]] = None
    _w: list = field(init=False, repr=False, compare=False)
    _cluster_of: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise InstanceError(f"vertex count must be a positive integer, got {n!r}")
        clusters = tuple(tuple(sorted(int(v) for v in c)) for c in self.clusters)
        object.__setattr__(self, "clusters", clusters)
        if not clusters:
            raise InstanceError("instance needs at least one cluster")
        owner = [-1] * (n + 1)
        for i, members in enumerate(clusters):
            if not members:
                raise InstanceError(f"cluster {i + 1} is empty")
            for v in members:
                if not 1 <= v <= n:
                    raise InstanceError(f"cluster {i + 1} names vertex {v} outside 1..{n}")
                if owner[v] != -1:
                    raise InstanceError(
                        f"vertex {v} appears in clusters {owner[v] + 1} and {i + 1}")
                owner[v] = i
        missing = [v for v in range(1, n + 1) if owner[v] == -1]
        if missing:
            raise InstanceError(f"vertex {missing[0]} is not assigned to any cluster")
        if self.source is not None and not 1 <= self.source <= n:
            raise InstanceError(f"source vertex {self.source} outside 1..{n}")

        if (self.coords is None) == (self.matrix is None):
            raise InstanceError("exactly one of coords or matrix must be given")
        w = [[0.0] * (n + 1) for _ in range(n + 1)]
        if self.coords is not None:
            coords = tuple((float(x), float(y)) for x, y in self.coords)
            if len(coords) != n:
                raise InstanceError(f"expected {n} coordinates, got {len(coords)}")
            object.__setattr__(self, "coords", coords)
            for u in range(1, n + 1):
                xu, yu = coords[u - 1]
                row = w[u]
                for v in range(u + 1, n + 1):
                    xv, yv = coords[v - 1]
                    d = math.hypot(xu - xv, yu - yv)
                    row[v] = d
                    w[v][u] = d
        else:
            matrix = tuple(tuple(float(x) for x in row) for row in self.matrix)
            if len(matrix) != n or any(len(row) != n for row in matrix):
                raise InstanceError(f"weight matrix must be {n}x{n}")
            for u in range(n):
                if matrix[u][u] != 0.0:
                    raise InstanceError(f"diagonal entry for vertex {u + 1} must be 0")
                for v in range(n):
                    x = matrix[u][v]
                    if math.isnan(x) or x < 0:
                        raise InstanceError(
                            f"weight w({u + 1},{v + 1}) = {x} is not a nonnegative real")
                    if x != matrix[v][u]:
                        raise InstanceError(
                            f"weight matrix not symmetric at ({u + 1},{v + 1})")
                    w[u + 1][v + 1] = x
            object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "_w", w)
        object.__setattr__(self, "_cluster_of", owner)

    def _key(self):
        return (self.name, self.n, self.clusters, self.source, self.coords, self.matrix)

    def __eq__(self, other):
        if not isinstance(other, ClusteredInstance):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.name, self.n, self.clusters, self.source))

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def is_euclidean(self) -> bool:
        return self.coords is not None

    def cluster_of(self, v: int) -> int:
        """0-based index of the cluster holding vertex ``v``."""
        self._check_vertex(v)
        return self._cluster_of[v]

    def weight(self, u: int, v: int) -> float:
        return edge_weight(self, u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and self._w[u][v] != INF

    def _check_vertex(self, v):
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise InstanceError(f"vertex {v!r} outside 1..{self.n}")

    def require_source(self) -> int:
        if self.source is None:
            raise ContractError(f"instance {self.name!r} has no source vertex")
        return self.source


def edge_weight(inst: ClusteredInstance, u: int, v: int) -> float:
    """Weight of edge ``(u, v)``; ``inf`` if an explicit matrix marks it absent."""
    inst._check_vertex(u)
    inst._check_vertex(v)
    if u == v:
        raise InstanceError(f"self-loop ({u},{v}) requested; graphs are simple")
    return inst._w[u][v]


@dataclass(frozen=True)
class VertexSetView:
    """The subgraph of ``parent`` induced by ``members``."""

    parent: ClusteredInstance
    members: frozenset

    def edges(self) -> list[tuple[int, int, float]]:
        """Present edges ``(u, v, w)`` with ``u < v``, in vertex order."""
        w = self.parent._w
        ordered = sorted(self.members)
        out = []
        for i, u in enumerate(ordered):
            row = w[u]
            for v in ordered[i + 1:]:
                if row[v] != INF:
                    out.append((u, v, row[v]))
        return out

    def __len__(self):
        return len(self.members)


def induced(inst: ClusteredInstance, members: Iterable[int]) -> VertexSetView:
    members = frozenset(members)
    if not members:
        raise InstanceError("induced subgraph needs at least one vertex")
    for v in members:
        inst._check_vertex(v)
    return VertexSetView(inst, members)


def _connected(w, members: Sequence[int]) -> bool:
    if len(members) <= 1:
        return True
    start = members[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        row = w[u]
        for v in members:
            if v not in seen and row[v] != INF:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(members)


def is_connected(view: VertexSetView) -> bool:
    return _connected(view.parent._w, sorted(view.members))


@dataclass(frozen=True)
class ShortestPathTree:
    """Predecessor map and distances from ``root``.

    Unreachable members have ``dist == inf`` and ``parent is None``.
    """

    root: int
    parent: dict
    dist: dict

    def edges(self) -> list[tuple[int, int]]:
        """Tree edges as ``(parent, child)`` pairs, ordered by child id."""
        return [(p, v) for v, p in sorted(self.parent.items()) if p is not None]

    def reachable(self) -> list[int]:
        return [v for v, d in self.dist.items() if d != INF]

    def spans_all(self) -> bool:
        return all(d != INF for d in self.dist.values())


def _dijkstra(w, members: Sequence[int], root: int):
    # Pops ties on (dist, vertex id); equal-distance relaxations keep the
    # smaller predecessor id.
    dist = {v: INF for v in members}
    parent = {v: None for v in members}
    dist[root] = 0.0
    settled = set()
    heap = [(0.0, root)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        row = w[u]
        for v in members:
            if v in settled:
                continue
            wv = row[v]
            if wv == INF:
                continue
            nd = d + wv
            dv = dist[v]
            if nd < dv:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dv and u < parent[v]:
                parent[v] = u
    return parent, dist


def dijkstra_spt(view: VertexSetView, root: int) -> ShortestPathTree:
    if root not in view.members:
        raise InstanceError(f"root {root} is not a member of the view")
    parent, dist = _dijkstra(view.parent._w, sorted(view.members), root)
    return ShortestPathTree(root, parent, dist)
