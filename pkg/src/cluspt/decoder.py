"""Root-vector chromosomes and their decoding into clustered spanning trees.

A chromosome is a tuple of ``k`` vertex ids; entry ``i`` is the root of
cluster ``i`` (0-based position, 1-based vertex id).  Decoding builds

* a shortest-path tree over the subgraph induced by the roots, started at
  the root of the source's cluster, supplying the ``k - 1`` inter-cluster
  edges, and
* one shortest-path tree per cluster, started at that cluster's root, except
  the source's own cluster which is started at the source.

The cost of the result is the sum of tree distances from the source to every
vertex.  :func:`evaluate_direct` walks the assembled tree; :func:`evaluate_fast`
recombines the per-cluster pieces without touching the full tree.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ContractError, DecodeError, InstanceError, ParseError
from .graph import (
    INF,
    ClusteredInstance,
    ShortestPathTree,
    _connected,
    _dijkstra,
)

Chromosome = tuple  # tuple[int, ...], one root per cluster

Edge = tuple  # (u, v, w) with u < v


def check_membership(inst: ClusteredInstance, chrom: Sequence[int]) -> None:
    if len(chrom) != inst.k:
        raise InstanceError(f"chromosome has {len(chrom)} genes, instance has {inst.k} clusters")
    owner = inst._cluster_of
    for i, r in enumerate(chrom):
        if not isinstance(r, int) or not 1 <= r <= inst.n or owner[r] != i:
            raise InstanceError(f"gene {i + 1} = {r!r} is not a vertex of cluster {i + 1}")


def is_valid(inst: ClusteredInstance, chrom: Sequence[int]) -> bool:
    """True iff the roots induce a connected subgraph."""
    check_membership(inst, chrom)
    return _connected(inst._w, sorted(chrom))


def _edge(u, v, w):
    return (u, v, w) if u < v else (v, u, w)


@dataclass(frozen=True)
class SolutionTree:
    """A clustered spanning tree.

    ``local_trees[i]`` holds the edges inside cluster ``i``; ``inter_edges``
    holds the cut set joining clusters.  Edges are ``(u, v, w)`` with
    ``u < v``, sorted.
    """

    n: int
    source: int
    edges: tuple
    local_trees: tuple
    inter_edges: tuple

    @classmethod
    def from_edges(cls, inst: ClusteredInstance, edges: Iterable) -> "SolutionTree":
        """Classify an edge list into local trees and inter-cluster edges.

        Pairs ``(u, v)`` take their weight from the instance.
        """
        owner = inst._cluster_of
        norm = []
        for e in edges:
            u, v = e[0], e[1]
            w = e[2] if len(e) > 2 else inst.weight(u, v)
            norm.append(_edge(u, v, w))
        norm.sort()
        local = [[] for _ in range(inst.k)]
        inter = []
        for e in norm:
            cu, cv = owner[e[0]], owner[e[1]]
            if cu == cv:
                local[cu].append(e)
            else:
                inter.append(e)
        return cls(inst.n, inst.require_source(), tuple(norm),
                   tuple(tuple(t) for t in local), tuple(inter))

    def edge_pairs(self) -> set:
        return {(u, v) for u, v, _ in self.edges}

    @cached_property
    def root_dist(self) -> dict:
        """Tree distance from the source to every vertex it reaches."""
        adj = defaultdict(list)
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        dist = {self.source: 0.0}
        stack = [self.source]
        while stack:
            u = stack.pop()
            du = dist[u]
            for v, w in adj[u]:
                if v not in dist:
                    dist[v] = du + w
                    stack.append(v)
        return dist


def check_clustered_tree(inst: ClusteredInstance, tree: SolutionTree) -> None:
    """Raise :class:`ContractError` unless ``tree`` is a clustered spanning tree.

    Works from the edge list alone: ``n - 1`` edges of the graph forming a
    connected acyclic subgraph in which every cluster induces a spanning
    tree of itself and exactly ``k - 1`` edges cross clusters.
    """
    n = inst.n
    edges = tree.edges
    if len(edges) != n - 1:
        raise ContractError(f"tree has {len(edges)} edges, expected {n - 1}")
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, w in edges:
        if not (1 <= u <= n and 1 <= v <= n) or u == v:
            raise ContractError(f"edge ({u},{v}) is not an edge of the instance")
        if inst._w[u][v] == INF:
            raise ContractError(f"edge ({u},{v}) is absent from the graph")
        if w != inst._w[u][v]:
            raise ContractError(f"edge ({u},{v}) carries weight {w}, graph says {inst._w[u][v]}")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ContractError(f"edge ({u},{v}) closes a cycle")
        parent[ru] = rv
    owner = inst._cluster_of
    crossing = 0
    per_cluster = [0] * inst.k
    for u, v, _ in edges:
        if owner[u] == owner[v]:
            per_cluster[owner[u]] += 1
        else:
            crossing += 1
    for i, members in enumerate(inst.clusters):
        # an acyclic edge set on m vertices with m - 1 edges is a spanning tree
        if per_cluster[i] != len(members) - 1:
            raise ContractError(f"cluster {i + 1} does not induce a connected local tree")
    if crossing != inst.k - 1:
        raise ContractError(f"{crossing} inter-cluster edges, expected {inst.k - 1}")
    for i, local in enumerate(tree.local_trees):
        for u, v, _ in local:
            if owner[u] != i or owner[v] != i:
                raise ContractError(f"local tree {i + 1} holds foreign edge ({u},{v})")
    if len(tree.inter_edges) != inst.k - 1 or any(owner[u] == owner[v] for u, v, _ in tree.inter_edges):
        raise ContractError("inter_edges does not match the crossing edges")


@dataclass(frozen=True)
class CostBreakdown:
    """Per-cluster pieces of the decomposed cost.

    ``per_cluster[i]`` is ``(anchor_dist, intra_sum)``: the tree distance from
    the source to the vertex the cluster's local tree hangs from, and the sum
    of local-tree distances from that vertex to every cluster member.  The
    anchor is the root for every cluster except the source's, whose anchor is
    the source itself (``anchor_dist == 0``).
    """

    total: float
    per_cluster: tuple


@dataclass(frozen=True)
class Decoding:
    """Decoder output plus the intermediates the fast evaluator needs."""

    chromosome: tuple
    source_cluster: int
    inter_tree: ShortestPathTree
    cluster_trees: tuple
    tree: SolutionTree


class Decoder:
    """Decoder bound to one instance.

    Cluster shortest-path trees depend only on ``(cluster, start vertex)``
    and are memoised, as are validity and cost per chromosome.
    """

    def __init__(self, inst: ClusteredInstance):
        self.inst = inst
        self.source = inst.require_source()
        self.m = inst._cluster_of[self.source]
        self._spt = {}
        self._intra = {}
        self._valid = {}
        self._cost = {}

    def cluster_tree(self, i: int, start: int) -> ShortestPathTree:
        key = (i, start)
        spt = self._spt.get(key)
        if spt is None:
            members = self.inst.clusters[i]
            parent, dist = _dijkstra(self.inst._w, members, start)
            if len(members) > 1 and any(d == INF for d in dist.values()):
                raise DecodeError(f"cluster {i + 1} induces a disconnected subgraph")
            spt = ShortestPathTree(start, parent, dist)
            self._spt[key] = spt
            self._intra[key] = sum(dist[u] for u in members)
        return spt

    def intra_sum(self, i: int, start: int) -> float:
        key = (i, start)
        if key not in self._intra:
            self.cluster_tree(i, start)
        return self._intra[key]

    def is_valid(self, chrom: tuple) -> bool:
        ok = self._valid.get(chrom)
        if ok is None:
            ok = is_valid(self.inst, chrom)
            self._valid[chrom] = ok
        return ok

    def _require_valid(self, chrom):
        if not self.is_valid(chrom):
            raise ContractError(f"chromosome {chrom} is invalid: its roots induce a disconnected subgraph")

    def _inter_tree(self, chrom):
        root = chrom[self.m]
        parent, dist = _dijkstra(self.inst._w, sorted(chrom), root)
        return ShortestPathTree(root, parent, dist)

    def decode(self, chrom) -> Decoding:
        chrom = tuple(chrom)
        self._require_valid(chrom)
        inst = self.inst
        inter = self._inter_tree(chrom)
        w = inst._w
        trees = []
        edges = []
        local = []
        for i in range(inst.k):
            start = self.source if i == self.m else chrom[i]
            spt = self.cluster_tree(i, start)
            trees.append(spt)
            le = sorted(_edge(p, v, w[p][v]) for p, v in spt.edges())
            local.append(tuple(le))
            edges.extend(le)
        inter_edges = sorted(_edge(p, v, w[p][v]) for p, v in inter.edges())
        edges.extend(inter_edges)
        edges.sort()
        tree = SolutionTree(inst.n, self.source, tuple(edges), tuple(local), tuple(inter_edges))
        return Decoding(chrom, self.m, inter, tuple(trees), tree)

    def cost(self, chrom) -> float:
        """Fast-path cost of a valid chromosome, memoised."""
        chrom = tuple(chrom)
        c = self._cost.get(chrom)
        if c is None:
            self._require_valid(chrom)
            inter = self._inter_tree(chrom)
            c = _recombine(self, chrom, inter.dist).total
            self._cost[chrom] = c
        return c


def _recombine(dec: Decoder, chrom, inter_dist) -> CostBreakdown:
    inst = dec.inst
    m = dec.m
    root_m = chrom[m]
    s_to_rm = dec.cluster_tree(m, dec.source).dist[root_m]
    parts = []
    total = 0.0
    for i, members in enumerate(inst.clusters):
        if i == m:
            anchor = 0.0
            intra = dec.intra_sum(m, dec.source)
        else:
            anchor = s_to_rm + inter_dist[chrom[i]]
            intra = dec.intra_sum(i, chrom[i])
        parts.append((anchor, intra))
        total += len(members) * anchor + intra
    return CostBreakdown(total, tuple(parts))


def decode(inst: ClusteredInstance, chrom: Sequence[int]) -> Decoding:
    return Decoder(inst).decode(chrom)


def evaluate_direct(inst: ClusteredInstance, tree: SolutionTree) -> float:
    """Sum of source-to-vertex distances, by walking the tree from the source."""
    if len(tree.edges) != inst.n - 1 or tree.source != inst.source:
        raise ContractError("tree does not span the instance from its source")
    dist = tree.root_dist
    if len(dist) != inst.n:
        raise ContractError("tree is not connected")
    return sum(dist.values())


def evaluate_fast(inst: ClusteredInstance, decoding: Decoding, decoder: Decoder = None) -> CostBreakdown:
    """Decomposed cost of a decoded chromosome.

    Every vertex outside the source's cluster is reached through its own
    cluster root, so its distance splits into source-to-root plus
    root-to-vertex inside the local tree.
    """
    dec = decoder if decoder is not None else Decoder(inst)
    for i, spt in enumerate(decoding.cluster_trees):
        key = (i, spt.root)
        if key not in dec._spt:
            dec._spt[key] = spt
            dec._intra[key] = sum(spt.dist[u] for u in inst.clusters[i])
    return _recombine(dec, decoding.chromosome, decoding.inter_tree.dist)


# --- solution file -------------------------------------------------------

def format_solution(tree: SolutionTree, cost: float) -> str:
    """``COST c``, one ``EDGE u v w`` line per edge, then ``SOURCE s``."""
    lines = [f"COST {_fmt(cost)}"]
    lines += [f"EDGE {u} {v} {_fmt(w)}" for u, v, w in tree.edges]
    lines.append(f"SOURCE {tree.source}")
    return "\n".join(lines) + "\n"


def _fmt(x):
    return format(x, ".17g")


def parse_solution(text: str):
    """Return ``(cost, edges, source)`` from solution-file text."""
    cost = None
    source = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        tag = tokens[0]
        try:
            if tag == "COST" and len(tokens) == 2:
                cost = float(tokens[1])
            elif tag == "EDGE" and len(tokens) == 4:
                edges.append((int(tokens[1]), int(tokens[2]), float(tokens[3])))
            elif tag == "SOURCE" and len(tokens) == 2:
                source = int(tokens[1])
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"malformed solution line {raw.strip()!r}", lineno) from None
    if cost is None or source is None:
        raise ParseError("solution needs COST and SOURCE lines")
    return cost, edges, source


def verify_solution(inst: ClusteredInstance, text: str, rel_tol: float = 1e-9) -> float:
    """Check a solution file against an instance; return the recomputed cost.

    Raises :class:`ContractError` when the edges do not form a clustered
    spanning tree or the declared cost disagrees with the tree.
    """
    cost, edges, source = parse_solution(text)
    if source != inst.source:
        raise ContractError(f"solution source {source} differs from instance source {inst.source}")
    for u, v, w in edges:
        if not (1 <= u <= inst.n and 1 <= v <= inst.n):
            raise ContractError(f"edge ({u},{v}) names a vertex outside 1..{inst.n}")
    tree = SolutionTree.from_edges(inst, [(u, v) for u, v, _ in edges])
    for (u, v, w), e in zip(sorted(_edge(*x) for x in edges), tree.edges):
        if not math.isclose(w, e[2], rel_tol=rel_tol, abs_tol=1e-12):
            raise ContractError(f"edge ({u},{v}) declares weight {w}, graph says {e[2]}")
    check_clustered_tree(inst, tree)
    actual = evaluate_direct(inst, tree)
    if not math.isclose(cost, actual, rel_tol=rel_tol, abs_tol=1e-12):
        raise ContractError(f"declared cost {cost} but the tree costs {actual}")
    return actual
