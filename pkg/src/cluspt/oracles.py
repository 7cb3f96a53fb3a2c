"""Exhaustive ground truth for tiny instances.

``enumerate_roots`` scans every root vector (the decoder's whole search
space).  ``enumerate_trees`` scans every clustered spanning tree, so the gap
between the two measures what restricting the search to root vectors costs.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Iterator, Sequence

from .decoder import Decoder, SolutionTree
from .errors import InfeasibleError, InstanceError, OracleRefusal
from .graph import INF, ClusteredInstance

ROOTS_CAP = 10**6
TREES_CAP = 9


@dataclass(frozen=True)
class OracleResult:
    best_cost: float
    best_witness: Any
    search_space_size: int
    exhausted: bool
    feasible_count: int = 0


def enumerate_roots(inst: ClusteredInstance, cap: int = ROOTS_CAP) -> OracleResult:
    size = math.prod(len(c) for c in inst.clusters)
    if size > cap:
        raise OracleRefusal(f"root space has {size} chromosomes, cap is {cap}")
    dec = Decoder(inst)
    best_cost = math.inf
    best = None
    feasible = 0
    # product() walks sorted clusters lexicographically; strict < keeps the
    # lexicographically smallest optimum
    for chrom in itertools.product(*inst.clusters):
        if not dec.is_valid(chrom):
            continue
        feasible += 1
        c = dec.cost(chrom)
        if c < best_cost:
            best_cost, best = c, chrom
    if best is None:
        raise InfeasibleError(f"no valid chromosome exists for {inst.name!r}")
    return OracleResult(best_cost, best, size, True, feasible)


def prufer_decode(seq: Sequence[int], labels: Sequence[int]) -> list:
    """Tree edges encoded by a Prüfer sequence over positions of ``labels``."""
    m = len(labels)
    if m == 1:
        return []
    degree = [1] * m
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = degree.index(1)
        edges.append((labels[leaf], labels[x]))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(m) if degree[i] == 1]
    edges.append((labels[u], labels[v]))
    return edges


def all_trees(labels: Sequence[int]) -> Iterator[list]:
    """Every labelled tree on ``labels`` (Cayley: m^(m-2) of them)."""
    m = len(labels)
    if m <= 2:
        yield [] if m == 1 else [(labels[0], labels[1])]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        yield prufer_decode(seq, labels)


def _tree_cost(w, source, n, edges):
    adj = defaultdict(list)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = {source: 0.0}
    stack = [source]
    total = 0.0
    while stack:
        u = stack.pop()
        du = dist[u]
        total += du
        row = w[u]
        for v in adj[u]:
            if v not in dist:
                dist[v] = du + row[v]
                stack.append(v)
    return total if len(dist) == n else math.inf


def _present(w, edges):
    return all(w[u][v] != INF for u, v in edges)


def enumerate_trees(inst: ClusteredInstance, cap: int = TREES_CAP,
                    method: str = "structured") -> OracleResult:
    """Minimum-cost clustered spanning tree by exhaustive search.

    ``method="prufer"`` decodes all ``n^(n-2)`` Prüfer sequences on the full
    vertex set and keeps the clustered ones.  ``method="structured"`` builds
    the same set directly as (one spanning tree per cluster) x (a tree over
    clusters) x (endpoint choice per inter-cluster edge), which avoids
    generating the non-clustered majority.
    """
    if inst.n > cap:
        raise OracleRefusal(f"instance has {inst.n} vertices, tree enumeration cap is {cap}")
    source = inst.require_source()
    if method == "prufer":
        candidates = _prufer_candidates(inst)
        space = inst.n ** (inst.n - 2) if inst.n > 2 else 1
    elif method == "structured":
        candidates = _structured_candidates(inst)
        space = None
    else:
        raise InstanceError(f"unknown enumeration method {method!r}")
    w = inst._w
    best_cost = math.inf
    best = None
    count = 0
    for edges in candidates:
        count += 1
        c = _tree_cost(w, source, inst.n, edges)
        if c < best_cost or (c == best_cost and best is not None
                             and sorted(map(_norm, edges)) < sorted(map(_norm, best))):
            best_cost, best = c, edges
    if best is None:
        raise InfeasibleError(f"{inst.name!r} has no clustered spanning tree")
    witness = SolutionTree.from_edges(inst, best)
    return OracleResult(best_cost, witness, space if space is not None else count, True, count)


def _norm(e):
    u, v = e
    return (u, v) if u < v else (v, u)


def _prufer_candidates(inst):
    w = inst._w
    owner = inst._cluster_of
    sizes = [len(c) for c in inst.clusters]
    for edges in all_trees(list(inst.vertices)):
        if not _present(w, edges):
            continue
        inside = [0] * inst.k
        for u, v in edges:
            if owner[u] == owner[v]:
                inside[owner[u]] += 1
        # a cluster's edges in a tree are a forest; m - 1 of them span it
        if all(inside[i] == sizes[i] - 1 for i in range(inst.k)):
            yield edges


def _structured_candidates(inst):
    w = inst._w
    local = []
    for members in inst.clusters:
        trees = [t for t in all_trees(list(members)) if _present(w, t)]
        if not trees:
            return
        local.append(trees)
    k = inst.k
    for shape in all_trees(list(range(k))):
        choices = []
        for a, b in shape:
            pairs = [(u, v) for u in inst.clusters[a] for v in inst.clusters[b] if w[u][v] != INF]
            if not pairs:
                break
            choices.append(pairs)
        else:
            for inter in itertools.product(*choices):
                for parts in itertools.product(*local):
                    edges = list(inter)
                    for t in parts:
                        edges.extend(t)
                    yield edges
