"""Fixture instances and independent oracles shared by the test modules."""
import math
import random
from collections import deque

from cluspt.graph import INF, ClusteredInstance


def micro4():
    """Four vertices, clusters {1,2} and {3,4}, source 1."""
    m = [
        [0, 1, 5, 10],
        [1, 0, 2, 4],
        [5, 2, 0, 1],
        [10, 4, 1, 0],
    ]
    return ClusteredInstance("micro4", 4, ((1, 2), (3, 4)), 1, matrix=m)


SPARSE18_CLUSTERS = ((1, 2, 3), (4, 5, 6), (7, 10, 11), (8, 9, 18), (15, 16, 17), (12, 13, 14))
SPARSE18_INTER = [(3, 4), (4, 11), (11, 9), (9, 15), (9, 16), (14, 16), (12, 16),
               (1, 5), (5, 7), (7, 8), (8, 16), (8, 15), (12, 15)]


def sparse18():
    """18 vertices in 6 clusters, sparse between clusters.

    Built so that roots (3, 4, 11, 9, 15, 14) are disconnected, while
    (3, 4, 11, 9, 16, 14) is valid, swapping 14 for 13 breaks it and
    swapping 14 for 12 keeps it valid.
    """
    n = 18
    m = [[INF] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 0.0
    for members in SPARSE18_CLUSTERS:
        for u in members:
            for v in members:
                if u != v:
                    m[u - 1][v - 1] = 1.0 + 0.1 * abs(u - v)
    for u, v in SPARSE18_INTER:
        m[u - 1][v - 1] = m[v - 1][u - 1] = 5.0 + 0.5 * ((u * v) % 3)
    return ClusteredInstance("sparse18", n, SPARSE18_CLUSTERS, 1, matrix=m)


def random_partition(rng, n, k):
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
    bounds = [0, *cuts, n]
    return tuple(tuple(sorted(verts[a:b])) for a, b in zip(bounds, bounds[1:]))


def random_explicit(rng, n, k, density=1.0, integer=False, name="rx"):
    """Explicit instance; off-diagonal entries absent with prob 1 - density."""
    m = [[0.0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                w = float(rng.randint(0, 9)) if integer else rng.uniform(0.0, 100.0)
            else:
                w = INF
            m[u][v] = m[v][u] = w
    return ClusteredInstance(name, n, random_partition(rng, n, k), rng.randint(1, n), matrix=m)


def bellman_ford(inst, members, root):
    members = sorted(members)
    dist = {v: math.inf for v in members}
    dist[root] = 0.0
    for _ in range(len(members) - 1):
        changed = False
        for u in members:
            if dist[u] == math.inf:
                continue
            for v in members:
                if u != v and inst._w[u][v] != INF and dist[u] + inst._w[u][v] < dist[v]:
                    dist[v] = dist[u] + inst._w[u][v]
                    changed = True
        if not changed:
            break
    return dist


def bfs_connected(inst, members):
    members = set(members)
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in members:
            if v not in seen and inst.has_edge(u, v):
                seen.add(v)
                queue.append(v)
    return seen == members


class ScriptedRng:
    """Stand-in for ``random.Random`` that replays fixed draws."""

    def __init__(self, randranges=(), samples=()):
        self._randranges = list(randranges)
        self._samples = list(samples)

    def randrange(self, n):
        x = self._randranges.pop(0)
        assert 0 <= x < n
        return x

    def sample(self, population, k):
        order = self._samples.pop(0)
        assert sorted(order) == sorted(population) and k == len(order)
        return list(order)


def valid_chromosomes(inst, rng, count, decoder):
    """Draw ``count`` valid chromosomes by rejection."""
    out = []
    while len(out) < count:
        chrom = tuple(rng.choice(c) for c in inst.clusters)
        if decoder.is_valid(chrom):
            out.append(chrom)
    return out


def seeded(seed):
    return random.Random(seed)
