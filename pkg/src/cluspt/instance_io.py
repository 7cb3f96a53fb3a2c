"""Reading, writing and source augmentation of clustered instance files.

File grammar (line oriented, ``KEY: value`` headers)::

    NAME: <string>
    TYPE: CluSPT
    DIMENSION: <n>
    NUMBER_OF_CLUSTERS: <k>
    SOURCE_VERTEX: <id>
    EDGE_WEIGHT_TYPE: EUC_2D | EXPLICIT
    EDGE_WEIGHT_FORMAT: FULL_MATRIX
    NODE_COORD_SECTION | EDGE_WEIGHT_SECTION
    ...
    CLUSTER_SECTION
    <cluster-id> <v1> <v2> ... -1
    EOF

Absent edges of an explicit matrix are written as ``inf``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import InstanceError, ParseError
from .graph import ClusteredInstance

HEADER_KEYS = (
    "NAME",
    "TYPE",
    "DIMENSION",
    "NUMBER_OF_CLUSTERS",
    "SOURCE_VERTEX",
    "EDGE_WEIGHT_TYPE",
    "EDGE_WEIGHT_FORMAT",
)
SECTIONS = ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "CLUSTER_SECTION")
MANDATORY = ("NAME", "TYPE", "DIMENSION", "NUMBER_OF_CLUSTERS", "EDGE_WEIGHT_TYPE")


class MissingSourceError(ParseError):
    """SOURCE_VERTEX absent and headless mode not requested."""


@dataclass(frozen=True)
class SourceAugmentation:
    name: str
    source: int
    seed: int


def format_real(x: float) -> str:
    if x == math.inf:
        return "inf"
    return format(x, ".17g")


def _int(token, lineno, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {token!r}", lineno) from None


def _real(token, lineno, what):
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"{what}: expected a real number, got {token!r}", lineno) from None
    if math.isnan(x):
        raise ParseError(f"{what}: NaN is not a weight", lineno)
    return x


def parse_instance(text: str, headless: bool = False) -> ClusteredInstance:
    """Parse instance text.

    With ``headless=True`` a missing SOURCE_VERTEX is tolerated and the
    returned instance has ``source=None``; pair it with :func:`augment_source`.
    """
    lines = text.splitlines()
    header: dict[str, tuple[str, int]] = {}
    pos = 0
    coords = None
    matrix = None
    clusters = None
    saw_eof = False

    def next_content(start):
        i = start
        while i < len(lines) and not lines[i].strip():
            i += 1
        return i

    while True:
        pos = next_content(pos)
        if pos >= len(lines):
            break
        lineno = pos + 1
        line = lines[pos].strip()
        if line == "EOF":
            saw_eof = True
            pos += 1
            break
        if line in SECTIONS:
            n = _dimension(header)
            if line == "NODE_COORD_SECTION":
                coords, pos = _read_coords(lines, pos + 1, n)
            elif line == "EDGE_WEIGHT_SECTION":
                matrix, pos = _read_matrix(lines, pos + 1, n)
            else:
                k = _header_int(header, "NUMBER_OF_CLUSTERS")
                clusters, pos = _read_clusters(lines, pos + 1, k, n)
            continue
        if ":" not in line:
            raise ParseError(f"unexpected line {line!r}", lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key not in HEADER_KEYS:
            raise ParseError(f"unknown header key {key!r}", lineno)
        if key in header:
            raise ParseError(f"duplicate header key {key}", lineno)
        if coords is not None or matrix is not None or clusters is not None:
            raise ParseError(f"header key {key} after a data section", lineno)
        header[key] = (value, lineno)
        pos += 1

    end = len(lines) + 1
    if not saw_eof:
        raise ParseError("missing EOF marker", end)
    trailing = next_content(pos)
    if trailing < len(lines):
        raise ParseError("content after EOF", trailing + 1)
    for key in MANDATORY:
        if key not in header:
            raise ParseError(f"missing mandatory key {key}", end)
    kind, kind_line = header["TYPE"]
    if kind != "CluSPT":
        raise ParseError(f"TYPE must be CluSPT, got {kind!r}", kind_line)
    n = _dimension(header)
    k = _header_int(header, "NUMBER_OF_CLUSTERS")
    if k < 1:
        raise ParseError("NUMBER_OF_CLUSTERS must be at least 1", header["NUMBER_OF_CLUSTERS"][1])

    wtype, wline = header["EDGE_WEIGHT_TYPE"]
    if wtype == "EUC_2D":
        if "EDGE_WEIGHT_FORMAT" in header:
            raise ParseError("EDGE_WEIGHT_FORMAT only applies to EXPLICIT", header["EDGE_WEIGHT_FORMAT"][1])
        if coords is None:
            raise ParseError("EUC_2D instance lacks NODE_COORD_SECTION", end)
        if matrix is not None:
            raise ParseError("EUC_2D instance must not carry EDGE_WEIGHT_SECTION", end)
    elif wtype == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT")
        if fmt is None:
            raise ParseError("missing mandatory key EDGE_WEIGHT_FORMAT", end)
        if fmt[0] != "FULL_MATRIX":
            raise ParseError(f"unsupported EDGE_WEIGHT_FORMAT {fmt[0]!r}", fmt[1])
        if matrix is None:
            raise ParseError("EXPLICIT instance lacks EDGE_WEIGHT_SECTION", end)
        if coords is not None:
            raise ParseError("EXPLICIT instance must not carry NODE_COORD_SECTION", end)
    else:
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {wtype!r}", wline)
    if clusters is None:
        raise ParseError("missing CLUSTER_SECTION", end)

    source = None
    if "SOURCE_VERTEX" in header:
        source = _header_int(header, "SOURCE_VERTEX")
        if not 1 <= source <= n:
            raise ParseError(f"SOURCE_VERTEX {source} outside 1..{n}", header["SOURCE_VERTEX"][1])
    elif not headless:
        raise MissingSourceError("missing mandatory key SOURCE_VERTEX (use headless mode to draw one)", end)

    try:
        return ClusteredInstance(
            name=header["NAME"][0], n=n, clusters=clusters, source=source,
            coords=coords, matrix=matrix)
    except InstanceError as exc:
        raise ParseError(str(exc), header["DIMENSION"][1]) from None


def _header_int(header, key):
    value, lineno = header[key] if key in header else (None, None)
    if value is None:
        raise ParseError(f"missing mandatory key {key}")
    return _int(value, lineno, key)


def _dimension(header):
    n = _header_int(header, "DIMENSION")
    if n < 1:
        raise ParseError("DIMENSION must be at least 1", header["DIMENSION"][1])
    return n


def _data_lines(lines, start, count, section):
    """Yield ``(lineno, tokens)`` for ``count`` non-blank lines."""
    pos = start
    for _ in range(count):
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise ParseError(f"{section} ended early; expected {count} rows", len(lines) + 1)
        tokens = lines[pos].split()
        if tokens[0] in SECTIONS or tokens[0] == "EOF" or ":" in tokens[0]:
            raise ParseError(f"{section} ended early; expected {count} rows", pos + 1)
        yield pos + 1, tokens
        pos += 1


def _read_coords(lines, start, n):
    coords = [None] * n
    last = start
    for lineno, tokens in _data_lines(lines, start, n, "NODE_COORD_SECTION"):
        last = lineno
        if len(tokens) != 3:
            raise ParseError("coordinate row must be '<id> <x> <y>'", lineno)
        vid = _int(tokens[0], lineno, "vertex id")
        if not 1 <= vid <= n:
            raise ParseError(f"vertex id {vid} outside 1..{n}", lineno)
        if coords[vid - 1] is not None:
            raise ParseError(f"duplicate coordinates for vertex {vid}", lineno)
        x = _real(tokens[1], lineno, "x")
        y = _real(tokens[2], lineno, "y")
        if math.isinf(x) or math.isinf(y):
            raise ParseError("coordinates must be finite", lineno)
        coords[vid - 1] = (x, y)
    return tuple(coords), last


def _read_matrix(lines, start, n):
    rows = []
    last = start
    for lineno, tokens in _data_lines(lines, start, n, "EDGE_WEIGHT_SECTION"):
        last = lineno
        if len(tokens) != n:
            raise ParseError(f"weight row has {len(tokens)} entries, expected {n}", lineno)
        row = tuple(_real(t, lineno, "weight") for t in tokens)
        for x in row:
            if x < 0:
                raise ParseError(f"negative weight {x}", lineno)
        rows.append(row)
    for u in range(n):
        if rows[u][u] != 0.0:
            raise ParseError(f"diagonal entry for vertex {u + 1} must be 0", start + 1 + u)
        for v in range(u):
            if rows[u][v] != rows[v][u]:
                raise ParseError(f"weight matrix not symmetric at ({u + 1},{v + 1})", start + 1 + u)
    return tuple(rows), last


def _read_clusters(lines, start, k, n):
    clusters = [None] * k
    seen: dict[int, int] = {}
    last = start
    for lineno, tokens in _data_lines(lines, start, k, "CLUSTER_SECTION"):
        last = lineno
        if len(tokens) < 3 or tokens[-1] != "-1":
            raise ParseError("cluster row must be '<cluster-id> <v1> ... -1'", lineno)
        cid = _int(tokens[0], lineno, "cluster id")
        if not 1 <= cid <= k:
            raise ParseError(f"cluster id {cid} outside 1..{k}", lineno)
        if clusters[cid - 1] is not None:
            raise ParseError(f"duplicate cluster id {cid}", lineno)
        members = []
        for t in tokens[1:-1]:
            v = _int(t, lineno, "cluster member")
            if not 1 <= v <= n:
                raise ParseError(f"cluster member {v} outside 1..{n}", lineno)
            if v in seen:
                raise ParseError(
                    f"vertex {v} listed in clusters {seen[v]} and {cid}", lineno)
            seen[v] = cid
            members.append(v)
        clusters[cid - 1] = tuple(members)
    for v in range(1, n + 1):
        if v not in seen:
            raise ParseError(f"vertex {v} is not assigned to any cluster", last)
    return tuple(clusters), last


def write_instance(inst: ClusteredInstance) -> str:
    """Canonical text form; ``parse_instance`` inverts it exactly."""
    out = [
        f"NAME: {inst.name}",
        "TYPE: CluSPT",
        f"DIMENSION: {inst.n}",
        f"NUMBER_OF_CLUSTERS: {inst.k}",
    ]
    if inst.source is not None:
        out.append(f"SOURCE_VERTEX: {inst.source}")
    if inst.coords is not None:
        out.append("EDGE_WEIGHT_TYPE: EUC_2D")
        out.append("NODE_COORD_SECTION")
        for v, (x, y) in enumerate(inst.coords, start=1):
            out.append(f"{v} {format_real(x)} {format_real(y)}")
    else:
        out.append("EDGE_WEIGHT_TYPE: EXPLICIT")
        out.append("EDGE_WEIGHT_FORMAT: FULL_MATRIX")
        out.append("EDGE_WEIGHT_SECTION")
        for row in inst.matrix:
            out.append(" ".join(format_real(x) for x in row))
    out.append("CLUSTER_SECTION")
    for i, members in enumerate(inst.clusters, start=1):
        out.append(" ".join([str(i), *map(str, members), "-1"]))
    out.append("EOF")
    return "\n".join(out) + "\n"


def read_instance(path, headless: bool = False) -> ClusteredInstance:
    return parse_instance(Path(path).read_text(encoding="ascii"), headless=headless)


def augment_source(inst: ClusteredInstance, seed: int) -> SourceAugmentation:
    """Draw the source vertex uniformly from ``1..n`` with a seeded generator."""
    source = random.Random(seed).randint(1, inst.n)
    return SourceAugmentation(inst.name, source, seed)


def with_source(inst: ClusteredInstance, source: int) -> ClusteredInstance:
    return replace(inst, source=source)


def random_euclidean_instance(n: int, k: int, seed: int, name: Optional[str] = None,
                              side: float = 100.0) -> ClusteredInstance:
    """Complete Euclidean instance with ``k`` nonempty clusters.

    Each cluster gets a random centre; its members scatter around it.  The
    source is a uniformly drawn vertex.
    """
    if not 1 <= k <= n:
        raise InstanceError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = random.Random(seed)
    sizes = [1] * k
    for _ in range(n - k):
        sizes[rng.randrange(k)] += 1
    coords = []
    clusters = []
    v = 1
    spread = side / (2 * math.sqrt(k))
    for size in sizes:
        cx, cy = rng.uniform(0, side), rng.uniform(0, side)
        members = []
        for _ in range(size):
            coords.append((round(cx + rng.gauss(0, spread), 3), round(cy + rng.gauss(0, spread), 3)))
            members.append(v)
            v += 1
        clusters.append(tuple(members))
    return ClusteredInstance(
        name=name or f"rand{n}k{k}s{seed}", n=n, clusters=tuple(clusters),
        source=rng.randint(1, n), coords=tuple(coords))
