"""Core undirected graph with bitset adjacency and fast triangle enumeration."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, List, NamedTuple, Sequence, Tuple


class Triangle(NamedTuple):
    i: int
    j: int
    k: int

    @staticmethod
    def of(a: int, b: int, c: int) -> "Triangle":
        i, j, k = sorted((a, b, c))
        return Triangle(i, j, k)

    def edges(self) -> Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]:
        i, j, k = self
        return ((i, j), (i, k), (j, k))


def _bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of an int bitmask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Adjacency is one Python int bitmask per vertex; triangle work is bitwise
    intersection of rows.  Instances are treated as immutable after
    construction.
    """

    __slots__ = ("n", "rows", "edge_count")

    def __init__(self, n: int, rows: Sequence[int], edge_count: int | None = None):
        self.n = n
        self.rows = list(rows)
        if edge_count is None:
            edge_count = sum(r.bit_count() for r in self.rows) // 2
        self.edge_count = edge_count

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, [0] * n, 0)

    @staticmethod
    def complete(n: int) -> "Graph":
        full = (1 << n) - 1
        return Graph(n, [full ^ (1 << i) for i in range(n)], n * (n - 1) // 2)

    @staticmethod
    def from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        rows = [0] * n
        m = 0
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for n={n}")
            if rows[i] >> j & 1:
                raise ValueError(f"duplicate edge ({i},{j})")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
            m += 1
        return Graph(n, rows, m)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def degree(self, i: int) -> int:
        return self.rows[i].bit_count()

    def neighbors(self, i: int) -> List[int]:
        return list(_bits(self.rows[i]))

    def edges(self) -> Iterator[Tuple[int, int]]:
        for i in range(self.n):
            for j in _bits(self.rows[i] >> (i + 1) << (i + 1)):
                yield (i, j)

    def edge_set(self) -> set:
        return set(self.edges())

    def triangles(self) -> Iterator[Triangle]:
        """All triangles, each once, in lexicographic order."""
        rows = self.rows
        for i in range(self.n):
            ri = rows[i] >> (i + 1) << (i + 1)
            for j in _bits(ri):
                common = ri & rows[j]
                for k in _bits(common >> (j + 1) << (j + 1)):
                    yield Triangle(i, j, k)

    @property
    def triangle_count(self) -> int:
        return sum(1 for _ in self.triangles())

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, tuple(self.rows)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


class VertexPartition:
    """Disjoint vertex blocks covering 0..n-1, sizes differing by at most 1."""

    def __init__(self, n: int, blocks: Sequence[Sequence[int]]):
        seen = set()
        for blk in blocks:
            for v in blk:
                if v in seen:
                    raise ValueError(f"vertex {v} in two blocks")
                seen.add(v)
        if seen != set(range(n)):
            raise ValueError("blocks do not cover all vertices")
        sizes = [len(b) for b in blocks]
        if max(sizes) - min(sizes) > 1:
            raise ValueError(f"unbalanced blocks: sizes {sizes}")
        self.n = n
        self.blocks = [sorted(b) for b in blocks]
        self.masks = [mask_of(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    @staticmethod
    def balanced_random(n: int, num_blocks: int, perm: Sequence[int]) -> "VertexPartition":
        """Split a permutation of range(n) into num_blocks near-equal chunks."""
        if len(perm) != n or sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of range(n)")
        base, extra = divmod(n, num_blocks)
        blocks = []
        pos = 0
        for b in range(num_blocks):
            size = base + (1 if b < extra else 0)
            blocks.append(perm[pos:pos + size])
            pos += size
        return VertexPartition(n, blocks)


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def union(g1: Graph, g2: Graph) -> Graph:
    """Edge-union of two graphs on the same vertex set."""
    if g1.n != g2.n:
        raise ValueError(f"vertex count mismatch: {g1.n} != {g2.n}")
    return Graph(g1.n, [a | b for a, b in zip(g1.rows, g2.rows)])


def triangles_containing(g: Graph, i: int, j: int) -> List[Triangle]:
    """Triangles through the edge {i,j}: one per common neighbour."""
    if not g.has_edge(i, j):
        raise ValueError(f"({i},{j}) is not an edge")
    return [Triangle.of(i, j, k) for k in _bits(g.rows[i] & g.rows[j])]


def density(g: Graph, A: Iterable[int], B: Iterable[int]) -> Fraction:
    """Cross edge density e(A,B)/(|A||B|) between disjoint vertex sets."""
    A = list(A)
    B = list(B)
    if not A or not B:
        raise ValueError("density needs nonempty sets")
    mb = mask_of(B)
    if mask_of(A) & mb:
        raise ValueError("density needs disjoint sets")
    e = sum((g.rows[a] & mb).bit_count() for a in A)
    return Fraction(e, len(A) * len(B))


def cross_edge_count(g: Graph, A: Iterable[int], B: Iterable[int]) -> int:
    mb = mask_of(B)
    return sum((g.rows[a] & mb).bit_count() for a in A)


def induced_edge_count(g: Graph, S: Iterable[int]) -> int:
    """Number of edges with both endpoints in S."""
    mask = mask_of(S)
    return sum((g.rows[v] & mask).bit_count() for v in _bits(mask)) // 2


def read_edge_list(path) -> Tuple[Graph, List[int] | None]:
    """Read the "n m" + "i j" text format.

    Returns (graph, X) where X is the distinguished bipartition side when a
    "# X: a..b" comment is present, else None.
    """
    side = None
    header = None
    edges = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("X:"):
                    lo, hi = body[2:].strip().split("..")
                    side = list(range(int(lo), int(hi) + 1))
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"expected two integers per line, got {line!r}")
            if header is None:
                header = (int(parts[0]), int(parts[1]))
                continue
            i, j = int(parts[0]), int(parts[1])
            if not i < j:
                raise ValueError(f"edge line must have i < j, got {i} {j}")
            edges.append((i, j))
    if header is None:
        raise ValueError("missing 'n m' header")
    n, m = header
    g = Graph.from_edges(n, edges)
    if g.edge_count != m:
        raise ValueError(f"header says m={m} but read {g.edge_count} edges")
    return g, side


def write_edge_list(path, g: Graph, side: Sequence[int] | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        if side is not None:
            fh.write(f"# X: {min(side)}..{max(side)}\n")
        for i, j in g.edges():
            fh.write(f"{i} {j}\n")
