"""Seeded generators for the graph families used in the experiments.

All generators are pure functions of (parameters, seed): the same inputs give
bit-identical edge sets.  Infeasible parameter tuples (parity, integrality)
raise instead of rounding.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .graphs import Graph, union

FAMILIES = ("bipartite-circulant", "circulant", "random-configuration", "extremal-mid")

# Expected number of restarts of the naive pairing model grows like
# exp((deg^2 - 1)/4); above this degree we switch to the suitable-pair sampler.
_PAIRING_MAX_DEGREE = 5


def gen_bipartite_regular(n: int, degree: int) -> Tuple[Graph, List[int]]:
    """Deterministic bipartite degree-regular graph on parts of size n/2.

    x_i is joined to y_{(i+t) mod n/2} for t = 0..degree-1.  Returns the graph
    and the X side (vertices 0..n/2-1).
    """
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    half = n // 2
    if not 0 <= degree <= half:
        raise ValueError(f"degree must be in [0, n/2] = [0, {half}], got {degree}")
    edges = []
    for i in range(half):
        for t in range(degree):
            edges.append((i, half + (i + t) % half))
    g = Graph.from_edges(n, edges)
    return g, list(range(half))


def circulant(m: int, degree: int, offset_base: int = 0) -> List[Tuple[int, int]]:
    """Edges of a degree-regular circulant on vertices offset_base..offset_base+m-1.

    Even degree uses offsets 1..degree/2; odd degree additionally uses the
    antipodal matching, which needs m even.
    """
    if not 0 <= degree < m:
        raise ValueError(f"degree must be in [0, m), got {degree} for m={m}")
    if degree % 2 == 1 and m % 2 == 1:
        raise ValueError(f"odd degree {degree} infeasible on odd side size {m}")
    # offsets run to degree//2 <= (m-1)//2, strictly below the antipodal m/2,
    # so every (i, i+t) pair is a distinct edge
    edges = set()
    for t in range(1, degree // 2 + 1):
        for i in range(m):
            a, b = sorted((i, (i + t) % m))
            edges.add((offset_base + a, offset_base + b))
    if degree % 2 == 1:
        for i in range(m // 2):
            edges.add((offset_base + i, offset_base + i + m // 2))
    return sorted(edges)


def gen_circulant(n: int, degree: int) -> Graph:
    return Graph.from_edges(n, circulant(n, degree))


def gen_extremal_mid(n: int, d: Fraction) -> Tuple[Graph, List[int]]:
    """K_{n/2,n/2} plus a (d-1/2)n-regular circulant inside each side.

    The construction witnessing the mid-range lower bound; total degree is dn.
    """
    d = Fraction(d)
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    if not Fraction(1, 2) <= d <= Fraction(3, 4):
        raise ValueError(f"d must be in [1/2, 3/4], got {d}")
    inner = (d - Fraction(1, 2)) * n
    if inner.denominator != 1:
        raise ValueError(f"(d-1/2)n = {inner} is not an integer")
    inner = int(inner)
    half = n // 2
    edges = [(i, half + j) for i in range(half) for j in range(half)]
    edges += circulant(half, inner, 0)
    edges += circulant(half, inner, half)
    g = Graph.from_edges(n, edges)
    return g, list(range(half))


def _pairing_model(n: int, degree: int, rng: random.Random, max_attempts: int = 10000) -> Graph:
    stubs = [v for v in range(n) for _ in range(degree)]
    for _ in range(max_attempts):
        rng.shuffle(stubs)
        rows = [0] * n
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            if a == b or rows[a] >> b & 1:
                ok = False
                break
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        if ok:
            return Graph(n, rows)
    raise RuntimeError(
        f"pairing model failed after {max_attempts} attempts (n={n}, degree={degree})"
    )


def gen_random_regular(n: int, degree: int, seed: int) -> Graph:
    """Seeded random simple degree-regular graph.

    Low degrees use the configuration/pairing model with full restarts on any
    loop or multi-edge.  For higher degrees a full restart essentially never
    succeeds, so we fall back to the suitable-pair sampler (networkx).
    """
    if (n * degree) % 2 != 0:
        raise ValueError(f"n*degree must be even, got n={n}, degree={degree}")
    if not 0 <= degree < n:
        raise ValueError(f"degree must be in [0, n), got {degree}")
    if degree == 0:
        return Graph.empty(n)
    if degree == n - 1:
        return Graph.complete(n)
    if degree <= _PAIRING_MAX_DEGREE:
        return _pairing_model(n, degree, random.Random(seed))
    import networkx as nx

    h = nx.random_regular_graph(degree, n, seed=seed)
    return Graph.from_edges(n, [(min(u, v), max(u, v)) for u, v in h.edges()])


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: each pair present independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0,1], got {p}")
    if p == 0:
        return Graph.empty(n)
    if p == 1:
        return Graph.complete(n)
    rng = np.random.default_rng(seed)
    u = rng.random((n, n))
    rows = [0] * n
    m = 0
    for i in range(n):
        for j in np.flatnonzero(u[i, i + 1:] < p):
            j = int(j) + i + 1
            rows[i] |= 1 << j
            rows[j] |= 1 << i
            m += 1
    return Graph(n, rows, m)


def perturb(g_d: Graph, p: float, seed: int) -> Graph:
    """Randomly perturbed graph: union of g_d with a fresh G(n,p) sample."""
    return union(g_d, gen_gnp(g_d.n, p, seed))


def audit_degrees(g: Graph, degree: int) -> bool:
    return all(g.degree(v) == degree for v in range(g.n))


def generate_family(family: str, n: int, d: Fraction, seed: int) -> Tuple[Graph, List[int] | None]:
    """Dispatch on family name; returns (graph, distinguished X side or None)."""
    d = Fraction(d)
    dn = d * n
    if dn.denominator != 1:
        raise ValueError(f"dn = {dn} is not an integer (n={n}, d={d})")
    dn = int(dn)
    if family == "bipartite-circulant":
        return gen_bipartite_regular(n, dn)
    if family == "circulant":
        return gen_circulant(n, dn), None
    if family == "random-configuration":
        return gen_random_regular(n, dn, seed), None
    if family == "extremal-mid":
        return gen_extremal_mid(n, d)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
