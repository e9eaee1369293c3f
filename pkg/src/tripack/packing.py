"""Fractional and integral triangle packings.

Integral side: seeded greedy, (1 <-> 2) local search, and an exact
branch-and-bound oracle for small instances.  Fractional side: an exact
LP solver and the partition pipeline that lifts a reduced-graph triangle
weighting to a feasible fractional packing of the host graph.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from math import floor, inf
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .graphs import Graph, Triangle, VertexPartition, _bits, mask_of
from .weighting import (
    ThresholdParams,
    WeightedCompleteGraph,
    audit_hypotheses,
    clamp_nonnegative,
    thresholded_weighting,
)

EDGE_LOAD_TOL = 1e-9
_BRUTE_FORCE_TRIANGLE_GUARD = 10**4
_LP_TRIANGLE_GUARD = 5 * 10**5


def mix64(*parts: int) -> int:
    """Stable 64-bit mix of integers, for deriving independent seed streams."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h ^= (p & 0xFFFFFFFFFFFFFFFF) + 0x9E3779B97F4A7C15 + ((h << 6) & 0xFFFFFFFFFFFFFFFF) + (h >> 2)
        h &= 0xFFFFFFFFFFFFFFFF
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & 0xFFFFFFFFFFFFFFFF
        h = (h ^ (h >> 27)) * 0x94D049BB133111EB & 0xFFFFFFFFFFFFFFFF
        h ^= h >> 31
    return h


def _tri_code(n: int, i: int, j: int, k: int) -> int:
    return (i * n + j) * n + k


def _tri_decode(n: int, code: int) -> Triangle:
    k = code % n
    ij = code // n
    return Triangle(ij // n, ij % n, k)


class FractionalPacking:
    """Sparse nonnegative triangle weights with per-edge load at most 1.

    Triangles are stored as packed int codes in numpy arrays so pipeline-scale
    packings (millions of triangles) stay compact.  Diagnostics from the
    partition pipeline are attached as plain attributes.
    """

    def __init__(self, host: Graph, tri_codes: np.ndarray, tri_weights: np.ndarray):
        self.host = host
        self.tri_codes = np.asarray(tri_codes, dtype=np.int64)
        self.tri_weights = np.asarray(tri_weights, dtype=np.float64)
        if self.tri_codes.shape != self.tri_weights.shape:
            raise ValueError("codes/weights length mismatch")
        self.value = float(self.tri_weights.sum())
        # optional diagnostics
        self.lp_upper: Optional[float] = None
        self.converged: bool = True
        self.clamped_mass: float = 0.0
        self.repair_mass: float = 0.0
        self.removed_triangles: int = 0
        self.audit_report = None

    @staticmethod
    def from_dict(host: Graph, weights: Dict[Triangle, float]) -> "FractionalPacking":
        n = host.n
        codes = np.array([_tri_code(n, *t) for t in weights], dtype=np.int64)
        vals = np.array(list(weights.values()), dtype=np.float64)
        return FractionalPacking(host, codes, vals)

    @staticmethod
    def empty(host: Graph) -> "FractionalPacking":
        return FractionalPacking(host, np.empty(0, dtype=np.int64), np.empty(0))

    def __len__(self) -> int:
        return len(self.tri_codes)

    def items(self):
        n = self.host.n
        for code, w in zip(self.tri_codes.tolist(), self.tri_weights.tolist()):
            yield _tri_decode(n, code), w

    def _edge_endpoints(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = self.host.n
        k = self.tri_codes % n
        ij = self.tri_codes // n
        return ij // n, ij % n, k

    def edge_loads(self) -> np.ndarray:
        """Flat length-n*n array; load of edge (u,v), u<v, at index u*n+v."""
        n = self.host.n
        loads = np.zeros(n * n)
        i, j, k = self._edge_endpoints()
        for a, b in ((i, j), (i, k), (j, k)):
            np.add.at(loads, a * n + b, self.tri_weights)
        return loads

    def max_edge_load(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(self.edge_loads().max())

    def audit(self, tol: float = EDGE_LOAD_TOL) -> None:
        """Raise if any weight is negative, any triangle is not in the host,
        or any edge load exceeds 1 + tol."""
        if len(self) == 0:
            return
        if self.tri_weights.min() < 0:
            raise AssertionError("negative triangle weight")
        n = self.host.n
        adj = np.zeros((n, n), dtype=bool)
        for u, v in self.host.edges():
            adj[u, v] = adj[v, u] = True
        i, j, k = self._edge_endpoints()
        if not (np.all(i < j) and np.all(j < k)):
            raise AssertionError("non-canonical triangle code")
        if not (adj[i, j].all() and adj[i, k].all() and adj[j, k].all()):
            raise AssertionError("triangle not present in host graph")
        top = self.max_edge_load()
        if top > 1 + tol:
            raise AssertionError(f"edge load {top} exceeds 1 + {tol}")


class IntegralPacking:
    """A set of pairwise edge-disjoint triangles of the host graph."""

    def __init__(self, host: Graph, triangles: Iterable[Triangle]):
        self.host = host
        self.triangles = [Triangle.of(*t) for t in triangles]
        self.covered = 3 * len(self.triangles)
        self.uncovered = host.edge_count - self.covered

    def __len__(self) -> int:
        return len(self.triangles)

    def audit(self) -> None:
        used = set()
        for t in self.triangles:
            for e in t.edges():
                if not self.host.has_edge(*e):
                    raise AssertionError(f"edge {e} of {t} not in host")
                if e in used:
                    raise AssertionError(f"edge {e} used twice")
                used.add(e)
        if self.uncovered != self.host.edge_count - 3 * len(self.triangles):
            raise AssertionError("uncovered count inconsistent")
        if self.uncovered < 0:
            raise AssertionError("negative uncovered count")


def uncovered_count(g: Graph, p: IntegralPacking) -> int:
    return g.edge_count - 3 * len(p.triangles)


# ---------------------------------------------------------------------------
# integral packers


def _remove_tri_edges(rows: List[int], t: Triangle) -> None:
    for a, b in t.edges():
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)


def _add_tri_edges(rows: List[int], t: Triangle) -> None:
    for a, b in t.edges():
        rows[a] |= 1 << b
        rows[b] |= 1 << a


def greedy_pack(g: Graph, seed: int = 0) -> IntegralPacking:
    """Maximal packing: one pass over the edges in seeded random order.

    Once an edge fails to close a triangle it never can again (edges only get
    removed), so a single pass leaves no triangle among uncovered edges.
    """
    rng = random.Random(seed)
    avail = list(g.rows)
    edges = list(g.edges())
    rng.shuffle(edges)
    tris: List[Triangle] = []
    for u, v in edges:
        if not avail[u] >> v & 1:
            continue
        common = avail[u] & avail[v]
        if common:
            k = (common & -common).bit_length() - 1
            t = Triangle.of(u, v, k)
            _remove_tri_edges(avail, t)
            tris.append(t)
    return IntegralPacking(g, tris)


def _insert_free_triangles(free: List[int], n: int, tris: List[Triangle]) -> int:
    """Add triangles living entirely on free edges until none remain."""
    added = 0
    again = True
    while again:
        again = False
        for u in range(n):
            for v in _bits(free[u] >> (u + 1) << (u + 1)):
                if not free[u] >> v & 1:  # consumed earlier in this scan
                    continue
                common = free[u] & free[v]
                if common:
                    k = (common & -common).bit_length() - 1
                    t = Triangle.of(u, v, k)
                    _remove_tri_edges(free, t)
                    tris.append(t)
                    added += 1
                    again = True
    return added


def _two_for_one(free: List[int], t: Triangle) -> Optional[Tuple[Triangle, Triangle]]:
    """With t's edges freed, look for two edge-disjoint free triangles using
    distinct edges of t."""
    edges = t.edges()
    for a1 in range(3):
        for a2 in range(3):
            if a1 == a2:
                continue
            u1, v1 = edges[a1]
            u2, v2 = edges[a2]
            for x in _bits(free[u1] & free[v1]):
                t1 = Triangle.of(u1, v1, x)
                _remove_tri_edges(free, t1)
                common2 = free[u2] & free[v2] if free[u2] >> v2 & 1 else 0
                if common2:
                    y = (common2 & -common2).bit_length() - 1
                    t2 = Triangle.of(u2, v2, y)
                    _add_tri_edges(free, t1)
                    return t1, t2
                _add_tri_edges(free, t1)
    return None


def local_search_improve(p: IntegralPacking, g: Graph, budget: int = 20000,
                         seed: int = 0) -> IntegralPacking:
    """(1 <-> 2) exchange local search; the packing size never decreases.

    Each attempt frees one packed triangle and searches for two edge-disjoint
    replacements among free edges.  Failed attempts occasionally take a seeded
    lateral step (swap the triangle for a different one of the same size) to
    escape plateaus.
    """
    rng = random.Random(seed)
    tris = [Triangle.of(*t) for t in p.triangles]
    free = list(g.rows)
    for t in tris:
        _remove_tri_edges(free, t)
    _insert_free_triangles(free, g.n, tris)
    moves = 0
    while moves < budget and tris:
        if g.edge_count - 3 * len(tris) < 3:
            break
        order = list(range(len(tris)))
        rng.shuffle(order)
        for idx in order:
            if moves >= budget:
                break
            moves += 1
            t = tris[idx]
            _add_tri_edges(free, t)
            found = _two_for_one(free, t)
            if found:
                t1, t2 = found
                _remove_tri_edges(free, t1)
                _remove_tri_edges(free, t2)
                tris[idx] = t1
                tris.append(t2)
                continue
            # lateral shake: replace t by another triangle through a freed edge
            if rng.random() < 0.3:
                cands = []
                for u, v in t.edges():
                    for x in _bits(free[u] & free[v]):
                        cand = Triangle.of(u, v, x)
                        if cand != t:
                            cands.append(cand)
                if cands:
                    t1 = rng.choice(cands)
                    _remove_tri_edges(free, t1)
                    tris[idx] = t1
                    continue
            _remove_tri_edges(free, t)
    _insert_free_triangles(free, g.n, tris)
    return IntegralPacking(g, tris)


def brute_force_max_pack(g: Graph) -> IntegralPacking:
    """Exact maximum triangle packing by branch and bound; small instances only."""
    tris = list(g.triangles())
    if len(tris) > _BRUTE_FORCE_TRIANGLE_GUARD:
        raise ValueError(f"instance too large for brute force: {len(tris)} triangles")
    if not tris:
        return IntegralPacking(g, [])
    edge_idx = {e: i for i, e in enumerate(g.edges())}
    m = len(edge_idx)
    tri_masks = []
    by_edge: List[List[int]] = [[] for _ in range(m)]
    for ti, t in enumerate(tris):
        mask = 0
        for e in t.edges():
            ei = edge_idx[e]
            mask |= 1 << ei
            by_edge[ei].append(ti)
        tri_masks.append(mask)

    best: List[int] = []
    chosen: List[int] = []

    def dfs(dead: int, dead_count: int) -> None:
        nonlocal best
        if len(chosen) + (m - dead_count) // 3 <= len(best):
            return
        # branch on the first live edge with an available triangle
        for ei in range(m):
            if dead >> ei & 1:
                continue
            avail = [ti for ti in by_edge[ei] if not tri_masks[ti] & dead]
            if not avail:
                continue
            for ti in avail:
                chosen.append(ti)
                dfs(dead | tri_masks[ti], dead_count + 3)
                chosen.pop()
            # leave this edge uncovered
            dfs(dead | 1 << ei, dead_count + 1)
            return
        if len(chosen) > len(best):
            best = chosen.copy()

    # seed the bound with a greedy solution so pruning bites immediately
    greedy = local_search_improve(greedy_pack(g, seed=0), g, budget=2000, seed=0)
    best = [tris.index(t) for t in greedy.triangles]
    dfs(0, 0)
    return IntegralPacking(g, [tris[i] for i in best])


# ---------------------------------------------------------------------------
# fractional packers


def fractional_pack_lp(g: Graph, eps: float = 1e-6) -> FractionalPacking:
    """Near-optimal fractional packing via an exact LP solve.

    Also certifies a dual upper bound on the fractional packing number,
    attached as .lp_upper.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    tris = list(g.triangles())
    if len(tris) > _LP_TRIANGLE_GUARD:
        raise ValueError(f"instance too large for the LP: {len(tris)} triangles")
    fp = FractionalPacking.empty(g)
    if not tris:
        fp.lp_upper = 0.0
        return fp
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    edge_idx = {e: i for i, e in enumerate(g.edges())}
    rows, cols = [], []
    for ti, t in enumerate(tris):
        for e in t.edges():
            rows.append(edge_idx[e])
            cols.append(ti)
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(edge_idx), len(tris)))
    res = linprog(-np.ones(len(tris)), A_ub=A, b_ub=np.ones(len(edge_idx)),
                  bounds=(0, None), method="highs")
    if not res.success:
        fp.converged = False
        fp.lp_upper = g.edge_count / 3
        return fp
    weights = np.clip(res.x, 0, None)
    loads = A @ weights
    top = loads.max(initial=0.0)
    if top > 1:
        weights = weights / top
    keep = weights > 0
    n = g.n
    codes = np.array([_tri_code(n, *tris[ti]) for ti in np.flatnonzero(keep)], dtype=np.int64)
    out = FractionalPacking(g, codes, weights[keep])
    dual = -np.asarray(res.ineqlin.marginals)
    out.lp_upper = float(np.clip(dual, 0, None).sum())
    return out


@dataclass
class CappedSelection:
    triangles: List[Tuple[int, int, int]]
    removed: int


def capped_triangle_select(g: Graph, X: Sequence[int], Y: Sequence[int],
                           Z: Sequence[int], caps: Tuple[float, float, float]
                           ) -> CappedSelection:
    """Tripartite triangles of g[X,Y,Z] with per-edge multiplicities capped.

    caps = (cap_xy, cap_xz, cap_yz): after the greedy trim no edge of the XY
    class lies in more than cap_xy selected triangles, and likewise for the
    other classes.  Triangles on over-cap edges are removed preferring those
    whose other edges are also over cap.
    """
    X, Y, Z = list(X), list(Y), list(Z)
    if mask_of(X) & mask_of(Y) or mask_of(X) & mask_of(Z) or mask_of(Y) & mask_of(Z):
        raise ValueError("X, Y, Z must be disjoint")
    my = mask_of(Y)
    mz = mask_of(Z)
    yi = {v: t for t, v in enumerate(Y)}
    zi = {v: t for t, v in enumerate(Z)}
    tris: List[Tuple[int, int, int]] = []
    e0: List[int] = []  # local XY edge code per triangle
    e1: List[int] = []  # local XZ edge code
    e2: List[int] = []  # local YZ edge code
    ny, nz = len(Y), len(Z)
    for xt, x in enumerate(X):
        rx = g.rows[x]
        for y in _bits(rx & my):
            common = rx & g.rows[y] & mz
            if not common:
                continue
            base_xy = xt * ny + yi[y]
            for z in _bits(common):
                tris.append((x, y, z))
                e0.append(base_xy)
                e1.append(xt * nz + zi[z])
                e2.append(yi[y] * nz + zi[z])
    if not tris:
        return CappedSelection([], 0)
    codes = (e0, e1, e2)
    sizes = (len(X) * ny, len(X) * nz, ny * nz)
    counts = [np.bincount(np.asarray(c, dtype=np.int64), minlength=s).astype(np.int64).tolist()
              for c, s in zip(codes, sizes)]
    allowed = [None if c == inf else int(floor(c)) for c in caps]
    incidence: List[dict] = [{}, {}, {}]
    for cls in range(3):
        inc = incidence[cls]
        for ti, code in enumerate(codes[cls]):
            inc.setdefault(code, []).append(ti)

    # greedy trim, worst edge first: repeatedly take the edge furthest over its
    # cap and drop one of its triangles, preferring a triangle whose other two
    # edges are themselves over cap (one removal then relieves several edges).
    # Stale heap entries are re-pushed with the refreshed excess.
    heap: List[Tuple[int, int, int]] = []
    for cls in range(3):
        cap = allowed[cls]
        if cap is None:
            continue
        for code, cnt in enumerate(counts[cls]):
            if cnt > cap:
                heap.append((cap - cnt, cls, code))
    heapq.heapify(heap)
    removed = [False] * len(tris)
    n_removed = 0
    while heap:
        neg_excess, cls, code = heapq.heappop(heap)
        excess = counts[cls][code] - allowed[cls]
        if excess <= 0:
            continue
        if -neg_excess != excess:
            heapq.heappush(heap, (-excess, cls, code))
            continue
        best = -1
        best_key = -1
        for ti in incidence[cls][code]:
            if removed[ti]:
                continue
            key = 0
            for other in range(3):
                if other == cls:
                    continue
                cnt = counts[other][codes[other][ti]]
                cap = allowed[other]
                key += cnt + (1000 if cap is not None and cnt > cap else 0)
            if key > best_key:
                best_key = key
                best = ti
        removed[best] = True
        n_removed += 1
        for other in range(3):
            counts[other][codes[other][best]] -= 1
        if excess > 1:
            heapq.heappush(heap, (1 - excess, cls, code))
    selected = [t for ti, t in enumerate(tris) if not removed[ti]]
    return CappedSelection(selected, n_removed)


@dataclass
class PipelineConfig:
    M: int = 20
    eps: float = 0.05
    C_cap: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.M < 5:
            raise ValueError(f"need M >= 5, got {self.M}")
        if not 0 < self.eps <= 0.1:
            raise ValueError(f"eps must be in (0, 1/10], got {self.eps}")
        if self.C_cap < 0:
            raise ValueError(f"C_cap must be nonnegative, got {self.C_cap}")


def partition_pipeline_pack(g: Graph, d, p, cfg: PipelineConfig) -> FractionalPacking:
    """Partition-based fractional packing of a perturbed graph.

    Steps: balanced random partition into M blocks; block-pair densities with
    a low-density floor as reduced edge weights; thresholded triangle
    weighting on the reduced complete graph; clamp; capped tripartite triangle
    selection per surviving reduced triangle; per-triangle weight assignment;
    a final proportional repair pass guaranteeing edge loads at most 1.

    Diagnostics (clamped_mass, repair_mass, removed_triangles, audit_report)
    ride on the returned packing.
    """
    n = g.n
    M = cfg.M
    if n < M:
        raise ValueError(f"need n >= M, got n={n}, M={M}")
    d = float(d)
    p = float(p)
    eps = cfg.eps
    rng = np.random.default_rng(cfg.seed)
    part = VertexPartition.balanced_random(n, M, rng.permutation(n).tolist())
    blocks = part.blocks
    masks = part.masks

    # reduced edge weights: block-pair densities with a low-density floor
    dens = [[0.0] * M for _ in range(M)]
    floor_val = (1 - eps) * p
    for i in range(M):
        for j in range(i + 1, M):
            mj = masks[j]
            e = sum((g.rows[v] & mj).bit_count() for v in blocks[i])
            val = e / (len(blocks[i]) * len(blocks[j]))
            if val < floor_val:
                val = 0.0
            dens[i][j] = dens[j][i] = val

    q = p + (1 - p) * d
    params = ThresholdParams(
        a=(1 - eps) * p / M,
        b=2 * (1 + eps) * q / M,
        c=3 * (1 - 4 * eps) * q / M,
        eps=eps,
        M=M,
    )
    wkg = WeightedCompleteGraph(dens, exact=False)
    audit = audit_hypotheses(wkg, params)
    xmap = thresholded_weighting(wkg, params)
    xmap, clamped = clamp_nonnegative(xmap)

    s = n / M
    infl = 1 + cfg.C_cap * eps
    code_chunks: List[np.ndarray] = []
    weight_chunks: List[np.ndarray] = []
    removed_total = 0
    for (i, j, k), x in xmap.items():
        if x <= 0:
            continue
        wij, wik, wjk = dens[i][j], dens[i][k], dens[j][k]
        caps = (infl * wik * wjk * s,   # XY edges, triangles via Z
                infl * wij * wjk * s,   # XZ edges, triangles via Y
                infl * wij * wik * s)   # YZ edges, triangles via X
        sel = capped_triangle_select(g, blocks[i], blocks[j], blocks[k], caps)
        removed_total += sel.removed
        if not sel.triangles:
            continue
        f_ijk = x * M / (n * infl * wij * wjk * wik)
        arr = np.array(sel.triangles, dtype=np.int64)
        arr.sort(axis=1)
        chunk = (arr[:, 0] * n + arr[:, 1]) * n + arr[:, 2]
        code_chunks.append(chunk)
        weight_chunks.append(np.full(len(chunk), f_ijk))

    if code_chunks:
        codes = np.concatenate(code_chunks)
        weights = np.concatenate(weight_chunks)
    else:
        codes = np.empty(0, dtype=np.int64)
        weights = np.empty(0)
    fp = FractionalPacking(g, codes, weights)
    value_before = fp.value

    # repair: scale every triangle by the worst load among its edges
    if len(fp):
        loads = fp.edge_loads()
        i_, j_, k_ = fp._edge_endpoints()
        scale = np.ones(len(fp))
        for a, b in ((i_, j_), (i_, k_), (j_, k_)):
            le = loads[a * n + b]
            np.minimum(scale, np.where(le > 1, 1 / le, 1.0), out=scale)
        fp.tri_weights = fp.tri_weights * scale
        fp.value = float(fp.tri_weights.sum())

    fp.clamped_mass = float(clamped)
    fp.repair_mass = value_before - fp.value
    fp.removed_triangles = removed_total
    fp.audit_report = audit
    return fp


def round_to_integral(f: FractionalPacking, seed: int = 0,
                      sample_factor: float = 0.9,
                      ls_budget: Optional[int] = None) -> IntegralPacking:
    """Randomized rounding of a fractional packing to an edge-disjoint one.

    Samples triangles with probability sample_factor * f(T), discards
    conflicts in seeded random order, then packs the residual graph greedily
    and polishes with local search.
    """
    g = f.host
    n = g.n
    rng = np.random.default_rng(mix64(seed, 0xF2AC))
    tris: List[Triangle] = []
    used = [0] * n
    if len(f):
        probs = np.clip(sample_factor * f.tri_weights, 0, 1)
        keep = np.flatnonzero(rng.random(len(f)) < probs)
        keep = keep[rng.permutation(len(keep))]
        for code in f.tri_codes[keep].tolist():
            t = _tri_decode(n, code)
            i, j, k = t
            if used[i] >> j & 1 or used[i] >> k & 1 or used[j] >> k & 1:
                continue
            for a, b in t.edges():
                used[a] |= 1 << b
                used[b] |= 1 << a
            tris.append(t)
    residual = Graph(n, [g.rows[v] & ~used[v] for v in range(n)])
    base = greedy_pack(residual, seed=mix64(seed, 0x6EED))
    tris.extend(base.triangles)
    combined = IntegralPacking(g, tris)
    if ls_budget is None:
        ls_budget = max(20000, 4 * len(tris))
    return local_search_improve(combined, g, budget=ls_budget, seed=mix64(seed, 0x10CA))
