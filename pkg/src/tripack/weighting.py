"""Triangle and clique weightings on edge-weighted complete graphs.

The central object is the explicit symmetric formula assigning a weight to
every triangle of K_n so that, for each edge, the weights of the triangles
through it sum exactly to that edge's weight.  A generalization to r-cliques
and a thresholded variant for reduced graphs live here too.

Two number fields are supported: exact rationals (fractions.Fraction) for
identity checking, and floats for pipeline-scale work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

Triple = Tuple[int, int, int]

_CLIQUE_ENUM_GUARD = 10**7


class WeightedCompleteGraph:
    """Symmetric edge weights w_ij in [0,1] on K_n, zero diagonal.

    Degrees d_i = sum_j w_ij and the total W = sum_{i<j} w_ij are cached at
    construction; instances are immutable afterwards.
    """

    __slots__ = ("n", "w", "d", "W", "exact")

    def __init__(self, w: Sequence[Sequence], exact: bool | None = None):
        n = len(w)
        if n < 5:
            raise ValueError(f"need n >= 5, got {n}")
        for i in range(n):
            if len(w[i]) != n:
                raise ValueError("weight matrix must be square")
            if w[i][i] != 0:
                raise ValueError(f"nonzero diagonal at {i}")
            for j in range(n):
                if w[i][j] != w[j][i]:
                    raise ValueError(f"asymmetric at ({i},{j})")
                if not 0 <= w[i][j] <= 1:
                    raise ValueError(f"weight w[{i}][{j}]={w[i][j]} outside [0,1]")
        if exact is None:
            exact = any(isinstance(w[i][j], (Fraction, int)) for i in range(n) for j in range(n))
        self.n = n
        self.exact = exact
        if exact:
            self.w = [[Fraction(x) for x in row] for row in w]
        else:
            self.w = [[float(x) for x in row] for row in w]
        self.d = [sum(row) for row in self.w]
        self.W = sum(self.d) / (Fraction(2) if exact else 2.0)

    @staticmethod
    def uniform(n: int, value, exact: bool = True) -> "WeightedCompleteGraph":
        w = [[(0 if i == j else value) for j in range(n)] for i in range(n)]
        return WeightedCompleteGraph(w, exact=exact)

    @staticmethod
    def random_rational(n: int, rng, max_denominator: int = 12) -> "WeightedCompleteGraph":
        """Random exact instance; weights are num/den with small denominators."""
        w = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                den = rng.randint(1, max_denominator)
                num = rng.randint(0, den)
                w[i][j] = w[j][i] = Fraction(num, den)
        return WeightedCompleteGraph(w, exact=True)

    def to_float(self) -> "WeightedCompleteGraph":
        return WeightedCompleteGraph([[float(x) for x in row] for row in self.w], exact=False)


def triangle_weight(wkg: WeightedCompleteGraph, i: int, j: int, k: int):
    """Weight of the triangle {i,j,k}; symmetric in its arguments.

    May be negative on adversarial instances; nonnegativity is only guaranteed
    under the thresholded-weighting hypotheses.
    """
    if len({i, j, k}) != 3:
        raise ValueError(f"indices must be distinct, got {(i, j, k)}")
    n, w, d = wkg.n, wkg.w, wkg.d
    return (
        (w[i][j] + w[i][k] + w[j][k]) / (n - 4)
        - (d[i] + d[j] + d[k]) / ((n - 3) * (n - 4))
        + 2 * wkg.W / ((n - 2) * (n - 3) * (n - 4))
    )


def verify_edge_sum(wkg: WeightedCompleteGraph, i: int, j: int):
    """Sum of triangle weights over all triangles containing edge {i,j}.

    Equals w_ij identically in exact mode.
    """
    if i == j:
        raise ValueError("need i != j")
    return sum(triangle_weight(wkg, i, j, k) for k in range(wkg.n) if k not in (i, j))


def total_weight_sum(wkg: WeightedCompleteGraph):
    """Sum of all triangle weights; equals W/3 (each edge identity counted thrice)."""
    return sum(
        triangle_weight(wkg, i, j, k)
        for i, j, k in combinations(range(wkg.n), 3)
    )


def clique_weight(wkg: WeightedCompleteGraph, R: Sequence[int], r: int):
    """Weight of the r-clique on vertex set R; reduces to triangle_weight at r=3."""
    R = list(R)
    if len(R) != r or len(set(R)) != r:
        raise ValueError(f"R must be {r} distinct vertices, got {R}")
    if r < 3:
        raise ValueError(f"need r >= 3, got {r}")
    n = wkg.n
    if n < r + 2:
        raise ValueError(f"need n >= r + 2 = {r + 2}, got {n}")
    w, d = wkg.w, wkg.d
    edge_sum = sum(w[a][b] for a, b in combinations(R, 2))
    deg_sum = sum(d[v] for v in R)
    binom = comb(n - 4, r - 2)
    return (
        edge_sum / binom
        - (r - 2) * deg_sum / ((n - 3) * binom)
        + (r - 1) * (r - 2) * wkg.W / ((n - 2) * (n - 3) * binom)
    )


def verify_clique_edge_sum(wkg: WeightedCompleteGraph, i: int, j: int, r: int):
    """Sum of x_R over all r-cliques R containing edge {i,j}; equals w_ij exactly."""
    n = wkg.n
    if comb(n - 2, r - 2) > _CLIQUE_ENUM_GUARD:
        raise ValueError(f"C({n - 2},{r - 2}) exceeds enumeration guard {_CLIQUE_ENUM_GUARD}")
    rest = [v for v in range(n) if v not in (i, j)]
    return sum(
        clique_weight(wkg, [i, j, *extra], r)
        for extra in combinations(rest, r - 2)
    )


@dataclass(frozen=True)
class ThresholdParams:
    """Parameters a, b, c, eps, M for the thresholded reduced-graph weighting.

    The nonnegativity margin 3a - 3b/2 + c/3 - eps/M is precomputed; all
    thresholded weights are nonnegative whenever it is positive and the W1-W3
    hypotheses hold.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    eps: Fraction
    M: int
    margin: Fraction = field(init=False)

    def __post_init__(self):
        m = 3 * self.a - Fraction(3, 2) * self.b + Fraction(1, 3) * self.c - Fraction(self.eps) / self.M
        object.__setattr__(self, "margin", m)


@dataclass
class HypothesisAudit:
    """Which of the W1-W3 hypotheses hold for a given weighted instance."""

    w1_ok: bool
    w1_below_threshold_pairs: int
    w1_allowed_pairs: int
    w2_ok: bool
    w2_worst_degree: float
    w3_ok: bool
    w3_total: float

    @property
    def all_ok(self) -> bool:
        return self.w1_ok and self.w2_ok and self.w3_ok


def audit_hypotheses(wkg: WeightedCompleteGraph, params: ThresholdParams) -> HypothesisAudit:
    M = wkg.n
    aM = params.a * M
    below = sum(
        1 for i, j in combinations(range(M), 2) if wkg.w[i][j] < aM
    )
    allowed = params.eps * M * M
    d_cap = params.b * comb(M, 2)
    w_floor = params.c * comb(M, 3)
    return HypothesisAudit(
        w1_ok=below <= allowed,
        w1_below_threshold_pairs=below,
        w1_allowed_pairs=int(allowed),
        w2_ok=max(wkg.d) <= d_cap,
        w2_worst_degree=max(wkg.d),
        w3_ok=wkg.W >= w_floor,
        w3_total=wkg.W,
    )


def thresholded_weighting(wkg: WeightedCompleteGraph, params: ThresholdParams) -> Dict[Triple, object]:
    """Triangle weights on the reduced K_M, zeroed where any edge weight < aM.

    Returned map only contains the surviving triples.  Under the W1-W3
    hypotheses and a positive margin all values are nonnegative; callers on
    real instances should follow with clamp_nonnegative.
    """
    M = wkg.n
    if M < 5:
        raise ValueError(f"need M >= 5, got {M}")
    aM = params.a * M
    if not wkg.exact:
        aM = float(aM)
    out: Dict[Triple, object] = {}
    for i, j, k in combinations(range(M), 3):
        if wkg.w[i][j] >= aM and wkg.w[j][k] >= aM and wkg.w[i][k] >= aM:
            out[(i, j, k)] = triangle_weight(wkg, i, j, k)
    return out


def clamp_nonnegative(x: Dict[Triple, object]) -> Tuple[Dict[Triple, object], object]:
    """Zero out negative entries; returns (clamped map, total removed mass >= 0)."""
    clamped_mass = 0
    out = {}
    for key, val in x.items():
        if val < 0:
            clamped_mass -= val
            out[key] = type(val)(0)
        else:
            out[key] = val
    return out, clamped_mass
