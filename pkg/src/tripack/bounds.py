"""Closed-form threshold arithmetic and the bipartite uncovered-edge bound.

Everything here is exact rational arithmetic; branch boundaries (1/2, 3/4,
0.83) matter to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .graphs import Graph, cross_edge_count, induced_edge_count, mask_of

# Best known unconditional minimum-degree constant for perfect triangle
# decompositions (Delcourt-Postle); the branch arithmetic below uses the
# rounded 83/100 in line with the delta(G) >= 0.83n usage.
DELCOURT_POSTLE_CONSTANT = 0.82733
BLACKBOX_DEGREE = Fraction(83, 100)

HALF = Fraction(1, 2)
THREE_QUARTERS = Fraction(3, 4)


def parse_rational(s) -> Fraction:
    """Accept "num/den" strings, decimal strings, ints, floats, Fractions."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s).limit_denominator(10**9)
    s = str(s).strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(s)


def _check_d(d: Fraction) -> Fraction:
    d = parse_rational(d)
    if not 0 < d < 1:
        raise ValueError(f"d must be in (0,1), got {d}")
    return d


def threshold_upper(d) -> Fraction:
    """Unconditional upper bound 2d/(1+2d) on the packing threshold."""
    d = _check_d(d)
    return 2 * d / (1 + 2 * d)


def threshold_lower(d) -> Fraction:
    """Extremal lower bound: 2d/(1+2d), then (3-4d)/(4-4d), then 0."""
    d = _check_d(d)
    if d <= HALF:
        return 2 * d / (1 + 2 * d)
    if d <= THREE_QUARTERS:
        return (3 - 4 * d) / (4 - 4 * d)
    return Fraction(0)


def conditional_upper(d) -> Tuple[Fraction, Fraction]:
    """(conditional, blackbox) upper bounds for d > 1/2.

    The first assumes the 3n/4 decomposition conjecture; the second only uses
    the 0.83n minimum-degree theorem.
    """
    d = _check_d(d)
    if d <= HALF:
        raise ValueError(f"conditional_upper needs d > 1/2, got {d}")
    cond = (3 - 4 * d) / (4 - 4 * d) if d <= THREE_QUARTERS else Fraction(0)
    black = (BLACKBOX_DEGREE - d) / (1 - d) if d <= BLACKBOX_DEGREE else Fraction(0)
    return cond, black


def q_of(d, p) -> Fraction:
    """Expected edge density of the perturbed graph: q = p + (1-p)d."""
    d = parse_rational(d)
    p = parse_rational(p)
    if not (0 <= d <= 1 and 0 <= p <= 1):
        raise ValueError(f"d, p must be in [0,1], got d={d}, p={p}")
    return p + (1 - p) * d


@dataclass(frozen=True)
class ThresholdProfile:
    d: Fraction
    upper: Fraction
    lower: Fraction
    conditional_upper: Fraction | None
    blackbox_upper: Fraction | None

    def csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else f"{float(x):.6f}"

        return ",".join([fmt(self.d), fmt(self.upper), fmt(self.lower),
                         fmt(self.conditional_upper), fmt(self.blackbox_upper)])


def threshold_profile(d) -> ThresholdProfile:
    d = _check_d(d)
    if d > HALF:
        cond, black = conditional_upper(d)
    else:
        cond, black = None, None
    return ThresholdProfile(
        d=d,
        upper=threshold_upper(d),
        lower=threshold_lower(d),
        conditional_upper=cond,
        blackbox_upper=black,
    )


def bipartite_uncovered_bound(g: Graph, X: Iterable[int], Y: Iterable[int]) -> int:
    """Lower bound on uncovered edges of every triangle packing of g.

    Every triangle has two vertices in the same part, so a packing uses at
    most e(g[X]) + e(g[Y]) triangles; the rest of the edges stay uncovered.
    """
    X = list(X)
    Y = list(Y)
    if mask_of(X) & mask_of(Y) or len(X) + len(Y) != g.n:
        raise ValueError("X, Y must partition the vertex set")
    intra = induced_edge_count(g, X) + induced_edge_count(g, Y)
    return max(0, g.edge_count - 3 * intra)


def expected_bipartite_bound(d, p, n: int) -> Fraction:
    """Expected value (2d - p - 2dp) n^2 / 4 of the bound on a perturbed B_d."""
    d = parse_rational(d)
    p = parse_rational(p)
    return (2 * d - p - 2 * d * p) * n * n / 4


def mid_density_check(d, p) -> Tuple[bool, Fraction]:
    """Margin 2p(1-d) + 2(d-1/2) - 1/2; nonnegative iff p >= (3-4d)/(4-4d)."""
    d = parse_rational(d)
    p = parse_rational(p)
    if not HALF < d <= THREE_QUARTERS:
        raise ValueError(f"d must be in (1/2, 3/4], got {d}")
    margin = 2 * p * (1 - d) + 2 * (d - HALF) - HALF
    return margin >= 0, margin
