"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from statistics import mean

import pytest

from tripack.bounds import threshold_lower, threshold_upper
from tripack.generators import gen_gnp, generate_family, perturb
from tripack.graphs import Graph
from tripack.harness import SweepConfig, cell_seed, emit_csv, run_sweep
from tripack.packing import (
    PipelineConfig,
    brute_force_max_pack,
    fractional_pack_lp,
    greedy_pack,
    local_search_improve,
    mix64,
    partition_pipeline_pack,
    round_to_integral,
)
from tripack.weighting import (
    WeightedCompleteGraph,
    clique_weight,
    total_weight_sum,
    triangle_weight,
    verify_clique_edge_sum,
    verify_edge_sum,
)


def report(num: int, name: str, ok: bool, detail: str, elapsed: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:2d}] {status}  {name}: {detail}  ({elapsed:.1f}s)")
    assert ok, f"criterion {num} ({name}): {detail}"


@pytest.fixture(scope="module")
def rational_instances():
    rng = random.Random(20260823)
    return [WeightedCompleteGraph.random_rational(rng.randint(5, 20), rng)
            for _ in range(200)]


@pytest.fixture(scope="module")
def small_random_graphs():
    return [gen_gnp(8, 0.5, seed=1000 + s) for s in range(50)]


@pytest.fixture(scope="module")
def oracle_values(small_random_graphs):
    return [len(brute_force_max_pack(g)) for g in small_random_graphs]


def test_criterion_01_edge_sum_identity(rational_instances):
    t0 = time.perf_counter()
    checked = 0
    for wkg in rational_instances:
        for i in range(wkg.n):
            for j in range(i + 1, wkg.n):
                assert verify_edge_sum(wkg, i, j) == wkg.w[i][j]
                checked += 1
    elapsed = time.perf_counter() - t0
    report(1, "exact per-edge triangle-weight sums", elapsed < 10,
           f"{checked} edges over 200 instances, zero error", elapsed)


def test_criterion_02_clique_sum_identity():
    t0 = time.perf_counter()
    rng = random.Random(52)
    checked = 0
    for r in (3, 4, 5):
        for n in range(r + 2, 13):
            for _ in range(20):
                wkg = WeightedCompleteGraph.random_rational(n, rng)
                i, j = sorted(rng.sample(range(n), 2))
                assert verify_clique_edge_sum(wkg, i, j, r) == wkg.w[i][j]
                checked += 1
    # order-3 clique weights must bit-match the triangle formula
    for _ in range(100):
        n = rng.randint(5, 12)
        wkg = WeightedCompleteGraph.random_rational(n, rng)
        R = rng.sample(range(n), 3)
        assert clique_weight(wkg, R, 3) == triangle_weight(wkg, *R)
    elapsed = time.perf_counter() - t0
    report(2, "exact per-edge clique-weight sums (r=3,4,5)", elapsed < 60,
           f"{checked} edge checks plus 100 r=3 bit-match checks", elapsed)


def test_criterion_03_total_sum_identity(rational_instances):
    t0 = time.perf_counter()
    for wkg in rational_instances:
        assert total_weight_sum(wkg) == wkg.W / 3
    elapsed = time.perf_counter() - t0
    report(3, "total triangle weight equals W/3", True,
           f"exact on all {len(rational_instances)} instances", elapsed)


def test_criterion_04_oracle_agreement(small_random_graphs, oracle_values):
    t0 = time.perf_counter()
    assert len(brute_force_max_pack(Graph.complete(5))) == 2
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert len(brute_force_max_pack(c6)) == 0
    assert len(brute_force_max_pack(Graph.complete(7))) == 7
    assert len(brute_force_max_pack(Graph.complete(9))) == 12
    agree = 0
    for s, (g, nu) in enumerate(zip(small_random_graphs, oracle_values)):
        h = len(local_search_improve(greedy_pack(g, seed=s), g,
                                     budget=3000, seed=s + 1))
        assert h <= nu
        agree += h == nu
    elapsed = time.perf_counter() - t0
    ok = agree >= 40 and elapsed < 120
    report(4, "integral packer oracle agreement", ok,
           f"heuristic matched optimum on {agree}/50 instances", elapsed)


def test_criterion_05_fractional_sandwich(small_random_graphs, oracle_values):
    t0 = time.perf_counter()
    fp4 = fractional_pack_lp(Graph.complete(4))
    fp4.audit(tol=1e-9)
    assert fp4.value >= 2 - 1e-4
    fp5 = fractional_pack_lp(Graph.complete(5))
    fp5.audit(tol=1e-9)
    assert fp5.value >= 10 / 3 - 1e-3
    worst_gap = 0.0
    for g, nu in zip(small_random_graphs, oracle_values):
        fp = fractional_pack_lp(g)
        fp.audit(tol=1e-9)
        assert nu <= fp.value + 1e-6
        assert fp.value <= g.edge_count / 3 + 1e-6
        worst_gap = max(worst_gap, fp.value - nu)
    elapsed = time.perf_counter() - t0
    report(5, "fractional value sandwich", True,
           f"loads <= 1+1e-9 everywhere, max fractional-integral gap {worst_gap:.3f}",
           elapsed)


def test_criterion_06_above_threshold_packing():
    t0 = time.perf_counter()
    d, p, n, M, reps = Fraction(3, 10), Fraction(11, 20), 600, 20, 3
    ratios, fracs, per_rep = [], [], []
    for rep in range(reps):
        t_rep = time.perf_counter()
        seed = cell_seed(2026, p, rep)
        base, _ = generate_family("random-configuration", n, d, mix64(seed, 1))
        g = perturb(base, float(p), mix64(seed, 2))
        cfg = PipelineConfig(M=M, eps=0.05, C_cap=2.0, seed=mix64(seed, 5))
        fr = partition_pipeline_pack(g, d, p, cfg)
        fr.audit()
        pk = round_to_integral(fr, seed=mix64(seed, 6))
        pk.audit()
        ratios.append(fr.value / (g.edge_count / 3))
        fracs.append(pk.uncovered / g.edge_count)
        per_rep.append(time.perf_counter() - t_rep)
    elapsed = time.perf_counter() - t0
    value_ok = min(ratios) >= 0.85
    round_ok = max(fracs) <= 0.10
    time_ok = max(per_rep) < 300
    report(6, "above-threshold pipeline packing", value_ok and round_ok and time_ok,
           f"fractional value ratio min {min(ratios):.4f} (need >= 0.85), "
           f"rounded uncovered fraction max {max(fracs):.4f} (need <= 0.10)",
           elapsed)


def test_criterion_07_below_threshold_obstruction():
    t0 = time.perf_counter()
    d, p, n = Fraction(3, 10), Fraction(1, 5), 400
    cfg = SweepConfig(d=d, family="bipartite-circulant", n=n, p_grid=[p],
                      reps=3, base_seed=11, method="ls")
    rows = run_sweep(cfg, threads=1)
    floor = 0.8 * float((2 * d - p - 2 * d * p) * n * n / 4)
    ok = all(not r.skipped and r.uncovered >= r.bipartite_bound >= floor
             for r in rows)
    elapsed = time.perf_counter() - t0
    report(7, "below-threshold bipartite obstruction", ok and elapsed < 120,
           f"uncovered >= bound >= {floor:.0f} on all {len(rows)} reps "
           f"(bounds {[r.bipartite_bound for r in rows]})", elapsed)


def test_criterion_08_threshold_curve_shape():
    t0 = time.perf_counter()
    grid = [Fraction(x, 100) for x in (15, 25, 35, 45, 55)]
    cfg = SweepConfig(d=Fraction(3, 10), family="bipartite-circulant", n=600,
                      p_grid=grid, reps=3, base_seed=23, method="ls")
    rows = run_sweep(cfg, threads=4)
    means = {q: mean(r.uncovered_fraction for r in rows if r.p == q) for q in grid}
    curve = [means[q] for q in grid]
    monotone = all(curve[i] >= curve[i + 1] - 1e-12 for i in range(len(curve) - 1))
    drops = means[Fraction(55, 100)] < means[Fraction(25, 100)] / 2
    elapsed = time.perf_counter() - t0
    report(8, "threshold curve shape", monotone and drops and elapsed < 900,
           "mean uncovered fraction " + ", ".join(f"{v:.4f}" for v in curve),
           elapsed)


def test_criterion_09_bounds_arithmetic():
    t0 = time.perf_counter()
    assert threshold_upper(Fraction(1, 2)) == Fraction(1, 2)
    assert threshold_lower(Fraction(3, 4)) == 0
    # branch agreement at both breakpoints
    assert threshold_lower(Fraction(1, 2)) == threshold_upper(Fraction(1, 2))
    assert (3 - 4 * Fraction(3, 4)) / (4 - 4 * Fraction(3, 4)) == 0
    checked = 0
    for i in range(1, 11):
        d = Fraction(i, 11)
        for j in range(10):
            pp = Fraction(j, 9)
            assert 2 * d - pp - 2 * d * pp == (1 + 2 * d) * (threshold_upper(d) - pp)
            checked += 1
    elapsed = time.perf_counter() - t0
    report(9, "threshold arithmetic", elapsed < 1,
           f"branch values and factorization identity exact on {checked} grid points",
           elapsed)


def test_criterion_10_sweep_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = SweepConfig(d=Fraction(3, 10), family="circulant", n=120,
                      p_grid=[Fraction(1, 10), Fraction(3, 10)], reps=2,
                      base_seed=5, method="ls")
    outputs = []
    for idx, threads in enumerate((1, 8, 1)):
        path = tmp_path / f"sweep_{idx}.csv"
        emit_csv(run_sweep(cfg, threads=threads), path)
        outputs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2]
    elapsed = time.perf_counter() - t0
    report(10, "byte-identical sweeps across reruns and thread counts", ok,
           f"{len(outputs[0])} CSV bytes compared", elapsed)
