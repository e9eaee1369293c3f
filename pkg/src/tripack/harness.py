"""Seeded experiment driver: threshold sweeps, identity batches, construction checks.

Determinism contract: the same config yields the same rows and byte-identical
CSV regardless of worker-thread count.  Per-cell seeds are a 64-bit mix of the
base seed, the p value and the repetition index, so any grid cell can be
re-run in isolation.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import generators
from .bounds import bipartite_uncovered_bound, expected_bipartite_bound, parse_rational, threshold_upper
from .graphs import Graph
from .packing import (
    IntegralPacking,
    PipelineConfig,
    brute_force_max_pack,
    fractional_pack_lp,
    greedy_pack,
    local_search_improve,
    mix64,
    partition_pipeline_pack,
    round_to_integral,
)
from .weighting import (
    WeightedCompleteGraph,
    total_weight_sum,
    verify_clique_edge_sum,
    verify_edge_sum,
)

METHODS = ("greedy", "ls", "bruteforce", "lp", "pipeline", "pipeline+round")


@dataclass
class SweepConfig:
    d: Fraction
    family: str
    n: int
    p_grid: List[Fraction]
    reps: int = 1
    base_seed: int = 0
    method: str = "ls"
    M: int = 20
    eps: float = 0.05
    C_cap: float = 2.0
    ls_budget: int = 100000

    def __post_init__(self):
        self.d = parse_rational(self.d)
        self.p_grid = [parse_rational(p) for p in self.p_grid]
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if any(not 0 <= p <= 1 for p in self.p_grid):
            raise ValueError("p_grid values must lie in [0,1]")
        if any(b <= a for a, b in zip(self.p_grid, self.p_grid[1:])):
            raise ValueError("p_grid must be strictly increasing")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.family not in generators.FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")


@dataclass
class ExperimentRow:
    d: Fraction
    p: Fraction
    n: int
    seed: int
    e_total: int = 0
    packing_size: int = 0
    uncovered: int = 0
    uncovered_fraction: float = 0.0
    fractional_value: Optional[float] = None
    lp_upper: Optional[float] = None
    bipartite_bound: Optional[int] = None
    clamped_mass: Optional[float] = None
    repair_mass: Optional[float] = None
    runtime_ms: float = 0.0
    skipped: bool = False
    reason: str = ""

    def check(self) -> None:
        if self.skipped:
            return
        if self.uncovered != self.e_total - 3 * self.packing_size:
            raise AssertionError("uncovered != e_total - 3*packing_size")
        if self.e_total:
            expect = self.uncovered / self.e_total
            if abs(self.uncovered_fraction - expect) > 1e-12:
                raise AssertionError("uncovered_fraction inconsistent")
        if self.bipartite_bound is not None and self.uncovered < self.bipartite_bound:
            raise AssertionError("packing beats the bipartite obstruction bound")


CSV_FIELDS = ["d", "p", "n", "seed", "e_total", "packing_size", "uncovered",
              "uncovered_fraction", "fractional_value", "lp_upper",
              "bipartite_bound", "clamped_mass", "repair_mass", "skipped", "reason"]


def cell_seed(base_seed: int, p: Fraction, rep: int) -> int:
    return mix64(base_seed, p.numerator, p.denominator, rep)


def run_cell(cfg: SweepConfig, p: Fraction, rep: int) -> ExperimentRow:
    seed = cell_seed(cfg.base_seed, p, rep)
    row = ExperimentRow(d=cfg.d, p=p, n=cfg.n, seed=seed)
    t0 = time.perf_counter()
    try:
        base, side = generators.generate_family(cfg.family, cfg.n, cfg.d, mix64(seed, 1))
    except (ValueError, RuntimeError) as exc:
        row.skipped = True
        row.reason = str(exc)
        return row
    g = generators.perturb(base, float(p), mix64(seed, 2))
    row.e_total = g.edge_count
    pk: Optional[IntegralPacking] = None
    if cfg.method == "greedy":
        pk = greedy_pack(g, mix64(seed, 3))
    elif cfg.method == "ls":
        pk = local_search_improve(greedy_pack(g, mix64(seed, 3)), g,
                                  budget=cfg.ls_budget, seed=mix64(seed, 4))
    elif cfg.method == "bruteforce":
        pk = brute_force_max_pack(g)
    elif cfg.method == "lp":
        fr = fractional_pack_lp(g)
        row.fractional_value = fr.value
        row.lp_upper = fr.lp_upper
    elif cfg.method in ("pipeline", "pipeline+round"):
        pcfg = PipelineConfig(M=cfg.M, eps=cfg.eps, C_cap=cfg.C_cap, seed=mix64(seed, 5))
        fr = partition_pipeline_pack(g, cfg.d, p, pcfg)
        row.fractional_value = fr.value
        row.clamped_mass = fr.clamped_mass
        row.repair_mass = fr.repair_mass
        if cfg.method == "pipeline+round":
            pk = round_to_integral(fr, seed=mix64(seed, 6), ls_budget=cfg.ls_budget)
    if pk is not None:
        row.packing_size = len(pk)
        row.uncovered = pk.uncovered
    else:
        row.uncovered = row.e_total
    row.uncovered_fraction = row.uncovered / row.e_total if row.e_total else 0.0
    if side is not None:
        rest = [v for v in range(cfg.n) if v not in set(side)]
        row.bipartite_bound = bipartite_uncovered_bound(g, side, rest)
    row.runtime_ms = (time.perf_counter() - t0) * 1000
    row.check()
    return row


def run_sweep(cfg: SweepConfig, threads: int = 1) -> List[ExperimentRow]:
    cells = [(p, rep) for p in cfg.p_grid for rep in range(cfg.reps)]
    if threads <= 1:
        return [run_cell(cfg, p, rep) for p, rep in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run_cell, cfg, p, rep) for p, rep in cells]
        return [f.result() for f in futures]  # grid order, not completion order


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (Fraction, float)):
        return f"{float(x):.6f}"
    return str(x)


def emit_csv(rows: Sequence[ExperimentRow], path) -> None:
    """Deterministic CSV: declared field order, rationals at 6 decimals.

    runtime_ms is deliberately not emitted; wall time would break the
    byte-identical re-run contract.
    """
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(CSV_FIELDS) + "\n")
        for row in rows:
            row.check()
            fh.write(",".join(_fmt(getattr(row, f)) for f in CSV_FIELDS) + "\n")


def load_sweep_config(path) -> SweepConfig:
    """Flat key=value config: '#' comments, comma lists, 'num/den' rationals."""
    raw: Dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            raw[key.strip()] = val.strip()
    required = {"d", "family", "n", "p_grid"}
    missing = required - raw.keys()
    if missing:
        raise ValueError(f"config missing keys: {sorted(missing)}")
    kwargs: Dict[str, object] = {
        "d": parse_rational(raw["d"]),
        "family": raw["family"],
        "n": int(raw["n"]),
        "p_grid": [parse_rational(x) for x in raw["p_grid"].split(",")],
    }
    for key, conv in (("reps", int), ("base_seed", int), ("method", str),
                      ("M", int), ("eps", float), ("C_cap", float),
                      ("ls_budget", int)):
        if key in raw:
            kwargs[key] = conv(raw[key])
    unknown = raw.keys() - required - {"reps", "base_seed", "method", "M", "eps",
                                       "C_cap", "ls_budget"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return SweepConfig(**kwargs)


# ---------------------------------------------------------------------------
# identity verification batches


@dataclass
class VerifyReport:
    trials: int = 0
    edge_checks: int = 0
    clique_checks: int = 0
    total_sum_checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"edge-sum identity:   {self.edge_checks} checks",
            f"clique-sum identity: {self.clique_checks} checks",
            f"total-sum identity:  {self.total_sum_checks} checks",
        ]
        if self.failures:
            lines.append(f"FAIL ({len(self.failures)} failures); first: {self.failures[0]}")
        else:
            lines.append(f"PASS ({self.trials} trials)")
        return "\n".join(lines)


def verify_batch(n_range: Sequence[int], trials: int, r_list: Sequence[int],
                 seed: int, corrupt: bool = False,
                 clique_edges_per_trial: int = 3) -> VerifyReport:
    """Exact identity checks on random rational instances.

    corrupt=True perturbs one weight after the degree cache is built, as a
    self-test that the checks can actually fail.
    """
    rng = random.Random(seed)
    report = VerifyReport()
    for t in range(trials):
        n = rng.choice(list(n_range))
        wkg = WeightedCompleteGraph.random_rational(n, rng)
        if corrupt:
            i, j = rng.sample(range(n), 2)
            wkg.w[i][j] = wkg.w[j][i] = wkg.w[i][j] + Fraction(1, 7)
        report.trials += 1
        for i in range(n):
            for j in range(i + 1, n):
                got = verify_edge_sum(wkg, i, j)
                report.edge_checks += 1
                if got != wkg.w[i][j]:
                    report.failures.append(
                        f"trial {t}: edge-sum({i},{j}) = {got} != {wkg.w[i][j]} (n={n})")
        total = total_weight_sum(wkg)
        report.total_sum_checks += 1
        if total != wkg.W / 3:
            report.failures.append(f"trial {t}: total sum {total} != W/3 (n={n})")
        for r in r_list:
            if n < r + 2:
                continue
            for _ in range(clique_edges_per_trial):
                i, j = sorted(rng.sample(range(n), 2))
                got = verify_clique_edge_sum(wkg, i, j, r)
                report.clique_checks += 1
                if got != wkg.w[i][j]:
                    report.failures.append(
                        f"trial {t}: clique-sum r={r} ({i},{j}) = {got} != {wkg.w[i][j]} (n={n})")
        if report.failures and corrupt:
            break
    return report


# ---------------------------------------------------------------------------
# extremal construction check


def construction_check(d, p, n: int, seed: int, ls_budget: int = 100000) -> Dict[str, object]:
    """Build the extremal instance for (d, p, n), pack it hard, and compare the
    uncovered count against the deterministic bipartite bound and its expected
    value."""
    d = parse_rational(d)
    p = parse_rational(p)
    dn = d * n
    if dn.denominator != 1:
        raise ValueError(f"dn = {dn} is not an integer")
    if d <= Fraction(1, 2):
        base, side = generators.gen_bipartite_regular(n, int(dn))
    else:
        base, side = generators.gen_extremal_mid(n, d)
    g = generators.perturb(base, float(p), mix64(seed, 2))
    pk = local_search_improve(greedy_pack(g, mix64(seed, 3)), g,
                              budget=ls_budget, seed=mix64(seed, 4))
    pk.audit()
    rest = [v for v in range(n) if v not in set(side)]
    bound = bipartite_uncovered_bound(g, side, rest)
    expected = expected_bipartite_bound(d, p, n)
    c = threshold_upper(d) - p
    return {
        "d": d,
        "p": p,
        "n": n,
        "e_total": g.edge_count,
        "packing_size": len(pk),
        "uncovered": pk.uncovered,
        "bipartite_bound": bound,
        "expected_bound": float(expected),
        "c": c,
        "c_n2_over_4": float(c * n * n / 4),
        "obstructed": bound > 0,
        "bound_respected": pk.uncovered >= bound,
    }
