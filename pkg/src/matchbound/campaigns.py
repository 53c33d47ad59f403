"""Seeded counterexample-search campaigns.

A violation is a structured finding, never an assertion failure: campaigns
record it with a self-contained graph serialization and keep running.
Per-sample seeds are seed + index, so samples are reproducible in isolation.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .bounds import genminc_bound, log2_int, wild_bound
from .counting import matching_profile, umc_extremal_profile
from .errors import CapExceeded
from .graphs import BipartiteGraph, emit_bipartite, emit_graph6, random_regular

SLACK_EPS = 1e-9
SHARP_THRESHOLD = 0.01
GENERATOR_RETRY_CAP = 1000


@dataclass
class CampaignConfig:
    conjecture: str                      # "umc" | "genminc" | "wild"
    samples: int
    seed: int
    n_vertices: int | None = None        # umc: N
    d: int | None = None                 # umc: degree
    ell: int | None = None               # genminc/wild: |X| = ell
    size_y: int | None = None            # genminc/wild: M
    edge_prob: float = 0.5
    family: str = "random"               # "random" | "sharp"
    ell_values: list[int] | None = None  # umc: None means all 0..N/2
    phi_interp: str = "gamma"
    strict: bool = False

    def to_json_dict(self) -> dict:
        return {
            "conjecture": self.conjecture,
            "samples": self.samples,
            "seed": self.seed,
            "N": self.n_vertices,
            "d": self.d,
            "ell": self.ell,
            "M": self.size_y,
            "edgeProb": self.edge_prob,
            "family": self.family,
            "ellValues": self.ell_values,
            "phiInterp": self.phi_interp,
        }


@dataclass
class Violation:
    graph: str          # graph6 (umc) or bipartite text format (genminc/wild)
    ell: int
    bound: str
    lhs_bits: float | None
    rhs_bits: float | None
    lhs_count: str | None = None
    rhs_count: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "graph": self.graph,
            "ell": self.ell,
            "bound": self.bound,
            "lhsBits": self.lhs_bits,
            "rhsBits": self.rhs_bits,
            "lhsCount": self.lhs_count,
            "rhsCount": self.rhs_count,
        }


@dataclass
class CampaignReport:
    conjecture: str
    config: CampaignConfig
    instances: int = 0
    worst_slack_bits: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    sharp_candidates: list = field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def min_slack(self) -> float | None:
        finite = [s for s in self.worst_slack_bits if s is not None]
        return min(finite) if finite else None

    def to_json_dict(self, include_runtime: bool = True) -> dict:
        doc = {
            "schema": 1,
            "conjecture": self.conjecture,
            "config": self.config.to_json_dict(),
            "instances": self.instances,
            "worstSlackBits": self.worst_slack_bits,
            "violations": [v.to_json_dict() for v in self.violations],
            "sharpCandidates": self.sharp_candidates,
        }
        if include_runtime:
            doc["runtimeSeconds"] = self.runtime_seconds
        return doc

    def to_json(self, include_runtime: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_runtime), indent=2)


def run_umc_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Compare seeded d-regular samples against the disjoint-K_{d,d} profile,
    exact integer against exact integer, for every requested ell."""
    if cfg.conjecture != "umc":
        raise ValueError(f"not a umc config: {cfg.conjecture!r}")
    n, d = cfg.n_vertices, cfg.d
    if n is None or d is None:
        raise ValueError("umc campaigns need N and d")
    if d < 1 or n % (2 * d) != 0:
        raise ValueError(f"2d = {2 * d} must divide N = {n}")
    if n > 64:
        raise CapExceeded("exact counting is limited to 64 vertices")
    start = time.perf_counter()
    extremal = umc_extremal_profile(n, d)
    ells = cfg.ell_values if cfg.ell_values is not None else list(range(n // 2 + 1))
    if any(not 0 <= l <= n // 2 for l in ells):
        raise ValueError(f"ell values must lie in 0..{n // 2}")
    report = CampaignReport(conjecture="umc", config=cfg)
    for idx in range(cfg.samples):
        g = random_regular(n, d, cfg.seed + idx)
        prof = matching_profile(g)
        worst = None
        for ell in ells:
            cnt = prof[ell]
            ext = extremal[ell]
            if cnt > ext:
                report.violations.append(Violation(
                    graph=emit_graph6(g), ell=ell, bound="umc-extremal",
                    lhs_bits=log2_int(cnt), rhs_bits=log2_int(ext),
                    lhs_count=str(cnt), rhs_count=str(ext)))
            if cnt > 0:
                slack = log2_int(ext) - log2_int(cnt)
                if worst is None or slack < worst:
                    worst = slack
        report.worst_slack_bits.append(worst)
        report.instances += 1
    report.runtime_seconds = time.perf_counter() - start
    return report


def _random_instance(ell: int, m: int, p: float, seed) -> BipartiteGraph:
    """A seeded bipartite instance with |X| = ell, no isolated X-vertex, and
    at least one X-saturating matching."""
    rng = random.Random(seed)
    for _ in range(GENERATOR_RETRY_CAP):
        edges = [(x, y) for x in range(ell) for y in range(m) if rng.random() < p]
        cand = BipartiteGraph(ell, m, edges)
        if min(cand.degrees_x) < 1:
            continue
        prof = matching_profile(cand.to_graph())
        if prof[ell] > 0:
            return cand
    raise CapExceeded(
        f"no usable instance in {GENERATOR_RETRY_CAP} draws (ell={ell}, M={m}, p={p})")


def _sharp_family(ell: int, m: int, limit: int) -> list[BipartiteGraph]:
    """Disjoint unions of complete bipartite blocks K_{a, a*M/ell} with part
    ratios all equal to ell/M; the generalized bound is exact on these."""
    parts_ok = [a for a in range(1, ell + 1) if (a * m) % ell == 0]
    partitions: list[list[int]] = []

    def descend(remaining: int, biggest: int, chosen: list[int]):
        if remaining == 0:
            partitions.append(list(chosen))
            return
        for a in parts_ok:
            if a <= biggest and a <= remaining:
                chosen.append(a)
                descend(remaining - a, a, chosen)
                chosen.pop()

    descend(ell, ell, [])
    instances = []
    for parts in partitions[:limit]:
        edges = []
        x_off = 0
        y_off = 0
        for a in parts:
            b_size = a * m // ell
            edges.extend((x_off + i, y_off + j)
                         for i in range(a) for j in range(b_size))
            x_off += a
            y_off += b_size
        instances.append(BipartiteGraph(ell, m, edges))
    return instances


def run_genminc_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Compare exact log2 counts against the generalized per-degree bound
    (and the entropy-argument variant for "wild" configs)."""
    if cfg.conjecture not in ("genminc", "wild"):
        raise ValueError(f"not a genminc/wild config: {cfg.conjecture!r}")
    ell, m = cfg.ell, cfg.size_y
    if ell is None or m is None:
        raise ValueError("genminc campaigns need ell and M")
    if not 1 <= ell <= m:
        raise ValueError(f"need 1 <= ell <= M, got ell={ell}, M={m}")
    start = time.perf_counter()
    report = CampaignReport(conjecture=cfg.conjecture, config=cfg)

    if cfg.family == "sharp":
        instances = _sharp_family(ell, m, cfg.samples)
    elif cfg.family == "random":
        instances = [_random_instance(ell, m, cfg.edge_prob, cfg.seed + idx)
                     for idx in range(cfg.samples)]
    else:
        raise ValueError(f"unknown family {cfg.family!r}")

    for inst in instances:
        cnt = matching_profile(inst.to_graph())[ell]
        exact = log2_int(cnt)
        worst = None
        for name, value in _bounds_for(cfg, inst, ell):
            slack = value - exact
            if worst is None or slack < worst:
                worst = slack
            if slack < -SLACK_EPS:
                report.violations.append(Violation(
                    graph=emit_bipartite(inst), ell=ell, bound=name,
                    lhs_bits=exact, rhs_bits=value, lhs_count=str(cnt)))
            elif slack < SHARP_THRESHOLD:
                report.sharp_candidates.append(
                    {"index": report.instances, "bound": name, "slackBits": slack})
        report.worst_slack_bits.append(worst)
        report.instances += 1
    report.runtime_seconds = time.perf_counter() - start
    return report


def _bounds_for(cfg: CampaignConfig, inst: BipartiteGraph, ell: int):
    yield "genminc", genminc_bound(inst, ell)
    if cfg.conjecture == "wild":
        yield f"wild-{cfg.phi_interp}", wild_bound(inst, ell, cfg.phi_interp)


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    if cfg.conjecture == "umc":
        return run_umc_campaign(cfg)
    return run_genminc_campaign(cfg)
