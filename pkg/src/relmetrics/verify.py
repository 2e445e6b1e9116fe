"""Numerical verification engine for relative-distance metric claims.

The engine answers one question in several guises: *is this distance function
a metric, and if not, show me a triple that breaks the triangle inequality*.
It provides

* ``triangle_search_1d``  -- counterexample search for |x-y| / M(|x|, |y|) on
  the line, combining deterministic probe families (sign triples, vanishing
  and exploding midpoints, squared-argument triples), log-spaced coarse grids
  and coordinate-wise golden-section refinement;
* ``triangle_search_nd``  -- seeded random search for arbitrary distance
  functions on R^n, with the same refinement;
* ``mi_check`` / ``convexity_check`` -- sampled monotonicity predicates
  (increasing with decreasing ratio; three-point convexity);
* ``strong_order_check``  -- is the trace ratio t_M / t_N increasing on
  [1, inf)?  Constant ratios count as increasing;
* ``plem_conditions``     -- the sufficient and the two necessary trace-ratio
  conditions for homogeneous weights against the quasimean family S_alpha;
* ``classify_pq_region``  -- labels a (p, q) grid of power-mean weights as
  metric / non-metric / boundary-band, with a re-verifiable witness for every
  non-metric cell;
* ``lambda_sharpness``    -- probes the sharp constant of the log-damped
  scaled-mean family for negative orders.

A "violation found" answer is conclusive (the witness re-evaluates).  A "no
violation found" answer is evidence under the configured budget, not a proof.

Searches are pure functions of their arguments; identical configurations
(including the seed) produce identical reports, and the grid sweeps are
evaluated as vectorized batches with a deterministic max-margin reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, InvalidParameterError
from .means import (
    PowerMeanPower,
    ScaledPowerMean,
    WeightFunction,
    stolarsky_weight,
    weight_eval,
)
from .metrics import MetricKind

__all__ = [
    "SearchConfig",
    "ViolationReport",
    "MIWitness",
    "ConvexityWitness",
    "RatioDecrease",
    "OrderReport",
    "PlemReport",
    "RegionCell",
    "RegionTable",
    "triangle_search_1d",
    "triangle_search_nd",
    "triangle_search_transformed",
    "mi_check",
    "convexity_check",
    "strong_order_check",
    "plem_conditions",
    "classify_pq_region",
    "lambda_sharpness",
    "pq_threshold",
    "pq_is_metric",
    "pq_frontier_distance",
    "FF_SUITE",
]

_EPS = np.finfo(float).eps
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# Configuration and report types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    """Budgets, ranges and tolerances for all searches.

    ``ranges`` holds one positive (lo, hi) magnitude interval per triple
    variable; grids are log-spaced over it.  ``violation_tolerance`` is
    relative: a margin counts only if it exceeds tol * max(lhs, rhs, 1).
    """

    ranges: Tuple[Tuple[float, float], ...] = ((1e-6, 1e6),) * 3
    coarse_grid_points: int = 64
    refine_iterations: int = 60
    violation_tolerance: float = 1e-9
    seed: int = 0
    random_triples: int = 100_000

    def __post_init__(self):
        if len(self.ranges) != 3:
            raise ConfigError("exactly one range per triple variable is required")
        for lo, hi in self.ranges:
            if not (0 < lo < hi < math.inf):
                raise ConfigError(f"ranges must be positive finite intervals, got ({lo}, {hi})")
        if self.coarse_grid_points < 8:
            raise ConfigError("coarse grid needs at least 8 points per axis")
        if self.refine_iterations < 1:
            raise ConfigError("refine_iterations must be positive")
        if not self.violation_tolerance > _EPS:
            raise ConfigError("violation tolerance must exceed machine epsilon")
        if self.random_triples < 0:
            raise ConfigError("random_triples must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "ranges": [list(r) for r in self.ranges],
            "coarse_grid_points": self.coarse_grid_points,
            "refine_iterations": self.refine_iterations,
            "violation_tolerance": self.violation_tolerance,
            "seed": self.seed,
            "random_triples": self.random_triples,
        }


def _point_to_jsonable(p):
    if isinstance(p, np.ndarray):
        return [float(v) for v in p]
    return float(p)


@dataclass(frozen=True)
class ViolationReport:
    """A triple (x, z, y) with d(x, y) > d(x, z) + d(z, y) beyond tolerance."""

    x: object
    z: object
    y: object
    lhs: float
    rhs: float
    margin: float

    def to_dict(self) -> dict:
        return {
            "x": _point_to_jsonable(self.x),
            "z": _point_to_jsonable(self.z),
            "y": _point_to_jsonable(self.y),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
        }

    @staticmethod
    def from_dict(d: dict) -> "ViolationReport":
        def back(v):
            return np.array(v, dtype=float) if isinstance(v, list) else float(v)

        return ViolationReport(
            x=back(d["x"]), z=back(d["z"]), y=back(d["y"]),
            lhs=float(d["lhs"]), rhs=float(d["rhs"]), margin=float(d["margin"]),
        )


@dataclass(frozen=True)
class MIWitness:
    """Two abscissae where M(t, y) fails to be increasing, or M(t, y)/t to be decreasing."""

    kind: str  # "not-increasing" | "ratio-not-decreasing"
    t1: float
    t2: float
    y: float
    value1: float
    value2: float


@dataclass(frozen=True)
class ConvexityWitness:
    """Points 0 <= y < z < x where (x-y) f(z) > (x-z) f(y) + (z-y) f(x)."""

    x: float
    z: float
    y: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class RatioDecrease:
    """Adjacent samples where a trace ratio drops beyond tolerance."""

    x1: float
    x2: float
    g1: float
    g2: float

    def to_dict(self) -> dict:
        return {"x1": self.x1, "x2": self.x2, "g1": self.g1, "g2": self.g2}

    @staticmethod
    def from_dict(d: dict) -> "RatioDecrease":
        return RatioDecrease(float(d["x1"]), float(d["x2"]), float(d["g1"]), float(d["g2"]))


@dataclass(frozen=True)
class OrderReport:
    """Outcome of a trace-ratio monotonicity check on [1, hi].

    ``dips_below_one`` is recorded separately because a ratio may decrease
    somewhere yet never fall below one, and the two behaviours have different
    consequences.
    """

    verdict: str  # "increasing" | "decreasing-somewhere"
    witness: Optional[RatioDecrease]
    dips_below_one: bool
    ratio_samples: Tuple[Tuple[float, float], ...]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "dips_below_one": self.dips_below_one,
            "ratio_samples": [[x, g] for x, g in self.ratio_samples],
        }

    @staticmethod
    def from_dict(d: dict) -> "OrderReport":
        return OrderReport(
            verdict=str(d["verdict"]),
            witness=RatioDecrease.from_dict(d["witness"]) if d.get("witness") else None,
            dips_below_one=bool(d["dips_below_one"]),
            ratio_samples=tuple((float(x), float(g)) for x, g in d["ratio_samples"]),
        )


@dataclass(frozen=True)
class PlemReport:
    """Sufficient / necessary trace-ratio conditions against S_alpha."""

    sufficient: bool
    necessary1: bool
    necessary2: bool

    def to_dict(self) -> dict:
        return {
            "sufficient": self.sufficient,
            "necessary1": self.necessary1,
            "necessary2": self.necessary2,
        }


@dataclass(frozen=True)
class RegionCell:
    p: float
    q: float
    label: str  # "metric" | "non-metric" | "boundary-band"
    in_band: bool
    witness: Optional[ViolationReport]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "label": self.label,
            "in_band": self.in_band,
            "witness": self.witness.to_dict() if self.witness else None,
        }

    @staticmethod
    def from_dict(d: dict) -> "RegionCell":
        return RegionCell(
            p=float(d["p"]), q=float(d["q"]), label=str(d["label"]),
            in_band=bool(d["in_band"]),
            witness=ViolationReport.from_dict(d["witness"]) if d.get("witness") else None,
        )


@dataclass(frozen=True)
class RegionTable:
    """Grid classification of the power-mean weight family.

    Every non-metric cell carries a witness triple; the constructor enforces
    this.
    """

    cells: Tuple[RegionCell, ...]
    step: float
    config: SearchConfig

    def __post_init__(self):
        for cell in self.cells:
            if cell.label == "non-metric" and cell.witness is None:
                raise ConfigError(f"non-metric cell ({cell.p}, {cell.q}) lacks a witness")

    def cell(self, p: float, q: float) -> RegionCell:
        for c in self.cells:
            if math.isclose(c.p, p, abs_tol=1e-12) and math.isclose(c.q, q, abs_tol=1e-12):
                return c
        raise KeyError(f"no cell at ({p}, {q})")

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "config": self.config.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
        }

    @staticmethod
    def from_dict(d: dict) -> "RegionTable":
        cfg = d["config"]
        return RegionTable(
            cells=tuple(RegionCell.from_dict(c) for c in d["cells"]),
            step=float(d["step"]),
            config=SearchConfig(
                ranges=tuple(tuple(r) for r in cfg["ranges"]),
                coarse_grid_points=int(cfg["coarse_grid_points"]),
                refine_iterations=int(cfg["refine_iterations"]),
                violation_tolerance=float(cfg["violation_tolerance"]),
                seed=int(cfg["seed"]),
                random_triples=int(cfg["random_triples"]),
            ),
        )


# ---------------------------------------------------------------------------
# Distance helpers
# ---------------------------------------------------------------------------


def _dist_from_weight(M: WeightFunction) -> Callable:
    """Vectorized signed-scalar relative distance; weight zeros become inf."""

    def dist(u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            w = np.asarray(weight_eval(M, np.abs(u), np.abs(v)), dtype=float)
            out = np.abs(u - v) / w
        out = np.where(u == v, 0.0, out)
        out = np.where((w <= 0) & (u != v), math.inf, out)
        return out

    return dist


_TRANSFORM_VEC = {
    MetricKind.RAW: lambda d: d,
    MetricKind.LOG1P: np.log1p,
    MetricKind.ARCSINH: np.arcsinh,
    MetricKind.ARCCOSH1P: lambda d: np.arccosh(1.0 + d),
}


def _transformed_dist(M: WeightFunction, kind: MetricKind) -> Callable:
    base = _dist_from_weight(M)
    f = _TRANSFORM_VEC[kind]

    def dist(u, v):
        with np.errstate(over="ignore", invalid="ignore"):
            return f(base(u, v))

    return dist


def _margins(dist, X, Z, Y):
    """Vectorized triangle margins; invalid (non-finite) triples get -inf."""
    lhs = np.asarray(dist(X, Y), dtype=float)
    r1 = np.asarray(dist(X, Z), dtype=float)
    r2 = np.asarray(dist(Z, Y), dtype=float)
    rhs = r1 + r2
    ok = np.isfinite(lhs) & np.isfinite(rhs)
    margins = np.where(ok, lhs - rhs, -math.inf)
    return margins, lhs, rhs


def _scalar_margin(dist, x, z, y):
    lhs = float(dist(np.asarray(x), np.asarray(y)))
    rhs = float(dist(np.asarray(x), np.asarray(z))) + float(dist(np.asarray(z), np.asarray(y)))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Candidate generation for the 1-D search
# ---------------------------------------------------------------------------


def _triple_combos(grid: np.ndarray) -> np.ndarray:
    """All (x, z, y) with y < z < x drawn from an ascending grid."""
    n = len(grid)
    i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    mask = (i < j) & (j < k)
    return np.column_stack([grid[k[mask]], grid[j[mask]], grid[i[mask]]])


def _normalized_pair_grid(hi: float) -> np.ndarray:
    """(x, z, 1) triples with 1 < z < x <= hi, dense near 1."""
    rel = 1.0 + np.geomspace(1e-5, hi - 1.0, 96)
    n = len(rel)
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    mask = j < k
    zz = rel[j[mask]]
    xx = rel[k[mask]]
    return np.column_stack([xx, zz, np.ones_like(xx)])


def _probe_triples(lo: float, hi: float) -> np.ndarray:
    """Deterministic probe triples encoding the known failure regimes."""
    rows: List[Tuple[float, float, float]] = []
    ts = np.geomspace(max(lo, 1e-6), min(hi, 1e6), 25)

    # sign triples: endpoints symmetric about the origin, midpoint anywhere
    for t in ts:
        rows.append((t, 0.0, -t))
        for u in ts:
            if u != t:
                rows.append((t, u, -t))

    # vanishing endpoint / vanishing midpoint
    for e in 10.0 ** np.arange(-9, -2):
        if e >= lo:
            rows.append((1.0, 0.5, e))
            rows.append((1.0, e, 0.5))

    # exploding midpoint
    for z in np.geomspace(10.0, hi, 9):
        for x, y in ((2.0, 1.0), (1.5, 1.0), (3.0, 2.0)):
            rows.append((x, z, y))

    # squared-argument triples (x, z, y) = (s^2, s, 1)
    s_near = 1.0 + np.geomspace(1e-4, 1.0, 13)[:-1]
    s_far = np.geomspace(1.0, math.sqrt(hi), 17)[1:]
    for s in np.concatenate([s_near, s_far]):
        rows.append((s * s, s, 1.0))

    return np.array(rows, dtype=float)


def _golden_refine_coord(dist, triple: List[float], idx: int, window: float,
                         lo: float, hi: float, iters: int) -> Tuple[float, float]:
    """Golden-section ascent of the margin over one coordinate of the triple.

    The bracket preserves the coordinate's sign and keeps its magnitude inside
    [lo, hi] (or pinned above, if a probe started below lo); sign patterns are
    explored by the candidate generation, not by refinement.
    """
    v = triple[idx]
    if v == 0.0:
        return v, -math.inf
    if v > 0:
        a = max(v - window, min(v, lo))
        b = min(hi, v + window)
    else:
        a = max(-hi, v - window)
        b = min(v + window, max(v, -lo))

    def score(t: float) -> float:
        trial = list(triple)
        trial[idx] = t
        lhs, rhs = _scalar_margin(dist, *trial)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            return -math.inf
        return lhs - rhs

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = score(c), score(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = score(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = score(d)
    mid = 0.5 * (a + b)
    return mid, score(mid)


def _refine_triple(dist, triple: Sequence[float], cfg: SearchConfig,
                   passes: int = 3) -> Tuple[List[float], float]:
    """Coordinate-descent polish of a candidate triple; never loses ground."""
    cur = [float(v) for v in triple]
    lhs, rhs = _scalar_margin(dist, *cur)
    best = lhs - rhs if math.isfinite(lhs) and math.isfinite(rhs) else -math.inf
    shrink = 1.0
    for _ in range(passes):
        for idx in range(3):
            lo, hi = cfg.ranges[idx]
            window = max(abs(cur[idx]), lo) * 0.9 * shrink
            t, val = _golden_refine_coord(dist, cur, idx, window, lo, hi, cfg.refine_iterations)
            if val > best:
                best = val
                cur[idx] = t
        shrink *= 0.3
    return cur, best


def _best_candidates(margins: np.ndarray, triples: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest margins, ties broken lexicographically."""
    order = np.lexsort((triples[:, 2], triples[:, 1], triples[:, 0], -margins))
    return order[:k]


def _report_from_triple(dist, triple: Sequence[float], cfg: SearchConfig) -> Optional[ViolationReport]:
    lhs, rhs = _scalar_margin(dist, *triple)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return None
    margin = lhs - rhs
    if margin > cfg.violation_tolerance * max(lhs, rhs, 1.0):
        x, z, y = (float(v) for v in triple)
        return ViolationReport(x=x, z=z, y=y, lhs=lhs, rhs=rhs, margin=margin)
    return None


def _search_1d_core(dist, cfg: SearchConfig, *, extra_random: bool = False,
                    top_k: int = 3) -> Optional[ViolationReport]:
    lo, hi = cfg.ranges[0]
    blocks = [
        _triple_combos(np.geomspace(lo, hi, cfg.coarse_grid_points)),
        _normalized_pair_grid(hi),
        _probe_triples(lo, hi),
    ]
    if extra_random:
        rng = np.random.default_rng(cfg.seed)
        mag = 10.0 ** rng.uniform(math.log10(lo), math.log10(hi), size=(cfg.random_triples, 3))
        sign = rng.choice([-1.0, 1.0], size=(cfg.random_triples, 3))
        blocks.append(mag * sign)
    triples = np.vstack(blocks)
    margins, _, _ = _margins(dist, triples[:, 0], triples[:, 1], triples[:, 2])

    best_report: Optional[ViolationReport] = None
    for i in _best_candidates(margins, triples, top_k):
        refined, _ = _refine_triple(dist, triples[i], cfg)
        report = _report_from_triple(dist, refined, cfg) or _report_from_triple(dist, triples[i], cfg)
        if report is not None and (best_report is None or report.margin > best_report.margin):
            best_report = report
    return best_report


# ---------------------------------------------------------------------------
# Public searches
# ---------------------------------------------------------------------------


def triangle_search_1d(M: WeightFunction, cfg: Optional[SearchConfig] = None) -> Optional[ViolationReport]:
    """Search for a triangle-inequality violation of |x-y| / M(|x|, |y|) on the line.

    For an MI weight it suffices to scan ordered positive triples, so the
    deterministic grids carry the search; if the weight fails the MI predicate
    the positive-triple reduction is unjustified and seeded random signed
    triples are added (the n-dimensional fallback restricted to the line).
    Returns the largest-margin violation found or None.
    """
    cfg = cfg or SearchConfig()
    dist = _dist_from_weight(M)
    needs_fallback = mi_check(M, cfg) is not None
    return _search_1d_core(dist, cfg, extra_random=needs_fallback)


def triangle_search_transformed(M: WeightFunction, kind: MetricKind,
                                cfg: Optional[SearchConfig] = None) -> Optional[ViolationReport]:
    """Triangle search for a metric transform of the relative distance."""
    cfg = cfg or SearchConfig()
    dist = _transformed_dist(M, kind)
    needs_fallback = mi_check(M, cfg) is not None
    return _search_1d_core(dist, cfg, extra_random=needs_fallback)


def _default_sampler(rng: np.random.Generator, count: int, n: int,
                     lo: float, hi: float) -> np.ndarray:
    mag = 10.0 ** rng.uniform(math.log10(lo), math.log10(hi), size=(count, n))
    sign = rng.choice([-1.0, 1.0], size=(count, n))
    return mag * sign


def _refine_point_triple(metric, triple: np.ndarray, cfg: SearchConfig,
                         bounds: Optional[Sequence[Tuple[float, float]]],
                         passes: int = 2) -> Tuple[np.ndarray, float]:
    """Coordinate-wise golden ascent over all 3n coordinates of a point triple."""
    cur = triple.astype(float).copy()
    n = cur.shape[1]

    def margin_of(t: np.ndarray) -> float:
        lhs = metric(t[0], t[2])
        rhs = metric(t[0], t[1]) + metric(t[1], t[2])
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            return -math.inf
        return lhs - rhs

    best = margin_of(cur)
    shrink = 1.0
    iters = max(8, cfg.refine_iterations // 3)
    for _ in range(passes):
        for pt in range(3):
            for c in range(n):
                v = cur[pt, c]
                window = max(abs(v), 1e-3) * 0.5 * shrink
                a, b = v - window, v + window
                if bounds is not None:
                    blo, bhi = bounds[c]
                    a, b = max(a, blo), min(b, bhi)
                    if not a < b:
                        continue

                def score(t: float) -> float:
                    cur[pt, c] = t
                    val = margin_of(cur)
                    cur[pt, c] = v
                    return val

                cc = b - _GOLDEN * (b - a)
                dd = a + _GOLDEN * (b - a)
                fc, fd = score(cc), score(dd)
                for _ in range(iters):
                    if fc >= fd:
                        b, dd, fd = dd, cc, fc
                        cc = b - _GOLDEN * (b - a)
                        fc = score(cc)
                    else:
                        a, cc, fc = cc, dd, fd
                        dd = a + _GOLDEN * (b - a)
                        fd = score(dd)
                mid = 0.5 * (a + b)
                if score(mid) > best:
                    best = score(mid)
                    cur[pt, c] = mid
        shrink *= 0.3
    return cur, best


def triangle_search_nd(metric: Callable, n: int, cfg: Optional[SearchConfig] = None, *,
                       probes: Sequence = (),
                       sampler: Optional[Callable] = None,
                       bounds: Optional[Sequence[Tuple[float, float]]] = None,
                       ) -> Optional[ViolationReport]:
    """Randomized triangle search for an arbitrary distance function on R^n.

    ``metric`` maps two coordinate vectors to a float.  ``probes`` may supply
    deterministic (x, z, y) point triples to test before the random sweep;
    ``sampler(rng, count)`` overrides point generation (e.g. to stay inside a
    domain) and ``bounds`` gives per-coordinate (lo, hi) clamps for the
    refinement stage.
    """
    cfg = cfg or SearchConfig()
    if n < 1:
        raise ConfigError(f"dimension must be >= 1, got {n}")
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.ranges[0]
    if sampler is None:
        pts = _default_sampler(rng, 3 * cfg.random_triples, n, lo, hi)
    else:
        pts = np.asarray(sampler(rng, 3 * cfg.random_triples), dtype=float)
    triples = [
        (np.asarray(x, dtype=float), np.asarray(z, dtype=float), np.asarray(y, dtype=float))
        for x, z, y in probes
    ]
    triples.extend(
        (pts[3 * i], pts[3 * i + 1], pts[3 * i + 2]) for i in range(len(pts) // 3)
    )

    tol = cfg.violation_tolerance
    margins = np.full(len(triples), -math.inf)
    for idx, (x, z, y) in enumerate(triples):
        lhs = metric(x, y)
        rhs = metric(x, z) + metric(z, y)
        if math.isfinite(lhs) and math.isfinite(rhs):
            margins[idx] = lhs - rhs
    top = np.argsort(-margins, kind="stable")[:3]

    best_report: Optional[ViolationReport] = None
    for idx in top:
        stacked = np.vstack(triples[idx])
        refined, margin = _refine_point_triple(metric, stacked, cfg, bounds)
        for arr in (refined, stacked):
            lhs = metric(arr[0], arr[2])
            rhs = metric(arr[0], arr[1]) + metric(arr[1], arr[2])
            if math.isfinite(lhs) and math.isfinite(rhs):
                margin = lhs - rhs
                if margin > tol * max(lhs, rhs, 1.0):
                    report = ViolationReport(
                        x=arr[0].copy(), z=arr[1].copy(), y=arr[2].copy(),
                        lhs=lhs, rhs=rhs, margin=margin,
                    )
                    if best_report is None or report.margin > best_report.margin:
                        best_report = report
                    break
    return best_report


# ---------------------------------------------------------------------------
# Monotonicity and convexity predicates
# ---------------------------------------------------------------------------


def mi_check(M: WeightFunction, cfg: Optional[SearchConfig] = None) -> Optional[MIWitness]:
    """Sampled check that M is increasing with decreasing ratio in each slot.

    For each grid value of the second argument, t -> M(t, y) must be
    (weakly) increasing and t -> M(t, y)/t (weakly) decreasing.  Returns the
    first failing pair of abscissae, or None when the sampled predicate holds.
    """
    cfg = cfg or SearchConfig()
    lo, hi = cfg.ranges[0]
    tol = cfg.violation_tolerance
    grid = np.geomspace(lo, hi, cfg.coarse_grid_points)
    with np.errstate(over="ignore", invalid="ignore"):
        for y in grid:
            vals = np.asarray(weight_eval(M, grid, np.full_like(grid, y)), dtype=float)
            ratios = vals / grid
            drop = vals[:-1] - vals[1:]
            bad = drop > tol * np.maximum(1.0, np.abs(vals[:-1]))
            bad &= np.isfinite(drop)
            if np.any(bad):
                i = int(np.argmax(bad))
                return MIWitness("not-increasing", float(grid[i]), float(grid[i + 1]),
                                 float(y), float(vals[i]), float(vals[i + 1]))
            rise = ratios[1:] - ratios[:-1]
            bad = rise > tol * np.maximum(1.0, np.abs(ratios[:-1]))
            bad &= np.isfinite(rise)
            if np.any(bad):
                i = int(np.argmax(bad))
                return MIWitness("ratio-not-decreasing", float(grid[i]), float(grid[i + 1]),
                                 float(y), float(ratios[i]), float(ratios[i + 1]))
    return None


def convexity_check(f: Callable, cfg: Optional[SearchConfig] = None) -> Optional[ConvexityWitness]:
    """Three-point convexity test (x-y) f(z) <= (x-z) f(y) + (z-y) f(x) on 0 <= y < z < x."""
    cfg = cfg or SearchConfig()
    lo, hi = cfg.ranges[0]
    tol = cfg.violation_tolerance
    grid = np.concatenate([[0.0], np.geomspace(lo, hi, cfg.coarse_grid_points)])
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            fv = np.asarray(f(grid), dtype=float)
        except (TypeError, ValueError):
            fv = np.vectorize(f, otypes=[float])(grid)
    combos = _triple_combos(np.arange(len(grid)).astype(float)).astype(int)
    x, z, y = grid[combos[:, 0]], grid[combos[:, 1]], grid[combos[:, 2]]
    fx, fz, fy = fv[combos[:, 0]], fv[combos[:, 1]], fv[combos[:, 2]]
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = (x - y) * fz
        rhs = (x - z) * fy + (z - y) * fx
        excess = lhs - rhs
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        rel = np.where(np.isfinite(excess), excess / scale, -math.inf)
    i = int(np.argmax(rel))
    if rel[i] > tol:
        return ConvexityWitness(x=float(x[i]), z=float(z[i]), y=float(y[i]),
                                lhs=float(lhs[i]), rhs=float(rhs[i]))
    return None


# ---------------------------------------------------------------------------
# Trace-ratio order checking
# ---------------------------------------------------------------------------


def _order_grid(hi: float) -> np.ndarray:
    """Log grid on [1, hi] densified near 1, where high-order contact hides."""
    coarse = np.geomspace(1.0, hi, 1400)
    near = 1.0 + np.geomspace(1e-7, hi - 1.0, 700)
    return np.unique(np.concatenate([coarse, near]))


def strong_order_check(M: WeightFunction, N: WeightFunction,
                       cfg: Optional[SearchConfig] = None) -> OrderReport:
    """Is the trace ratio t_M(x) / t_N(x) increasing on [1, hi]?

    Non-strict: a constant ratio counts as increasing.  A relative drop
    between adjacent samples beyond the configured tolerance yields the
    verdict "decreasing-somewhere" together with the witnessing pair.
    """
    cfg = cfg or SearchConfig()
    hi = cfg.ranges[0][1]
    tol = cfg.violation_tolerance
    xs = _order_grid(hi)
    ones = np.ones_like(xs)
    with np.errstate(over="ignore", invalid="ignore"):
        tm = np.asarray(weight_eval(M, xs, ones), dtype=float)
        tn = np.asarray(weight_eval(N, xs, ones), dtype=float)
    if np.any(~np.isfinite(tm)) or np.any(~np.isfinite(tn)) or np.any(tm <= 0) or np.any(tn <= 0):
        raise InvalidParameterError("traces must be positive and finite on the order grid")
    g = tm / tn
    drops = (g[:-1] - g[1:]) / np.maximum(np.abs(g[:-1]), 1e-300)
    i = int(np.argmax(drops))
    witness = None
    verdict = "increasing"
    if drops[i] > tol:
        verdict = "decreasing-somewhere"
        witness = RatioDecrease(x1=float(xs[i]), x2=float(xs[i + 1]),
                                g1=float(g[i]), g2=float(g[i + 1]))
    idx = np.unique(np.linspace(0, len(xs) - 1, 65).astype(int))
    samples = tuple((float(xs[j]), float(g[j])) for j in idx)
    return OrderReport(verdict=verdict, witness=witness,
                       dips_below_one=bool(np.any(g < 1.0 - tol)),
                       ratio_samples=samples)


def plem_conditions(M: WeightFunction, alpha: float,
                    cfg: Optional[SearchConfig] = None) -> PlemReport:
    """Sufficient and necessary trace-ratio conditions of an alpha-homogeneous weight.

    sufficient:  t_M / t_{S_alpha} increasing on the order grid;
    necessary1:  M >= S_alpha pointwise on the sample grid;
    necessary2:  g(x) <= g(x^2) for grid x >= 1, g the trace ratio.

    The weight must be (sampled) increasing and alpha-homogeneous, which is a
    hypothesis of the underlying criterion, not something it verifies.
    """
    cfg = cfg or SearchConfig()
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")

    probe = np.array([0.25, 1.0, 3.0, 17.0])
    for s in (2.0, 7.5):
        base = np.asarray(weight_eval(M, probe, probe[::-1]), dtype=float)
        scaled = np.asarray(weight_eval(M, s * probe, s * probe[::-1]), dtype=float)
        if not np.allclose(scaled, s**alpha * base, rtol=1e-8):
            raise InvalidParameterError(f"weight {M.label()} is not {alpha}-homogeneous")
    wit = mi_check(M, cfg)
    if wit is not None and wit.kind == "not-increasing":
        raise InvalidParameterError(f"weight {M.label()} is not increasing")

    S = stolarsky_weight(alpha)
    sufficient = strong_order_check(M, S, cfg).verdict == "increasing"

    tol = cfg.violation_tolerance
    lo, hi = cfg.ranges[0]
    pts = np.geomspace(lo, hi, 48)
    xg, yg = np.meshgrid(pts, pts)
    mv = np.asarray(weight_eval(M, xg, yg), dtype=float)
    sv = np.asarray(weight_eval(S, xg, yg), dtype=float)
    necessary1 = bool(np.all(mv >= sv * (1.0 - 1e-12) - tol))

    xs = np.geomspace(1.0, math.sqrt(hi), 600)
    ones = np.ones_like(xs)
    g1 = np.asarray(weight_eval(M, xs, ones), dtype=float) / np.asarray(weight_eval(S, xs, ones), dtype=float)
    g2 = np.asarray(weight_eval(M, xs**2, ones), dtype=float) / np.asarray(weight_eval(S, xs**2, ones), dtype=float)
    necessary2 = bool(np.all(g1 <= g2 * (1.0 + 1e-12) + tol))

    return PlemReport(sufficient=sufficient, necessary1=necessary1, necessary2=necessary2)


# ---------------------------------------------------------------------------
# Region classification for the power-mean family
# ---------------------------------------------------------------------------


def pq_threshold(q: float) -> float:
    """The order threshold max(1 - q, (2 - q)/3) separating metric from non-metric."""
    return max(1.0 - q, (2.0 - q) / 3.0)


def pq_is_metric(p: float, q: float) -> bool:
    """Membership in the analytic metric region {0 < q <= 1, p >= threshold(q)}."""
    return 0.0 < q <= 1.0 and p >= pq_threshold(q) - 1e-12


def pq_frontier_distance(p: float, q: float) -> float:
    """Euclidean distance from (p, q) to the boundary of the metric region."""
    qs = np.linspace(1e-9, 1.0, 4001)
    curve_p = np.maximum(1.0 - qs, (2.0 - qs) / 3.0)
    top_p = np.linspace(1.0 / 3.0, max(2.0, p + 1.0), 2001)
    pts = np.concatenate([
        np.column_stack([curve_p, qs]),
        np.column_stack([top_p, np.ones_like(top_p)]),
    ])
    d = np.hypot(pts[:, 0] - p, pts[:, 1] - q)
    return float(d.min())


def _inclusive_values(lo: float, hi: float, step: float) -> List[float]:
    count = int(round((hi - lo) / step))
    vals = [lo + k * step for k in range(count + 1)]
    return [round(v, 12) for v in vals if v <= hi + 1e-9]


def classify_pq_region(p_range: Tuple[float, float], q_range: Tuple[float, float],
                       step: float, cfg: Optional[SearchConfig] = None) -> RegionTable:
    """Label a (p, q) grid of power-mean weights by triangle search.

    Cells within one grid step of the analytic region boundary whose search
    verdict disagrees with the analytic classification are labelled
    ``boundary-band``: violation margins vanish on the boundary curve, so a
    finite search cannot resolve membership there.  All other cells are
    labelled by the search outcome alone.
    """
    cfg = cfg or SearchConfig()
    step = float(step)
    if not step > 0:
        raise ConfigError(f"step must be positive, got {step}")
    cells: List[RegionCell] = []
    for q in _inclusive_values(q_range[0], q_range[1], step):
        for p in _inclusive_values(p_range[0], p_range[1], step):
            report = triangle_search_1d(PowerMeanPower(p, q), cfg)
            in_band = pq_frontier_distance(p, q) <= step * (1.0 + 1e-9)
            found = report is not None
            if in_band and found == pq_is_metric(p, q):
                label = "boundary-band"
            else:
                label = "non-metric" if found else "metric"
            cells.append(RegionCell(p=p, q=q, label=label, in_band=in_band, witness=report))
    return RegionTable(cells=tuple(cells), step=step, config=cfg)


def lambda_sharpness(p: float, c: float, cfg: Optional[SearchConfig] = None) -> Optional[ViolationReport]:
    """Triangle search for log(1 + c |x-y| / A_p(|x|, |y|)) with p < 0.

    The distance is a metric exactly when c >= 2^(-1/p); below that the
    squared-argument triples (s^2, s, 1) violate for large s, and the search
    is expected to find them.
    """
    p = float(p)
    if not p < 0:
        raise InvalidParameterError(f"sharpness probing applies to negative orders, got {p}")
    c = float(c)
    if not c > 0:
        raise InvalidParameterError(f"c must be positive, got {c}")
    cfg = cfg or SearchConfig()
    dist = _transformed_dist(ScaledPowerMean(p, 1.0 / c), MetricKind.LOG1P)
    return _search_1d_core(dist, cfg)


# ---------------------------------------------------------------------------
# Named product-weight factors for the equivalence experiments
# ---------------------------------------------------------------------------

FF_SUITE: Dict[str, Callable] = {
    "norm1": lambda t: 1.0 + t,
    "norm2": lambda t: np.sqrt(1.0 + np.square(t)),
    "norm4": lambda t: (1.0 + np.asarray(t, dtype=float) ** 4) ** 0.25,
    "exp": lambda t: np.exp(t),
    "one_plus_square": lambda t: 1.0 + np.square(t),
    "max_one": lambda t: np.maximum(1.0, t),
    "sqrt_plus_one": lambda t: np.sqrt(t) + 1.0,
    "affine": lambda t: 2.0 + 3.0 * t,
    "constant": lambda t: np.full_like(np.asarray(t, dtype=float), 2.0),
    "hinge": lambda t: np.maximum(1.0, 0.5 * (1.0 + t)),
}
