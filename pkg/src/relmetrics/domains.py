"""Domain-sensitive distances: boundary suprema, cross-ratio metrics and
half-plane boundary integrals.

A domain G is described by a :mod:`relmetrics.domains` spec object: the upper
half-plane, the unit ball, Euclidean space punctured at finitely many points,
or an explicit finite boundary sample.  On top of a spec the module provides

* ``rho_sup``      -- sup over boundary points a of |x-y| / M(|x-a|, |y-a|),
* ``j_metric``     -- log(1 + |x-y| / min(d(x), d(y))) with d = boundary distance,
* ``cross_ratio``  -- the chordal cross-ratio on the compactified space,
* ``delta_p``      -- sup over boundary pairs of log(1 + lp-combination of two
  cross-ratios); p = inf gives Seittenranta's metric,
* ``rho_prime``    -- the same pair supremum for a general homogeneous weight,
* ``rho_double_prime`` -- |x-y| / M(d(x), d(y)) (usually *not* a metric),
* ``iota`` / ``rho_tilde_halfplane`` / ``c_constant`` -- the closed form and
  the boundary-integral form of the half-plane family, plus its constant.

Suprema over analytic boundaries use a coarse grid (512 samples for single
points, 64 per axis for pairs) followed by golden-section refinement down to
1e-10 parameter resolution; the objectives are continuous and the suprema are
attained, so this is reliable off degenerate configurations.  Everything is
deterministic for fixed grid parameters and safe to call concurrently.
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegenerateWeightError,
    InvalidDomainError,
    InvalidParameterError,
    OutsideDomainError,
    QuadratureError,
)
from .means import WeightFunction, weight_eval
from .metrics import INFINITY, Point, as_point, chordal, is_infinite
from .metrics import rho as _rho_plain

__all__ = [
    "HalfPlane",
    "UnitBall",
    "PuncturedSpace",
    "SampledBoundary",
    "DomainSpec",
    "boundary_distance",
    "rho_sup",
    "j_metric",
    "cross_ratio",
    "delta_p",
    "rho_prime",
    "rho_double_prime",
    "iota",
    "rho_tilde_halfplane",
    "c_constant",
    "parse_domain_spec",
    "load_domain_spec",
]

SUP_SAMPLES = 512          # boundary samples for single-point suprema
PAIR_GRID = 64             # per-axis samples for pair suprema
REFINE_TOL = 1e-10         # golden-section parameter resolution
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# Domain specifications
# ---------------------------------------------------------------------------


class HalfPlane:
    """The upper half-plane in R^2; boundary is the horizontal axis plus infinity."""

    dimension = 2
    boundary_includes_infinity = True

    def contains(self, x) -> bool:
        xa = as_point(x)
        return xa.shape[0] == 2 and xa[1] > 0.0

    def boundary_distance(self, x) -> float:
        return float(as_point(x)[1])

    def finite_boundary(self) -> Optional[List[np.ndarray]]:
        return None

    def boundary_param(self, t: float) -> np.ndarray:
        return np.array([t, 0.0])

    def label(self) -> str:
        return "halfplane"

    def __repr__(self):
        return "HalfPlane()"


class UnitBall:
    """The open unit ball in R^n; boundary is the unit sphere."""

    boundary_includes_infinity = False

    def __init__(self, n: int = 2):
        n = int(n)
        if n < 1:
            raise InvalidDomainError(f"ball dimension must be >= 1, got {n}")
        self.dimension = n

    def contains(self, x) -> bool:
        xa = as_point(x)
        return xa.shape[0] == self.dimension and float(np.linalg.norm(xa)) < 1.0

    def boundary_distance(self, x) -> float:
        return 1.0 - float(np.linalg.norm(as_point(x)))

    def finite_boundary(self) -> Optional[List[np.ndarray]]:
        if self.dimension == 1:
            return [np.array([-1.0]), np.array([1.0])]
        return None

    def label(self) -> str:
        return f"ball:n={self.dimension}"

    def __repr__(self):
        return f"UnitBall(n={self.dimension})"


class PuncturedSpace:
    """R^n with finitely many points removed; boundary = punctures plus infinity."""

    boundary_includes_infinity = True

    def __init__(self, punctures: Sequence, n: Optional[int] = None):
        pts = [as_point(p) for p in punctures]
        if not pts:
            raise InvalidDomainError("a punctured space needs at least one puncture")
        dims = {p.shape[0] for p in pts}
        if len(dims) != 1:
            raise InvalidDomainError(f"punctures have mixed dimensions {sorted(dims)}")
        if n is not None and int(n) != pts[0].shape[0]:
            raise InvalidDomainError("declared dimension disagrees with puncture coordinates")
        self.punctures = pts
        self.dimension = pts[0].shape[0]

    def contains(self, x) -> bool:
        xa = as_point(x)
        if xa.shape[0] != self.dimension:
            return False
        return not any(np.array_equal(xa, p) for p in self.punctures)

    def boundary_distance(self, x) -> float:
        xa = as_point(x)
        return min(float(np.linalg.norm(xa - p)) for p in self.punctures)

    def finite_boundary(self) -> Optional[List[np.ndarray]]:
        return list(self.punctures)

    def label(self) -> str:
        return f"punctured:k={len(self.punctures)},n={self.dimension}"

    def __repr__(self):
        return f"PuncturedSpace({len(self.punctures)} punctures, n={self.dimension})"


class SampledBoundary:
    """A domain known only through a finite boundary sample (infinity allowed).

    ``distance_oracle``, when given, must agree with the minimum distance to
    the finite samples up to the sampling resolution; it is trusted for
    boundary distances but the samples drive all suprema.
    """

    def __init__(self, points: Sequence, n: Optional[int] = None,
                 distance_oracle: Optional[Callable[[np.ndarray], float]] = None):
        finite = []
        has_inf = False
        for p in points:
            if is_infinite(p):
                has_inf = True
            else:
                finite.append(as_point(p))
        if not finite and not has_inf:
            raise InvalidDomainError("a sampled boundary needs at least one point")
        dims = {p.shape[0] for p in finite}
        if len(dims) > 1:
            raise InvalidDomainError(f"boundary samples have mixed dimensions {sorted(dims)}")
        if n is None and not finite:
            raise InvalidDomainError("dimension required when only infinity is sampled")
        self.points = finite
        self.boundary_includes_infinity = has_inf
        self.dimension = int(n) if n is not None else finite[0].shape[0]
        self.distance_oracle = distance_oracle

    def contains(self, x) -> bool:
        xa = as_point(x)
        if xa.shape[0] != self.dimension:
            return False
        return not any(np.array_equal(xa, p) for p in self.points)

    def boundary_distance(self, x) -> float:
        xa = as_point(x)
        if self.distance_oracle is not None:
            return float(self.distance_oracle(xa))
        if not self.points:
            raise InvalidDomainError("no finite boundary samples to measure distance against")
        return min(float(np.linalg.norm(xa - p)) for p in self.points)

    def finite_boundary(self) -> Optional[List[np.ndarray]]:
        return list(self.points)

    def label(self) -> str:
        return f"sampled:k={len(self.points)},n={self.dimension}"

    def __repr__(self):
        return f"SampledBoundary({len(self.points)} samples, n={self.dimension})"


DomainSpec = Union[HalfPlane, UnitBall, PuncturedSpace, SampledBoundary]


def _require_member(G: DomainSpec, x, name: str = "point") -> np.ndarray:
    xa = as_point(x)
    if not G.contains(xa):
        raise OutsideDomainError(f"{name} {xa.tolist()} is not in the domain {G!r}")
    return xa


def boundary_distance(G: DomainSpec, x) -> float:
    """Distance from a domain point to the boundary (exact for analytic domains)."""
    xa = _require_member(G, x)
    return G.boundary_distance(xa)


# ---------------------------------------------------------------------------
# Golden-section maximization on a bracket
# ---------------------------------------------------------------------------


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                tol: float) -> Tuple[float, float]:
    """Maximize f on [lo, hi]; returns (argmax, max).  Standard golden section."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


# ---------------------------------------------------------------------------
# Boundary suprema of the relative distance
# ---------------------------------------------------------------------------


def _rho_at_offset(M: WeightFunction, xa: np.ndarray, ya: np.ndarray, a: np.ndarray) -> float:
    dx = float(np.linalg.norm(xa - a))
    dy = float(np.linalg.norm(ya - a))
    w = weight_eval(M, dx, dy)
    if w <= 0.0:
        raise DegenerateWeightError(
            f"weight {M.label()} vanishes at boundary offset distances ({dx}, {dy})"
        )
    return float(np.linalg.norm(xa - ya)) / w


def _plane_basis(xa: np.ndarray, ya: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of a 2-plane through the origin containing x and y."""
    n = xa.shape[0]
    u = xa if np.linalg.norm(xa) > 1e-300 else ya
    if np.linalg.norm(u) <= 1e-300:
        u = np.eye(n)[0]
    u = u / np.linalg.norm(u)
    w = ya - np.dot(ya, u) * u
    if np.linalg.norm(w) <= 1e-12 * max(1.0, float(np.linalg.norm(ya))):
        k = int(np.argmin(np.abs(u)))
        w = np.eye(n)[k] - u[k] * u
    v = w / np.linalg.norm(w)
    return u, v


def _halfplane_axis_param(xa: np.ndarray, ya: np.ndarray):
    """Map theta in (-pi/2, pi/2) to boundary abscissae centered between x and y."""
    center = 0.5 * (xa[0] + ya[0])
    scale = max(float(np.linalg.norm(xa - ya)), float(xa[1]), float(ya[1]), 1e-12)
    return lambda th: center + scale * math.tan(th)


def rho_sup(M: WeightFunction, G: DomainSpec, x: Point, y: Point, *,
            samples: int = SUP_SAMPLES, refine_tol: float = REFINE_TOL) -> float:
    """sup over finite boundary points a of |x - y| / M(|x-a|, |y-a|).

    Exact for finite boundaries; analytic boundaries use a uniform parameter
    grid plus golden-section refinement around the best sample.  The unit-ball
    supremum is searched on the great circle through x and y, which contains
    the maximizer whenever M is increasing in each argument.
    """
    xa = _require_member(G, x, "x")
    ya = _require_member(G, y, "y")
    if np.array_equal(xa, ya):
        return 0.0

    finite = G.finite_boundary()
    if finite is not None:
        return max(_rho_at_offset(M, xa, ya, a) for a in finite)

    if isinstance(G, HalfPlane):
        to_axis = _halfplane_axis_param(xa, ya)
        point_of = lambda th: G.boundary_param(to_axis(th))
        lo, hi = -math.pi / 2, math.pi / 2
    elif isinstance(G, UnitBall):
        u, v = _plane_basis(xa, ya)
        point_of = lambda th: math.cos(th) * u + math.sin(th) * v
        lo, hi = -math.pi, math.pi
    else:  # pragma: no cover - all current specs are handled above
        raise InvalidDomainError(f"no boundary parameterization for {G!r}")

    thetas = np.linspace(lo, hi, samples + 2)[1:-1]
    values = [_rho_at_offset(M, xa, ya, point_of(th)) for th in thetas]
    i = int(np.argmax(values))
    bl = thetas[max(i - 1, 0)]
    bh = thetas[min(i + 1, len(thetas) - 1)]
    _, best = _golden_max(lambda th: _rho_at_offset(M, xa, ya, point_of(th)), bl, bh, refine_tol)
    return max(best, values[i])


def j_metric(G: DomainSpec, x: Point, y: Point) -> float:
    """log(1 + |x - y| / min(d(x), d(y))), the classical domain ratio metric."""
    xa = _require_member(G, x, "x")
    ya = _require_member(G, y, "y")
    d = min(G.boundary_distance(xa), G.boundary_distance(ya))
    return math.log1p(float(np.linalg.norm(xa - ya)) / d)


# ---------------------------------------------------------------------------
# Cross-ratio machinery
# ---------------------------------------------------------------------------


def cross_ratio(a: Point, b: Point, c: Point, d: Point) -> float:
    """|a,b,c,d| = q(a,c) q(b,d) / (q(a,b) q(c,d)) with q the chordal metric.

    Any argument may be the point at infinity.  Requires a != b and c != d;
    for four finite points this equals |a-c||b-d| / (|a-b||c-d|).
    """
    qab = chordal(a, b)
    qcd = chordal(c, d)
    if qab == 0.0 or qcd == 0.0:
        raise InvalidParameterError("cross-ratio requires a != b and c != d")
    return chordal(a, c) * chordal(b, d) / (qab * qcd)


def _lp_pair(u: float, v: float, p: float) -> float:
    """(u^p + v^p)^(1/p) for u, v >= 0, stable for large p; p = inf gives max."""
    if p == math.inf:
        return max(u, v)
    hi, lo = (u, v) if u >= v else (v, u)
    if hi == 0.0:
        return 0.0
    return hi * (1.0 + (lo / hi) ** p) ** (1.0 / p)


class _PairParam:
    """One refinable boundary parameterization for pair suprema."""

    def __init__(self, point_of: Callable[[float], np.ndarray], lo: float, hi: float):
        self.point_of = point_of
        self.lo = lo
        self.hi = hi

    def grid(self, k: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, k + 2)[1:-1]


def _pair_candidates(G: DomainSpec, xa: np.ndarray, ya: np.ndarray, grid: int):
    """Boundary candidates for the pair supremum.

    Returns (items, param) where each item is (point-or-INFINITY, theta-or-None)
    and param is the :class:`_PairParam` used to refine non-fixed items.
    """
    finite = G.finite_boundary()
    if finite is not None:
        items = [(p, None) for p in finite]
        if G.boundary_includes_infinity:
            items.append((INFINITY, None))
        return items, None

    if isinstance(G, HalfPlane):
        to_axis = _halfplane_axis_param(xa, ya)
        param = _PairParam(lambda th: G.boundary_param(to_axis(th)), -math.pi / 2, math.pi / 2)
        items = [(param.point_of(th), th) for th in param.grid(grid)]
        items.append((INFINITY, None))
        return items, param
    if isinstance(G, UnitBall):
        if G.dimension != 2:
            raise InvalidDomainError(
                "pair suprema over spheres are only supported in dimension 2; "
                "use a SampledBoundary for higher dimensions"
            )
        param = _PairParam(lambda th: np.array([math.cos(th), math.sin(th)]), -math.pi, math.pi)
        items = [(param.point_of(th), th) for th in param.grid(grid)]
        return items, param
    raise InvalidDomainError(f"no boundary parameterization for {G!r}")


def _pair_sup(G: DomainSpec, xa: np.ndarray, ya: np.ndarray,
              value: Callable[[Point, Point], float],
              grid: int, refine_tol: float) -> float:
    """Maximize value(a, b) over unordered boundary pairs a != b."""
    items, param = _pair_candidates(G, xa, ya, grid)
    if len(items) < 2:
        raise InvalidDomainError("pair supremum needs at least two boundary points")

    best = -math.inf
    best_pair = None
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            v = value(items[i][0], items[j][0])
            if v > best:
                best = v
                best_pair = (items[i], items[j])

    if param is None or best_pair is None:
        return best

    # Coordinate-wise golden refinement of whichever slots are parameterized.
    step = (param.hi - param.lo) / (grid + 1)
    (pa, ta), (pb, tb) = best_pair
    for _ in range(4):
        if ta is not None:
            fixed = pb
            ta, va = _golden_max(
                lambda th: value(param.point_of(th), fixed),
                max(param.lo, ta - step), min(param.hi, ta + step), refine_tol,
            )
            pa = param.point_of(ta)
            best = max(best, va)
        if tb is not None:
            fixed = pa
            tb, vb = _golden_max(
                lambda th: value(fixed, param.point_of(th)),
                max(param.lo, tb - step), min(param.hi, tb + step), refine_tol,
            )
            pb = param.point_of(tb)
            best = max(best, vb)
    return best


def delta_p(G: DomainSpec, p: float, x: Point, y: Point, *,
            grid: int = PAIR_GRID, refine_tol: float = REFINE_TOL) -> float:
    """sup over boundary pairs (a, b) of log(1 + (|x,a,y,b|^p + |x,b,y,a|^p)^(1/p)).

    p = inf uses the larger of the two cross-ratios and gives Seittenranta's
    metric.  Requires at least two boundary points (infinity counts).
    """
    p = float(p)
    if not p > 0:
        raise InvalidParameterError(f"delta exponent must be positive, got {p}")
    xa = _require_member(G, x, "x")
    ya = _require_member(G, y, "y")
    if np.array_equal(xa, ya):
        return 0.0

    def value(a, b):
        u = cross_ratio(xa, a, ya, b)
        v = cross_ratio(xa, b, ya, a)
        return math.log1p(_lp_pair(u, v, p))

    return _pair_sup(G, xa, ya, value, grid, refine_tol)


def rho_prime(M: WeightFunction, G: DomainSpec, x: Point, y: Point, *,
              grid: int = PAIR_GRID, refine_tol: float = REFINE_TOL) -> float:
    """sup over boundary pairs (a, b) of 1 / M(|x,y,a,b|, |x,y,b,a|).

    Meant for homogeneous increasing weights; delta_p is the concrete
    instance normally used.
    """
    xa = _require_member(G, x, "x")
    ya = _require_member(G, y, "y")
    if np.array_equal(xa, ya):
        return 0.0

    def value(a, b):
        u = cross_ratio(xa, ya, a, b)
        v = cross_ratio(xa, ya, b, a)
        w = weight_eval(M, u, v)
        if w <= 0.0:
            raise DegenerateWeightError(f"weight {M.label()} vanishes at cross-ratios ({u}, {v})")
        return 1.0 / w

    return _pair_sup(G, xa, ya, value, grid, refine_tol)


def rho_double_prime(M: WeightFunction, G: DomainSpec, x: Point, y: Point) -> float:
    """|x - y| / M(d(x), d(y)) with d the boundary distance.

    This collapses the two-point boundary supremum for increasing continuous
    M.  It is generally *not* a metric; the verification engine exhibits the
    failures.
    """
    xa = _require_member(G, x, "x")
    ya = _require_member(G, y, "y")
    if np.array_equal(xa, ya):
        return 0.0
    w = weight_eval(M, G.boundary_distance(xa), G.boundary_distance(ya))
    if w <= 0.0:
        raise DegenerateWeightError(f"weight {M.label()} vanishes at boundary distances")
    return float(np.linalg.norm(xa - ya)) / w


# ---------------------------------------------------------------------------
# Half-plane boundary-integral family
# ---------------------------------------------------------------------------

_H2 = HalfPlane()


def _require_h2(x, name: str) -> np.ndarray:
    xa = as_point(x)
    if xa.shape[0] != 2 or xa[1] <= 0.0:
        raise OutsideDomainError(f"{name} {xa.tolist()} is not in the open upper half-plane")
    return xa


def iota(s: float, x: Point, y: Point) -> float:
    """The half-plane distance |x-y| / (|x-y|^2 + 4 h^2)^((1-1/s)/2), s in (1, inf].

    h is the height of the segment midpoint above the boundary axis.  The
    s = inf limit is 2 |x-y| / sqrt(|x-y|^2 + 4 h^2).
    """
    s = float(s)
    if not s > 1:
        raise InvalidParameterError(f"iota order must exceed 1, got {s}")
    xa = _require_h2(x, "x")
    ya = _require_h2(y, "y")
    d = float(np.linalg.norm(xa - ya))
    if d == 0.0:
        return 0.0
    h = 0.5 * (xa[1] + ya[1])
    base = d * d + 4.0 * h * h
    if s == math.inf:
        return 2.0 * d / math.sqrt(base)
    return d / base ** ((1.0 - 1.0 / s) / 2.0)


def _adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                      tol: float, max_depth: int = 48) -> float:
    """Recursive adaptive Simpson with Richardson correction."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        err = left + right - whole
        if abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        if depth >= max_depth:
            raise QuadratureError("adaptive Simpson did not converge to the requested tolerance")
        half = 0.5 * tol
        return (recurse(lo, mid, flo, flm, fmid, left, half, depth + 1)
                + recurse(mid, hi, fmid, frm, fhi, right, half, depth + 1))

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def rho_tilde_halfplane(s: float, x: Point, y: Point, *, tol: float = 1e-9) -> float:
    """(integral over the boundary axis of rho_{A_2}(x-a, y-a)^s da)^(1/s), s > 1.

    The integrand reduces to |x-y|^s ((xi - m)^2 + A^2)^(-s/2) along the axis
    and is integrated by adaptive Simpson after the substitution xi = tan(theta),
    with the slowly decaying far tails added from their asymptotic expansion
    (relative tail error ~ (A/V)^6 at the cut V = 1e4 A).
    """
    s = float(s)
    if not (s > 1 and math.isfinite(s)):
        raise InvalidParameterError(f"integral order must be a finite real > 1, got {s}")
    xa = _require_h2(x, "x")
    ya = _require_h2(y, "y")
    d = float(np.linalg.norm(xa - ya))
    if d == 0.0:
        return 0.0

    m = 0.5 * (xa[0] + ya[0])
    a2 = (0.5 * (xa[0] - ya[0])) ** 2 + (0.5 * (xa[1] - ya[1])) ** 2 + (0.5 * (xa[1] + ya[1])) ** 2
    amp = math.sqrt(a2)
    ds = d**s

    def integrand(theta: float) -> float:
        xi = math.tan(theta)
        sec2 = 1.0 + xi * xi
        return ds * ((xi - m) ** 2 + a2) ** (-0.5 * s) * sec2

    cut = 1e4 * amp
    lo = math.atan(m - cut)
    hi = math.atan(m + cut)
    main = _adaptive_simpson(integrand, lo, hi, tol / 2.0)
    # two symmetric tails, expanded in (A/V)^2
    tail = (cut ** (1.0 - s) / (s - 1.0)
            - 0.5 * s * a2 * cut ** (-1.0 - s) / (s + 1.0)
            + s * (s + 2.0) / 8.0 * a2 * a2 * cut ** (-3.0 - s) / (s + 3.0))
    total = main + 2.0 * ds * tail
    if not (total > 0 and math.isfinite(total)):
        raise QuadratureError(f"boundary integral evaluated to {total}")
    return total ** (1.0 / s)


def c_constant(s: float) -> float:
    """(integral of (1 + z^2)^(-s/2) dz)^(1/s) = (sqrt(pi) Gamma((s-1)/2) / Gamma(s/2))^(1/s).

    Finite exactly for s > 1; evaluated through log-gamma.
    """
    s = float(s)
    if not s > 1:
        raise InvalidParameterError(f"the normalizing integral diverges for s <= 1, got {s}")
    log_integral = 0.5 * math.log(math.pi) + math.lgamma((s - 1.0) / 2.0) - math.lgamma(s / 2.0)
    return math.exp(log_integral / s)


# ---------------------------------------------------------------------------
# Domain spec text format
# ---------------------------------------------------------------------------


def _parse_point_line(line: str):
    tokens = [t for t in line.replace(",", " ").split() if t]
    if len(tokens) == 1 and tokens[0].lower() == "inf":
        return INFINITY
    try:
        return np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise InvalidDomainError(f"cannot parse point line {line!r}") from exc


def parse_domain_spec(text: str) -> DomainSpec:
    """Parse a small text document describing a domain.

    Grammar (one item per line, '#' starts a comment)::

        kind: halfplane | ball | punctured | sampled
        dimension: <int>           # optional for halfplane, required for ball
        <coord> <coord> ...        # one boundary/puncture point per line
        inf                        # the point at infinity (sampled only)
    """
    kind = None
    dimension = None
    points = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if key == "kind":
                kind = value.lower()
            elif key == "dimension":
                try:
                    dimension = int(value)
                except ValueError as exc:
                    raise InvalidDomainError(f"bad dimension {value!r}") from exc
            else:
                raise InvalidDomainError(f"unknown field {key!r} in domain spec")
        else:
            points.append(_parse_point_line(line))

    if kind is None:
        raise InvalidDomainError("domain spec is missing the 'kind' field")
    if kind == "halfplane":
        if dimension not in (None, 2):
            raise InvalidDomainError("the half-plane domain is two-dimensional")
        if points:
            raise InvalidDomainError("the half-plane domain takes no boundary points")
        return HalfPlane()
    if kind == "ball":
        if dimension is None:
            raise InvalidDomainError("ball domains need an explicit dimension")
        if points:
            raise InvalidDomainError("ball domains take no boundary points")
        return UnitBall(dimension)
    if kind == "punctured":
        if any(is_infinite(p) for p in points):
            raise InvalidDomainError("punctures must be finite points")
        return PuncturedSpace(points, n=dimension)
    if kind == "sampled":
        return SampledBoundary(points, n=dimension)
    raise InvalidDomainError(f"unknown domain kind {kind!r}")


def load_domain_spec(path) -> DomainSpec:
    """Read and parse a domain spec file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_domain_spec(fh.read())
