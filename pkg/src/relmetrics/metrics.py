"""Relative distances on Euclidean space and the classical metric transforms.

The basic object is rho(M, x, y) = |x - y| / M(|x|, |y|) for a symmetric
weight function M, together with its named special cases: the power-mean
family rho_pq, the logarithmic variant lambda_apc, the chordal metric on the
one-point compactification, and the product-normalizer family example_metric.

Points are plain float vectors of any dimension (dimension is a runtime
value).  The distinguished point at infinity, :data:`INFINITY`, is accepted
only by the chordal metric and the cross-ratio machinery built on it; the
plain relative distance rejects it.

All functions are pure and thread-safe.
"""

from __future__ import annotations

import enum
import math
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateWeightError, InvalidParameterError, OutsideDomainError
from .means import PowerMeanPower, ScaledPowerMean, WeightFunction, weight_eval

__all__ = [
    "INFINITY",
    "PointAtInfinity",
    "Point",
    "as_point",
    "is_infinite",
    "norm",
    "dist",
    "MetricKind",
    "transform",
    "rho",
    "rho_pq",
    "lambda_apc",
    "chordal",
    "example_metric",
]


class PointAtInfinity:
    """Singleton marker for the point at infinity of the compactified space."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = PointAtInfinity()

Point = Union[float, Sequence[float], np.ndarray, PointAtInfinity]


def is_infinite(p: Point) -> bool:
    return isinstance(p, PointAtInfinity)


def as_point(p: Point) -> np.ndarray:
    """Coerce to a finite float vector; scalars become 1-D points."""
    if is_infinite(p):
        raise OutsideDomainError("the point at infinity is not allowed here")
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.ndim != 1:
        raise InvalidParameterError(f"a point must be a flat coordinate vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("finite points must have finite coordinates")
    return arr


def _pair(x: Point, y: Point):
    xa = as_point(x)
    ya = as_point(y)
    if xa.shape != ya.shape:
        raise InvalidParameterError(f"dimension mismatch: {xa.shape[0]} vs {ya.shape[0]}")
    return xa, ya


def _vec_norm(arr: np.ndarray) -> float:
    """Euclidean norm via math.hypot, which rescales internally and so
    neither overflows nor underflows for extreme coordinates."""
    return math.hypot(*arr) if arr.shape[0] > 1 else abs(float(arr[0]))


def norm(p: Point) -> float:
    return _vec_norm(as_point(p))


def dist(x: Point, y: Point) -> float:
    xa, ya = _pair(x, y)
    return _vec_norm(xa - ya)


class MetricKind(enum.Enum):
    """Increasing 0-fixing rescalings of a distance."""

    RAW = "raw"
    LOG1P = "log1p"
    ARCSINH = "arcsinh"
    ARCCOSH1P = "arccosh1p"


def transform(d: float, kind: MetricKind) -> float:
    """Apply one of the metric transforms to a nonnegative distance value."""
    d = float(d)
    if d < 0:
        raise InvalidParameterError("distances must be nonnegative")
    if kind is MetricKind.RAW:
        return d
    if kind is MetricKind.LOG1P:
        return math.log1p(d)
    if kind is MetricKind.ARCSINH:
        return math.asinh(d)
    if kind is MetricKind.ARCCOSH1P:
        return math.acosh(1.0 + d)
    raise InvalidParameterError(f"unknown transform kind {kind!r}")


def rho(M: WeightFunction, x: Point, y: Point) -> float:
    """Relative distance |x - y| / M(|x|, |y|).

    Coincident points give 0, covering the 0/0 case at the origin.  If the
    weight vanishes at distinct points the distance is undefined and
    :class:`DegenerateWeightError` is raised rather than returning infinity.
    """
    xa, ya = _pair(x, y)
    if np.array_equal(xa, ya):
        return 0.0
    nx, ny = _vec_norm(xa), _vec_norm(ya)
    w = weight_eval(M, nx, ny)
    if w <= 0.0:
        raise DegenerateWeightError(f"weight {M.label()} vanishes at |x|={nx}, |y|={ny}")
    return _vec_norm(xa - ya) / w


def rho_pq(p: float, q: float, x: Point, y: Point) -> float:
    """The (p, q)-relative distance |x - y| / A_p(|x|, |y|)^q."""
    return rho(PowerMeanPower(p, q), x, y)


def lambda_apc(p: float, c: float, x: Point, y: Point) -> float:
    """log(1 + c |x - y| / A_p(|x|, |y|)): the relative distance for A_p / c, log-damped.

    Dividing the mean by c multiplies the relative distance by c, which is
    why c appears as a factor inside the logarithm.
    """
    c = float(c)
    if not c > 0:
        raise InvalidParameterError(f"c must be positive, got {c}")
    return math.log1p(rho(ScaledPowerMean(p, 1.0 / c), x, y))


def _chordal_lift(p: Point) -> float:
    """sqrt(1 + |p|^2), the stereographic normalizer."""
    return math.hypot(1.0, _vec_norm(as_point(p)))


def chordal(x: Point, y: Point) -> float:
    """Chordal distance on the one-point compactification; range [0, 1].

    q(x, y) = |x - y| / (sqrt(1+|x|^2) sqrt(1+|y|^2)), q(x, inf) = 1/sqrt(1+|x|^2)
    and q(inf, inf) = 0.
    """
    xinf, yinf = is_infinite(x), is_infinite(y)
    if xinf and yinf:
        return 0.0
    if xinf:
        return 1.0 / _chordal_lift(y)
    if yinf:
        return 1.0 / _chordal_lift(x)
    xa, ya = _pair(x, y)
    return _vec_norm(xa - ya) / _chordal_lift(xa) / _chordal_lift(ya)


def _example_normalizer(p: float, t: float) -> float:
    """(1 + t^p)^(1/p) without overflow for large t."""
    if t <= 1.0:
        return (1.0 + t**p) ** (1.0 / p)
    return t * (1.0 + t**-p) ** (1.0 / p)


def example_metric(p: float, x: Point, y: Point) -> float:
    """|x - y| / ((1 + |x|^p)^(1/p) (1 + |y|^p)^(1/p)).

    A metric for p >= 1; smaller positive p is accepted so counterexample
    searches can probe the failure region.  p = 2 gives the chordal metric.
    """
    p = float(p)
    if not p > 0:
        raise InvalidParameterError(f"normalizer exponent must be positive, got {p}")
    xa, ya = _pair(x, y)
    nx = _example_normalizer(p, _vec_norm(xa))
    ny = _example_normalizer(p, _vec_norm(ya))
    # divide twice: the product of the normalizers can overflow when the
    # quotient is still representable
    return _vec_norm(xa - ya) / nx / ny
