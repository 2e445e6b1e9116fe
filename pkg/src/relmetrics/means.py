"""Bivariate means, quasimeans and the weight functions built from them.

The central objects are the power mean

    A_p(x, y) = ((x^p + y^p)/2)^(1/p),   A_-inf = min,  A_0 = sqrt(xy),  A_inf = max,

with the convention A_p(x, 0) = 0 for p <= 0, the logarithmic mean
L(x, y) = (x - y)/(log x - log y), the one-parameter quasimean family

    S_a(x, y) = (1 - a) (x - y) / (x^(1-a) - y^(1-a)),   0 < a < 1,   S_1 = L,

and Stolarsky's mean St_q = S_(1-q)^(1/(1-q)) for 0 <= q < 1.

Weight functions are symmetric maps M: [0,inf)^2 -> [0,inf) used as the
denominator of a relative distance |x - y| / M(|x|, |y|).  They form a small
closed family (power-mean powers, products f(x)f(y), scaled means, min, max,
constants, user closures) dispatched through :func:`weight_eval`.

Everything here is a pure function of its arguments; all weight objects are
immutable, so concurrent evaluation from multiple threads is safe.  Scalar
arguments give floats back; numpy arrays broadcast elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import EvaluationError, InvalidParameterError

__all__ = [
    "power_mean",
    "logarithmic_mean",
    "stolarsky_quasimean",
    "stolarsky_mean",
    "trace",
    "weight_eval",
    "PowerMeanPower",
    "ScaledPowerMean",
    "ProductWeight",
    "MinMean",
    "MaxMean",
    "ConstantWeight",
    "CustomWeight",
    "WeightFunction",
    "stolarsky_weight",
]

# Relative gap under which the direct S_a / L formulas would lose ~half the
# mantissa to cancellation; below it we evaluate the midpoint power instead
# (the two expansions agree to second order in the gap).
_NEAR_DIAGONAL = 1e-8


def _prepare(x, y):
    """Broadcast two nonnegative inputs to float arrays; remember scalarness."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    scalar = xa.ndim == 0 and ya.ndim == 0
    if np.any(np.isnan(xa)) or np.any(np.isnan(ya)):
        raise InvalidParameterError("mean arguments must not be NaN")
    if np.any(xa < 0) or np.any(ya < 0):
        raise InvalidParameterError("mean arguments must be nonnegative")
    return xa, ya, scalar


def _ret(out, scalar):
    return float(out) if scalar else out


def _check_order(p) -> float:
    p = float(p)
    if math.isnan(p):
        raise InvalidParameterError("power-mean order must not be NaN")
    return p


def power_mean(p, x, y):
    """Power mean of order ``p`` (an extended real) of two nonnegative numbers.

    The three limit orders -inf, 0, +inf mean min, geometric mean and max and
    must be passed exactly: a tiny nonzero ``p`` is evaluated by the generic
    formula, not snapped to the geometric mean.  For p <= 0 the convention
    A_p(x, 0) = 0 applies.  The generic branch factors out the larger (p > 0)
    or smaller (p < 0) argument, so it does not overflow for large ``|p|``.
    """
    p = _check_order(p)
    xa, ya, scalar = _prepare(x, y)
    hi = np.maximum(xa, ya)
    lo = np.minimum(xa, ya)
    if p == math.inf:
        return _ret(hi, scalar)
    if p == -math.inf:
        return _ret(lo, scalar)
    if p == 0.0:
        return _ret(np.sqrt(lo) * np.sqrt(hi), scalar)
    # ((1 + r^p)/2)^(1/p) evaluated as exp(log1p(expm1(p log r)/2)/p): the
    # expm1/log1p pair preserves relative precision even when 1/p amplifies
    # the rounding of r^p (tiny |p|), and the factoring bounds r^p by 1.
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if p > 0:
            r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
            out = hi * np.exp(np.log1p(np.expm1(p * np.log(r)) / 2.0) / p)
        else:
            t = np.where(lo > 0, hi / np.where(lo > 0, lo, 1.0), math.inf)
            out = lo * np.exp(np.log1p(np.expm1(p * np.log(t)) / 2.0) / p)
    return _ret(out, scalar)


def logarithmic_mean(x, y):
    """Logarithmic mean (x - y)/(log x - log y), with L(x, x) = x and L(x, 0) = 0."""
    return stolarsky_quasimean(1.0, x, y)


def stolarsky_quasimean(alpha, x, y):
    """The a-quasimean S_a(x, y) = (1-a)(x-y)/(x^(1-a) - y^(1-a)), 0 < a <= 1.

    S_1 is the logarithmic mean; the diagonal value is x^a and S_1(x, 0) = 0.
    Near the diagonal (relative gap below 1e-8) the midpoint power
    ((x+y)/2)^a is returned to avoid catastrophic cancellation; the two
    expressions differ by O(gap^2) there.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameterError(f"quasimean exponent must lie in (0, 1], got {alpha}")
    xa, ya, scalar = _prepare(x, y)
    hi = np.maximum(xa, ya)
    lo = np.minimum(xa, ya)
    near = (hi - lo) <= _NEAR_DIAGONAL * hi
    mid = ((xa + ya) / 2.0) ** alpha
    # hi^b - lo^b is evaluated as lo^b expm1(b log1p((hi-lo)/lo)), which keeps
    # full precision at any gap; the y = 0 limit falls out of the where masks.
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        gap_ratio = np.where(lo > 0, (hi - lo) / np.where(lo > 0, lo, 1.0), math.inf)
        if alpha == 1.0:
            gen = np.where(lo > 0, (hi - lo) / np.log1p(gap_ratio), 0.0)
        else:
            b = 1.0 - alpha
            denom = np.where(lo > 0, lo**b * np.expm1(b * np.log1p(gap_ratio)), hi**b)
            gen = b * (hi - lo) / denom
    out = np.where(near, mid, gen)
    return _ret(out, scalar)


def stolarsky_mean(q, x, y):
    """Stolarsky mean St_q(x, y) = S_(1-q)(x, y)^(1/(1-q)) for 0 <= q < 1, x, y > 0.

    St_0 is the logarithmic mean.  Orders outside [0, 1) are rejected; the
    extension to other orders exists but is not provided here.
    """
    q = float(q)
    if not 0.0 <= q < 1.0:
        raise InvalidParameterError(f"Stolarsky order must lie in [0, 1), got {q}")
    xa, ya, scalar = _prepare(x, y)
    if np.any(xa <= 0) or np.any(ya <= 0):
        raise InvalidParameterError("Stolarsky mean requires strictly positive arguments")
    b = 1.0 - q
    out = stolarsky_quasimean(b, xa, ya) ** (1.0 / b)
    return _ret(out, scalar)


# ---------------------------------------------------------------------------
# Weight functions
# ---------------------------------------------------------------------------


def _call_elementwise(fn: Callable, arr):
    """Apply a scalar function to an array, vectorizing if it cannot broadcast."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        try:
            out = fn(arr)
        except (TypeError, ValueError):
            out = np.vectorize(fn, otypes=[float])(arr)
    return np.asarray(out, dtype=float)


@dataclass(frozen=True)
class PowerMeanPower:
    """Weight M = A_p^q: the q-th power of the power mean of order p (q > 0)."""

    p: float
    q: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p", _check_order(self.p))
        object.__setattr__(self, "q", float(self.q))
        if not self.q > 0:
            raise InvalidParameterError(f"power-mean exponent q must be positive, got {self.q}")

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return self.q

    def evaluate(self, x, y):
        return power_mean(self.p, x, y) ** self.q

    def label(self) -> str:
        return f"power:p={self.p},q={self.q}"


@dataclass(frozen=True)
class ScaledPowerMean:
    """Weight M = scale * A_p.  (scale = 1/c turns the relative distance into c*rho.)"""

    p: float
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_order(self.p))
        object.__setattr__(self, "scale", float(self.scale))
        if not self.scale > 0:
            raise InvalidParameterError(f"scale must be positive, got {self.scale}")

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return 1.0

    def evaluate(self, x, y):
        return self.scale * power_mean(self.p, x, y)

    def label(self) -> str:
        return f"scaled:p={self.p},scale={self.scale}"


@dataclass(frozen=True)
class ProductWeight:
    """Weight M(x, y) = f(x) f(y) for a user function f: [0,inf) -> (0,inf).

    f must be strictly positive everywhere on [0,inf); a nonpositive value
    surfaces as :class:`EvaluationError` at evaluation time.
    """

    f: Callable[[float], float]
    name: str = "f"

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return None

    def evaluate(self, x, y):
        fx = _call_elementwise(self.f, np.asarray(x, dtype=float))
        fy = _call_elementwise(self.f, np.asarray(y, dtype=float))
        if np.any(fx <= 0) or np.any(fy <= 0) or np.any(np.isnan(fx)) or np.any(np.isnan(fy)):
            raise EvaluationError(f"product weight factor {self.name!r} must be positive and finite")
        return fx * fy

    def label(self) -> str:
        return f"product:f={self.name}"


@dataclass(frozen=True)
class MinMean:
    """Weight M(x, y) = min(x, y)."""

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return 1.0

    def evaluate(self, x, y):
        return np.minimum(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def label(self) -> str:
        return "min"


@dataclass(frozen=True)
class MaxMean:
    """Weight M(x, y) = max(x, y)."""

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return 1.0

    def evaluate(self, x, y):
        return np.maximum(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def label(self) -> str:
        return "max"


@dataclass(frozen=True)
class ConstantWeight:
    """Weight M identically equal to a positive constant."""

    c: float

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        if not self.c > 0:
            raise InvalidParameterError(f"constant weight must be positive, got {self.c}")

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return 0.0

    def evaluate(self, x, y):
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        return np.full(np.broadcast_shapes(xa.shape, ya.shape), self.c)

    def label(self) -> str:
        return f"const:c={self.c}"


@dataclass(frozen=True)
class CustomWeight:
    """Arbitrary symmetric user weight g(x, y); symmetry is the caller's promise."""

    fn: Callable
    name: str = "custom"
    homogeneity: Optional[float] = field(default=None)

    @property
    def homogeneity_degree(self) -> Optional[float]:
        return self.homogeneity

    def evaluate(self, x, y):
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        try:
            out = self.fn(xa, ya)
        except (TypeError, ValueError):
            out = np.vectorize(self.fn, otypes=[float])(xa, ya)
        out = np.asarray(out, dtype=float)
        if np.any(np.isnan(out)):
            raise EvaluationError(f"custom weight {self.name!r} returned NaN")
        return out

    def label(self) -> str:
        return self.name


WeightFunction = Union[
    PowerMeanPower,
    ScaledPowerMean,
    ProductWeight,
    MinMean,
    MaxMean,
    ConstantWeight,
    CustomWeight,
]


def stolarsky_weight(alpha: float) -> CustomWeight:
    """The quasimean S_alpha packaged as a weight function (alpha-homogeneous)."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameterError(f"quasimean exponent must lie in (0, 1], got {alpha}")
    return CustomWeight(
        fn=lambda x, y: stolarsky_quasimean(alpha, x, y),
        name=f"stolarsky:alpha={alpha}",
        homogeneity=alpha,
    )


def weight_eval(M: WeightFunction, x, y):
    """Evaluate a weight function at nonnegative x, y (scalars or arrays)."""
    xa, ya, scalar = _prepare(x, y)
    out = M.evaluate(xa, ya)
    return _ret(out, scalar)


def trace(M: WeightFunction, x):
    """The trace t_M(x) = M(x, 1), defined for x >= 1."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 1):
        raise InvalidParameterError("trace is defined for arguments >= 1")
    return weight_eval(M, x, np.ones_like(xa) if xa.ndim else 1.0)
