"""Validated parameters, the forward map sinh(a*w)*exp(w), its branch
constants, special points, and a real-branch Lambert W solver."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "AccuracyError",
    "AsymmetryParam",
    "BranchConstants",
    "BranchId",
    "ConvergenceError",
    "DomainError",
    "ParamKind",
    "RangeError",
    "SingularityError",
    "UnsupportedError",
    "as_param",
    "branch_constants",
    "forward",
    "forward_dw",
    "lambert_w",
    "special_point",
]

_EXP_MAX = 709.0  # exp(t) overflows double precision just above this
_EPS = math.ulp(1.0)
INV_E = math.exp(-1.0)


class DomainError(ValueError):
    """Argument lies outside the mathematical domain of the function."""


class RangeError(OverflowError):
    """Result magnitude exceeds the double-precision exponent range."""


class ConvergenceError(RuntimeError):
    """An iteration failed to converge on valid input (treated as a bug)."""


class SingularityError(DomainError):
    """Evaluation requested at a non-removable singularity."""


class UnsupportedError(ValueError):
    """No closed form or special handling exists for the given parameter."""


class AccuracyError(RuntimeError):
    """Requested tolerance could not be certified.

    Carries the computed ``value`` and the achieved error ``estimate``.
    """

    def __init__(self, message: str, value: float | None = None,
                 estimate: float | None = None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class ParamKind(enum.Enum):
    INTERIOR = "interior"      # 0 < a < 1
    ZERO_LIMIT = "zero_limit"  # a = 0: the classical Lambert W case
    ONE_LIMIT = "one_limit"    # a = 1: single increasing branch


class BranchId(enum.Enum):
    """Selector for the two real inverse branches.

    PRINCIPAL returns values >= the minimizer, LOWER values <= it.
    """

    PRINCIPAL = "principal"
    LOWER = "lower"


@dataclass(frozen=True)
class AsymmetryParam:
    """Asymmetry parameter of the forward map, validated to lie in [0, 1].

    ``exact`` holds the rational value when constructed through
    :meth:`from_rational`; closed-form dispatch keys on it exactly, never
    on a floating-point comparison.
    """

    a: float
    exact: Fraction | None = None

    def __post_init__(self):
        a = self.a
        if isinstance(a, bool) or not isinstance(a, (int, float)):
            raise DomainError(f"asymmetry parameter must be a real number, got {a!r}")
        a = float(a)
        if not math.isfinite(a):
            raise DomainError(f"asymmetry parameter must be finite, got {a!r}")
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"asymmetry parameter must lie in [0, 1], got {a!r}")
        object.__setattr__(self, "a", a)
        if self.exact is not None and float(self.exact) != a:
            raise DomainError("exact rational does not match the float value")

    @classmethod
    def from_rational(cls, num: int, den: int) -> "AsymmetryParam":
        frac = Fraction(num, den)
        return cls(float(frac), frac)

    @property
    def kind(self) -> ParamKind:
        if self.a == 0.0:
            return ParamKind.ZERO_LIMIT
        if self.a == 1.0:
            return ParamKind.ONE_LIMIT
        return ParamKind.INTERIOR


def as_param(a) -> AsymmetryParam:
    """Coerce a float, Fraction, or AsymmetryParam into an AsymmetryParam."""
    if isinstance(a, AsymmetryParam):
        return a
    if isinstance(a, Fraction):
        return AsymmetryParam(float(a), a)
    return AsymmetryParam(float(a))


@dataclass(frozen=True)
class BranchConstants:
    """Branch-point data of the forward map for a fixed asymmetry.

    ``f_min`` is the (negative) minimum value attained at ``w_min``;
    ``scale`` = f_min*(a^2-1) > 0 sets the natural scale of the
    square-root expansions around the branch point.
    """

    f_min: float
    w_min: float
    scale: float


def forward(a, w: float) -> float:
    """Forward map f(a, w) = sinh(a*w)*exp(w).

    Evaluated as exp((1-a)*w)*expm1(2*a*w)/2, which is free of subtractive
    cancellation for every w and reduces to the correct limits at a=0
    (identically 0) and a=1 (expm1(2w)/2).

    Raises RangeError when (1+a)*w exceeds the double exponent range.
    """
    p = as_param(a)
    w = float(w)
    if not math.isfinite(w):
        raise DomainError(f"w must be finite, got {w!r}")
    aa = p.a
    if aa == 0.0:
        return 0.0
    if (1.0 + aa) * w > _EXP_MAX:
        raise RangeError(f"(1+a)*w = {(1.0 + aa) * w!r} exceeds the exponent range")
    return 0.5 * math.exp((1.0 - aa) * w) * math.expm1(2.0 * aa * w)


def forward_dw(a, w: float) -> float:
    """Partial derivative of the forward map with respect to w.

    Uses d/dw f = ((1+a)*expm1(2aw) + 2a) * exp((1-a)w) / 2, exact at the
    minimizer where the two exponential terms cancel.
    """
    p = as_param(a)
    w = float(w)
    aa = p.a
    if aa == 0.0:
        return 0.0
    if (1.0 + aa) * w > _EXP_MAX:
        raise RangeError(f"(1+a)*w = {(1.0 + aa) * w!r} exceeds the exponent range")
    return 0.5 * math.exp((1.0 - aa) * w) * ((1.0 + aa) * math.expm1(2.0 * aa * w) + 2.0 * aa)


@lru_cache(maxsize=512)
def _constants_for(a: float) -> BranchConstants:
    if a == 0.0:
        # Lambert limit: constants of w*exp(w), whose branch point is (-1/e, -1).
        return BranchConstants(f_min=-INV_E, w_min=-1.0, scale=INV_E)
    log_ratio = math.log1p(-a) - math.log1p(a)  # log((1-a)/(1+a))
    w_min = log_ratio / (2.0 * a)
    f_min = -a / math.sqrt((1.0 - a) * (1.0 + a)) * math.exp(log_ratio / (2.0 * a))
    scale = f_min * (a * a - 1.0)
    return BranchConstants(f_min=f_min, w_min=w_min, scale=scale)


def branch_constants(a) -> BranchConstants:
    """Branch constants (minimum value, minimizer, expansion scale).

    Defined in closed form for 0 < a < 1.  At a = 0 the continuity limit of
    the scaled problem is returned (the Lambert W branch point -1/e at -1).
    At a = 1 the forward map is strictly increasing and has no minimum.
    """
    p = as_param(a)
    if p.kind is ParamKind.ONE_LIMIT:
        raise DomainError("branch constants undefined at a=1: the map has no minimum")
    return _constants_for(p.a)


def special_point(a, n: int) -> tuple[float, float]:
    """Exact lower-branch sample (x_n, w_n) with w_n = n * w_min.

    The n-th derivative of the forward map vanishes at n*w_min, and the
    map value there has the closed form
    x_n = ((1-a)/(1+a))^(n(1-a)/(2a)) * (((1-a)/(1+a))^n - 1) / 2,
    so that the lower branch satisfies psi(x_n) = n*w_min.
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("special points require 0 < a < 1")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    aa = p.a
    log_ratio = math.log1p(-aa) - math.log1p(aa)
    prefactor = math.exp(n * (1.0 - aa) / (2.0 * aa) * log_ratio)
    x = 0.5 * prefactor * math.expm1(n * log_ratio)
    w = n * _constants_for(aa).w_min
    return x, w


def _lambert_halley(x: float, w: float, lo: float = -math.inf,
                    hi: float = math.inf) -> float:
    """Polish a Lambert W estimate with Halley iteration on w*e^w - x.

    Iterates are pulled back toward the [lo, hi] interval so the solution
    cannot hop to the other real branch.  A two-cycle at the rounding
    floor (typical just off the branch point) terminates the iteration.
    """
    prev = math.nan
    for _ in range(100):
        ew = math.exp(w)
        r = w * ew - x
        if r == 0.0:
            return w
        wp1 = w + 1.0
        if wp1 == 0.0:
            return w
        denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1)
        if denom == 0.0:
            return w
        dw = r / denom
        cand = w - dw
        if cand < lo:
            cand = 0.5 * (w + lo)
        elif cand > hi:
            cand = 0.5 * (w + hi)
        if abs(cand - w) <= 4.0 * _EPS * (1.0 + abs(cand)) or cand == prev:
            return cand
        prev = w
        w = cand
    raise ConvergenceError(f"Lambert W iteration failed for x={x!r}")


def lambert_w(branch: BranchId, x: float) -> float:
    """Real Lambert W: solves w*exp(w) = x.

    PRINCIPAL covers x >= -1/e with w >= -1; LOWER covers -1/e <= x < 0
    with w <= -1.  Halley iteration from a piecewise initial guess: a
    square-root expansion near the branch point -1/e, a rational guess for
    moderate x, and log(x) - log(log(x)) style asymptotics otherwise.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    # d = e*x + 1 measures the distance to the branch point in natural units
    d = math.e * x + 1.0
    if d < 0.0:
        if d < -32.0 * _EPS:
            raise DomainError(f"x = {x!r} below the branch point -1/e")
        d = 0.0
    if branch is BranchId.PRINCIPAL:
        if x == 0.0:
            return 0.0
        if d <= 0.2:
            pbp = math.sqrt(2.0 * d)
            w = -1.0 + pbp * (1.0 - pbp * (1.0 / 3.0 - pbp * 11.0 / 72.0))
        elif x < 3.0:
            w = x / (1.0 + x)
        else:
            l1 = math.log(x)
            l2 = math.log(l1)
            w = l1 - l2 + l2 / l1
        return _lambert_halley(x, max(w, -1.0), lo=-1.0)
    if branch is BranchId.LOWER:
        if x >= 0.0:
            raise DomainError(f"lower branch requires -1/e <= x < 0, got {x!r}")
        if d == 0.0:
            return -1.0
        if d <= 0.3:
            pbp = math.sqrt(2.0 * d)
            w = -1.0 - pbp * (1.0 + pbp * (1.0 / 3.0 + pbp * 11.0 / 72.0))
        else:
            l1 = math.log(-x)
            l2 = math.log(-l1)
            w = l1 - l2 + l2 / l1
        return _lambert_halley(x, min(w, -1.0), hi=-1.0)
    raise UnsupportedError(f"unknown branch {branch!r}")
