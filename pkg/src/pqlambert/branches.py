"""Numerical evaluation of the two inverse branches psi_0/psi_-1 of
sinh(a*w)*exp(w), their closed forms at special rational a, the branch
transition function omega, and its finite-n analogue."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from ._rootfind import newton_bracketed
from .core import (
    AsymmetryParam,
    BranchId,
    ConvergenceError,
    DomainError,
    ParamKind,
    UnsupportedError,
    as_param,
    branch_constants,
    forward,
    lambert_w,
)

__all__ = [
    "ClosedFormTag",
    "PsiQuery",
    "omega",
    "omega_closed_form",
    "omega_finite_n",
    "psi",
    "psi_closed_form",
]

_EPS = math.ulp(1.0)
_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


class ClosedFormTag(enum.Enum):
    """Which special rational asymmetry (if any) a parameter matches exactly."""

    A13 = Fraction(1, 3)
    A12 = Fraction(1, 2)
    A15 = Fraction(1, 5)
    A35 = Fraction(3, 5)
    A17 = Fraction(1, 7)
    NONE = None

    @classmethod
    def classify(cls, a) -> "ClosedFormTag":
        p = as_param(a)
        if p.exact is not None:
            for tag in cls:
                if tag.value is not None and p.exact == tag.value:
                    return tag
        return cls.NONE


def _domain_tol(f_min: float) -> float:
    return 8.0 * _EPS * abs(f_min)


def _check_branch_domain(p: AsymmetryParam, branch: BranchId, x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if p.kind is ParamKind.ZERO_LIMIT:
        raise DomainError(
            "inverse branches are undefined at a=0 (the forward map vanishes); "
            "rescale through lambert_w instead")
    if p.kind is ParamKind.ONE_LIMIT:
        if branch is BranchId.LOWER:
            raise DomainError("the lower branch does not exist at a=1")
        if x <= -0.5:
            raise DomainError(f"principal branch at a=1 requires x > -1/2, got {x!r}")
        return
    bc = branch_constants(p)
    tol = _domain_tol(bc.f_min)
    if x < bc.f_min - tol:
        raise DomainError(f"x = {x!r} below the branch-point value L_a = {bc.f_min!r}")
    if branch is BranchId.LOWER and x >= 0.0:
        raise DomainError(f"lower branch requires x < 0, got {x!r}")


@dataclass(frozen=True)
class PsiQuery:
    """Validated evaluation request for one inverse branch."""

    a: AsymmetryParam
    branch: BranchId
    x: float

    def __post_init__(self):
        object.__setattr__(self, "a", as_param(self.a))
        object.__setattr__(self, "x", float(self.x))
        _check_branch_domain(self.a, self.branch, self.x)


def _bp_seed(bc, t: float, sign: float, a: float) -> float:
    """Four-term branch-point series seed in the scaled coordinate t."""
    s = math.sqrt(t)
    c3 = (11.0 - 3.0 * a * a) / (18.0 * _SQRT2)
    c4 = -(43.0 - 27.0 * a * a) / 135.0
    return bc.w_min + sign * _SQRT2 * s - (2.0 / 3.0) * t + sign * c3 * t * s + c4 * t * t


def _asym0_seed(a: float, x: float) -> float:
    """Three-term large-x expansion of the principal branch."""
    y = (2.0 * x) ** (-2.0 * a / (1.0 + a))
    ap1 = 1.0 + a
    return (math.log(2.0 * x) / ap1 + y / ap1
            + (1.0 - 3.0 * a) * y * y / (2.0 * ap1 * ap1)
            + (10.0 * a * a - 7.0 * a + 1.0) * y ** 3 / (3.0 * ap1 ** 3))


def _asym1_seed(a: float, x: float) -> float:
    """Three-term small-|x| expansion of the lower branch."""
    z = (-2.0 * x) ** (2.0 * a / (1.0 - a))
    am1 = 1.0 - a
    return (math.log(-2.0 * x) / am1 + z / am1
            + (1.0 + 3.0 * a) * z * z / (2.0 * am1 * am1)
            + (10.0 * a * a + 7.0 * a + 1.0) * z ** 3 / (3.0 * am1 ** 3))


def _solve_branch(p: AsymmetryParam, branch: BranchId, x: float) -> float:
    a = p.a
    bc = branch_constants(p)
    fmin, wmin, scale = bc.f_min, bc.w_min, bc.scale
    tol = _domain_tol(fmin)
    if x - fmin <= tol:
        return wmin

    def g(w):
        e = math.exp((1.0 - a) * w)
        s = math.expm1(2.0 * a * w)
        return 0.5 * e * s - x, 0.5 * e * ((1.0 + a) * s + 2.0 * a)

    t = (x - fmin) / scale  # branch-point coordinate, in [0, 1/(1-a^2))
    t_max = 1.0 / ((1.0 - a) * (1.0 + a))
    if branch is BranchId.PRINCIPAL:
        if x == 0.0:
            return 0.0
        if x < 0.0:
            if t <= 0.6 * t_max:
                seed = _bp_seed(bc, t, 1.0, a)
            else:
                # |x| < 0.4|L_a| < radius of the Taylor series at 0
                u = x / a
                seed = u - u * u / a + (9.0 - a * a) * u ** 3 / (6.0 * a * a)
            return newton_bracketed(g, wmin, 0.0, seed, increasing=True)
        if x >= 10.0:
            seed = _asym0_seed(a, x)
        elif t <= 0.6 * t_max:
            seed = _bp_seed(bc, t, 1.0, a)
        elif x >= 1.0:
            seed = _asym0_seed(a, x)
        else:
            seed = 0.5 * math.log1p(2.0 * x)  # elementary a=1 lower bound
        hi = max(seed, 0.0) + 1.0
        step = 1.0
        while True:
            gh, _ = g(hi)
            if gh >= 0.0:
                break
            hi += step
            step *= 2.0
        return newton_bracketed(g, 0.0, hi, seed, increasing=True)
    # lower branch: monotone decreasing on (-inf, w_min]
    if t <= 0.5 * t_max:
        seed = _bp_seed(bc, t, -1.0, a)
    else:
        seed = _asym1_seed(a, x)
    lo = min(seed, wmin) - 1.0
    step = 1.0
    while True:
        gl, _ = g(lo)
        if gl >= 0.0:
            break
        lo -= step
        step *= 2.0
    return newton_bracketed(g, lo, wmin, seed, increasing=False)


def psi(a, branch: BranchId, x: float) -> float:
    """Inverse of the forward map on one real branch.

    Solves sinh(a*w)*exp(w) = x for w, with the principal branch returning
    w >= w_min (defined for x >= f_min) and the lower branch w <= w_min
    (defined for f_min <= x < 0).  Safeguarded Newton iteration inside a
    guaranteed monotonicity bracket; seeds come from the branch-point
    series near f_min, the large/small-x expansions, or the Taylor series
    at zero, whichever region applies.
    """
    p = as_param(a)
    x = float(x)
    _check_branch_domain(p, branch, x)
    if p.kind is ParamKind.ONE_LIMIT:
        return 0.5 * math.log1p(2.0 * x)
    return _solve_branch(p, branch, x)


def _cbrt(t: float) -> float:
    return math.copysign(abs(t) ** (1.0 / 3.0), t)


def _psi_13(branch: BranchId, x: float) -> float:
    root = math.sqrt(max(2.0 * x + 0.25, 0.0))
    if branch is BranchId.PRINCIPAL:
        return 1.5 * math.log(0.5 + root)
    # 1/2 - root rewritten to avoid cancellation as x -> 0^-
    return 1.5 * math.log(-2.0 * x / (0.5 + root))


def _psi_12(branch: BranchId, x: float) -> float:
    if branch is BranchId.PRINCIPAL:
        if x >= _SQRT3 / 9.0:
            s = math.sqrt(max(x * x - 1.0 / 27.0, 0.0))
            return 2.0 * math.log(_cbrt(x + s) + _cbrt(x - s))
        u = math.acos(max(min(3.0 * _SQRT3 * x, 1.0), -1.0))
        return 2.0 * math.log(2.0 / _SQRT3 * math.cos(u / 3.0))
    # cos((acos(3*sqrt(3)x) + 4*pi)/3) == sin(asin(-3*sqrt(3)x)/3) for x < 0
    u = math.asin(max(min(-3.0 * _SQRT3 * x, 1.0), -1.0))
    return 2.0 * math.log(2.0 / _SQRT3 * math.sin(u / 3.0))


def _acos_shifted(x: float) -> float:
    """acos(1 + 27x) for -2/27 <= x <= 0, via the half-angle form.

    acos(1 - e) = 2*asin(sqrt(e/2)) avoids the catastrophic conditioning of
    acos near argument 1.
    """
    return 2.0 * math.asin(min(math.sqrt(max(-13.5 * x, 0.0)), 1.0))


def _psi_15(branch: BranchId, x: float) -> float:
    if branch is BranchId.PRINCIPAL:
        if x >= 0.0:
            s = math.sqrt(x * x + 2.0 * x / 27.0)
            return 2.5 * math.log(_cbrt(x + 1.0 / 27.0 + s) + _cbrt(x + 1.0 / 27.0 - s) + 1.0 / 3.0)
        u = _acos_shifted(x)
        return 2.5 * math.log(2.0 / 3.0 * math.cos(u / 3.0) + 1.0 / 3.0)
    # cos((acos(1+27x)+4*pi)/3) + 1/2 == sin^2(u/6) + sqrt(3)/2*sin(u/3), u = acos(1+27x)
    u = _acos_shifted(x)
    return 2.5 * math.log(2.0 / 3.0 * math.sin(u / 6.0) ** 2 + math.sin(u / 3.0) / _SQRT3)


def _aux_35(x: float) -> float:
    """Real root of v^3 + 2xv - 1/8 = 0 via the depressed-cubic radicals."""
    e = 4.0 * (8.0 * x / 3.0) ** 3  # s^2 = 1 + e
    if e <= 0.0:
        # x <= 0: s < 1 and 1-s = -e/(1+s) avoids cancellation as x -> 0^-
        s = math.sqrt(max(1.0 + e, 0.0))
        return (_cbrt(-e / (1.0 + s)) + _cbrt(1.0 + s)) / _cbrt(16.0)
    # x > 0: cbrt(1-s)+cbrt(1+s) rationalized to 2/((1+s)^(2/3) + e^(1/3) + (s-1)^(2/3))
    s = math.sqrt(1.0 + e)
    den = (1.0 + s) ** (2.0 / 3.0) + e ** (1.0 / 3.0) + (e / (1.0 + s)) ** (2.0 / 3.0)
    return 2.0 / (den * _cbrt(16.0))


def _psi_35(branch: BranchId, x: float) -> float:
    v = _aux_35(x)
    tv = 2.0 * v
    root = math.sqrt(max(2.0 - tv ** 1.5, 0.0))
    if branch is BranchId.PRINCIPAL:
        return 2.5 * math.log((tv ** 0.75 + root) / (2.0 * tv ** 0.25))
    return 2.5 * math.log((tv ** 0.75 - root) / (2.0 * tv ** 0.25))


def _aux_17(x: float) -> float:
    s2 = (2.0 * x / 3.0) ** 3 + (x / 8.0) ** 2
    s = math.sqrt(max(s2, 0.0))
    if x <= 0.0:
        # -x/8 - s = (-8x^3/27)/(-x/8 + s): keeps the small root exact as x -> 0^-
        hi = -x / 8.0 + s
        small = 0.0 if hi == 0.0 else (-8.0 * x ** 3 / 27.0) / hi
        return _cbrt(hi) + _cbrt(small)
    # for x>0 the two cube roots nearly cancel; rationalize their difference
    hi = s + x / 8.0
    lo = (2.0 * x / 3.0) ** 3 / hi  # s - x/8, rationalized
    den = hi ** (2.0 / 3.0) + (lo * hi) ** (1.0 / 3.0) + lo ** (2.0 / 3.0)
    return -x / (4.0 * den)


def _psi_17(branch: BranchId, x: float) -> float:
    v = _aux_17(x)
    r1 = math.sqrt(max(2.0 * v + 0.25, 0.0))
    r2 = math.sqrt(max(-2.0 * v + 0.5 + 0.5 / math.sqrt(8.0 * v + 1.0), 0.0))
    if branch is BranchId.PRINCIPAL:
        return 3.5 * math.log((r1 + r2) / 2.0 + 0.25)
    return 3.5 * math.log((r1 - r2) / 2.0 + 0.25)


_CLOSED_FORMS = {
    ClosedFormTag.A13: _psi_13,
    ClosedFormTag.A12: _psi_12,
    ClosedFormTag.A15: _psi_15,
    ClosedFormTag.A35: _psi_35,
    ClosedFormTag.A17: _psi_17,
}


def psi_closed_form(a, branch: BranchId, x: float) -> float:
    """Closed-form branch values at a in {1/3, 1/2, 1/5, 3/5, 1/7}.

    The substitution Y = exp(2w/(n+m)) with a = (n-m)/(n+m) turns the
    defining equation into Y^n - Y^m = 2x, solvable by quadratic, Cardano,
    or Ferrari radicals for these five rationals.  The parameter must carry
    an exact rational tag (see AsymmetryParam.from_rational); floats are
    never matched approximately.
    """
    p = as_param(a)
    tag = ClosedFormTag.classify(p)
    if tag is ClosedFormTag.NONE:
        raise UnsupportedError(
            "closed forms exist only for a in {1/3, 1/2, 1/5, 3/5, 1/7} "
            "constructed as exact rationals")
    x = float(x)
    _check_branch_domain(p, branch, x)
    # same treatment of the branch-point neighborhood as the generic solver,
    # so the two routes agree where the square-root sensitivity blows up
    bc = branch_constants(p)
    if x - bc.f_min <= _domain_tol(bc.f_min):
        return bc.w_min
    return _CLOSED_FORMS[tag](branch, x)


def omega(a, z: float) -> float:
    """Branch transition function: the other solution with the same map value.

    For z < 0 returns the y != z (except at the fixed point w_min) with
    sinh(a*y)*exp(y) = sinh(a*z)*exp(z), taking the principal branch when
    z < w_min and the lower branch otherwise.  At a = 0 this degenerates to
    swapping the two real Lambert W branches of z*exp(z).
    """
    p = as_param(a)
    z = float(z)
    if not z < 0.0:
        raise DomainError(f"transition function requires z < 0, got {z!r}")
    if p.kind is ParamKind.ONE_LIMIT:
        raise DomainError("transition function undefined at a=1: single branch only")
    if p.kind is ParamKind.ZERO_LIMIT:
        if z == -1.0:
            return -1.0
        x = z * math.exp(z)
        if z < -1.0:
            return lambert_w(BranchId.PRINCIPAL, x)
        return lambert_w(BranchId.LOWER, x)
    wmin = branch_constants(p).w_min
    if z == wmin:
        return wmin
    x = forward(p, z)
    if z < wmin:
        return _solve_branch(p, BranchId.PRINCIPAL, x)
    return _solve_branch(p, BranchId.LOWER, x)


def _omega_13(z: float) -> float:
    return 1.5 * math.log(-math.expm1(2.0 * z / 3.0))


def _omega_12(z: float) -> float:
    fz = forward(AsymmetryParam(0.5), z)
    if z < -math.log(3.0):
        u = math.acos(max(min(3.0 * _SQRT3 * fz, 1.0), -1.0))
        return 2.0 * math.log(2.0 / _SQRT3 * math.cos(u / 3.0))
    u = math.asin(max(min(-3.0 * _SQRT3 * fz, 1.0), -1.0))
    return 2.0 * math.log(2.0 / _SQRT3 * math.sin(u / 3.0))


def _omega_15(z: float) -> float:
    fz = forward(AsymmetryParam(0.2), z)
    u = _acos_shifted(fz)
    if z < -2.5 * math.log(1.5):
        return 2.5 * math.log(2.0 / 3.0 * math.cos(u / 3.0) + 1.0 / 3.0)
    return 2.5 * math.log(2.0 / 3.0 * math.sin(u / 6.0) ** 2 + math.sin(u / 3.0) / _SQRT3)


def omega_closed_form(a, z: float) -> float:
    """Closed-form transition function for a in {1/3, 1/2, 1/5}.

    a=1/3 collapses to the single formula (3/2)*log(1 - exp(2z/3)); the
    other two compose the closed-form branches with the forward map,
    switching pieces at z = w_min.
    """
    p = as_param(a)
    tag = ClosedFormTag.classify(p)
    z = float(z)
    if not z < 0.0:
        raise DomainError(f"transition function requires z < 0, got {z!r}")
    if tag is ClosedFormTag.A13:
        return _omega_13(z)
    if tag is ClosedFormTag.A12:
        return _omega_12(z)
    if tag is ClosedFormTag.A15:
        return _omega_15(z)
    raise UnsupportedError(
        "closed-form transition exists only for a in {1/3, 1/2, 1/5} "
        "constructed as exact rationals")


def omega_finite_n(n: int, a, z: float) -> float:
    """Finite-n transition value: equalizes two consecutive p,q-coefficients.

    With p = 1 + 2y/n and q = 1 + 2z/n, solves
    (p^(n-k+1) - p^k) / (q^(n-k+1) - q^k) = 1 for y, where
    k = round(n*(1-a)/2) (banker's rounding).  y = z always solves this
    trivially; the returned root is the one on the opposite side of the
    maximizer of the numerator, and converges to omega(a, z) as n grows.
    """
    p = as_param(a)
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    z = float(z)
    if not z < 0.0:
        raise DomainError(f"requires z < 0, got {z!r}")
    if 1.0 + 2.0 * z / n <= 0.0:
        raise DomainError(f"q = 1 + 2z/n = {1.0 + 2.0 * z / n!r} must be positive")
    k = round(n * (1.0 - p.a) / 2.0)
    if not 1 <= k <= n // 2:
        raise DomainError(f"k = round(n(1-a)/2) = {k} outside [1, n//2]")
    m_hi = n - k + 1
    d = m_hi - k  # n + 1 - 2k >= 1

    def log_abs_num(lp):
        # log |p^m_hi - p^k| with lp = log(p), stable for p arbitrarily near 1
        return k * lp + math.log(-math.expm1(d * lp))

    target = log_abs_num(math.log1p(2.0 * z / n))

    def gfun(y):
        lp = math.log1p(2.0 * y / n)
        e = math.expm1(d * lp)  # p^d - 1, in (-1, 0) for y < 0
        g = k * lp + math.log(-e) - target
        dg = (2.0 / n) * math.exp(-lp) * (k + d * (1.0 + e) / e)
        return g, dg

    # the numerator is maximized at p_peak = (k/m_hi)^(1/d); y = z and the
    # wanted root straddle the corresponding y_peak (-> w_min as n -> inf)
    y_peak = 0.5 * n * math.expm1(math.log(k / m_hi) / d)
    if z == y_peak:
        return y_peak
    seed = omega(p, z)
    if z < y_peak:
        # root in (y_peak, 0), where g decreases toward -inf as y -> 0^-;
        # solve in s = log(-y) (g increasing in s) so roots arbitrarily close
        # to zero stay reachable; below the subnormal range the result
        # rounds to -0.0, the correctly rounded root
        log_2d_n = math.log(2.0 * d / n)

        def gfun_s(s):
            t = s + log_2d_n  # log|u| with u = 2*d*y/n
            if t < -18.0:
                # |u| < 1.5e-8: g = log|u| - target + (k/d + 1/2)u + O(u^2)
                u = -math.exp(t) if t > -745.0 else 0.0
                c = k / d + 0.5
                return t - target + c * u, 1.0 + c * u
            y = -math.exp(s)
            g, dg = gfun(y)
            return g, dg * y

        s_hi = math.log(-y_peak)
        s_seed = math.log(-seed) if seed < 0.0 else s_hi - 1.0
        s_lo = min(s_seed, s_hi) - 4.0
        step = 4.0
        for _ in range(100):
            if gfun_s(s_lo)[0] <= 0.0:
                break
            s_lo -= step
            step *= 2.0
        else:
            raise ConvergenceError("no sign change toward zero")
        s_root = newton_bracketed(gfun_s, s_lo, s_hi,
                                  min(max(s_seed, s_lo), s_hi), increasing=True)
        return -math.exp(s_root) if s_root > -746.0 else -0.0
    # root in (-n/2, y_peak): g increasing in y there
    p_lo = math.exp(math.log(k / m_hi) / d)
    lo = y_peak
    for _ in range(2200):
        p_lo *= 0.5
        lo = 0.5 * n * (p_lo - 1.0)
        if gfun(lo)[0] <= 0.0:
            break
    else:
        raise ConvergenceError("no sign change toward -n/2")
    return newton_bracketed(gfun, lo, y_peak, min(max(seed, lo), y_peak), increasing=True)
