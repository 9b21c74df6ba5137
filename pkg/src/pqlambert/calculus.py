"""Exact-formula derivatives of the inverse branches via a polynomial
recurrence, the primitive function, closed-form definite integrals, and
numeric quadrature for the transition-function integral identity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad

from . import branches
from .core import (
    AccuracyError,
    AsymmetryParam,
    BranchId,
    DomainError,
    ParamKind,
    RangeError,
    SingularityError,
    as_param,
    branch_constants,
)

__all__ = [
    "PnPolynomial",
    "integral_omega",
    "integral_omega_quadrature",
    "integral_psi",
    "integral_psi_quadrature",
    "pn_next",
    "pn_sequence",
    "psi_derivative",
    "psi_primitive",
]

DERIVATIVE_ORDER_MAX = 8


@dataclass(frozen=True)
class PnPolynomial:
    """Numerator polynomial of the n-th derivative formula.

    Sparse map from (i, j) to the coefficient of X^i Y^j, where
    X = cosh(a*psi) and Y = sinh(a*psi).  P_1 = 1, and each step of the
    recurrence raises the total degree by at most one.
    """

    n: int
    a: AsymmetryParam
    terms: dict

    def __call__(self, x: float, y: float) -> float:
        return sum(c * x ** i * y ** j for (i, j), c in self.terms.items())

    def degree(self) -> int:
        return max(i + j for (i, j) in self.terms)


def pn_first(a) -> PnPolynomial:
    return PnPolynomial(n=1, a=as_param(a), terms={(0, 0): 1.0})


def pn_next(p: PnPolynomial) -> PnPolynomial:
    """One step of the derivative recurrence:

    P_{n+1} = P_n*((a-3na)X + (a^2-n-2na^2)Y)
              + dP_n/dX*(a^2 XY + a Y^2) + dP_n/dY*(a XY + a^2 X^2).
    """
    a = p.a.a
    n = p.n
    cx = a - 3.0 * n * a
    cy = a * a - n - 2.0 * n * a * a
    out: dict = {}

    def add(i, j, c):
        if c != 0.0:
            key = (i, j)
            out[key] = out.get(key, 0.0) + c

    for (i, j), c in p.terms.items():
        add(i + 1, j, c * cx)
        add(i, j + 1, c * cy)
        if i:
            add(i, j + 1, i * c * a * a)   # dX term * a^2 X Y
            add(i - 1, j + 2, i * c * a)   # dX term * a Y^2
        if j:
            add(i + 1, j, j * c * a)       # dY term * a X Y
            add(i + 2, j - 1, j * c * a * a)  # dY term * a^2 X^2
    return PnPolynomial(n=n + 1, a=p.a, terms=out)


@lru_cache(maxsize=256)
def _pn_cached(a_value: float, nmax: int) -> tuple:
    seq = [pn_first(AsymmetryParam(a_value))]
    for _ in range(nmax - 1):
        seq.append(pn_next(seq[-1]))
    return tuple(seq)


def pn_sequence(a, nmax: int) -> tuple:
    """P_1 .. P_nmax for a fixed asymmetry (cached)."""
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("requires 0 < a < 1")
    if not isinstance(nmax, int) or not 1 <= nmax <= DERIVATIVE_ORDER_MAX:
        raise ValueError(f"nmax must be in [1, {DERIVATIVE_ORDER_MAX}], got {nmax!r}")
    return _pn_cached(p.a, nmax)


def psi_derivative(a, branch: BranchId, x: float, n: int = 1) -> float:
    """n-th derivative of the selected inverse branch at x.

    Evaluates P_n(cosh(a*psi), sinh(a*psi)) * exp(-n*psi) /
    (a*cosh(a*psi) + sinh(a*psi))^(2n-1).  The denominator vanishes at the
    branch point, so x = f_min is rejected as a singularity.  At x = 0 on
    the principal branch this reduces to P_n(1, 0)/a^(2n-1).
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("derivative formula requires 0 < a < 1")
    if not isinstance(n, int) or not 1 <= n <= DERIVATIVE_ORDER_MAX:
        raise ValueError(f"n must be in [1, {DERIVATIVE_ORDER_MAX}], got {n!r}")
    x = float(x)
    bc = branch_constants(p)
    if x - bc.f_min <= 8.0 * math.ulp(1.0) * abs(bc.f_min):
        raise SingularityError(
            f"derivative is singular at the branch point x = {bc.f_min!r}")
    psiv = branches.psi(p, branch, x)
    aa = p.a
    ch = math.cosh(aa * psiv)
    sh = math.sinh(aa * psiv)
    den = aa * ch + sh
    poly = pn_sequence(p, n)[n - 1]
    try:
        return poly(ch, sh) * math.exp(-n * psiv) / den ** (2 * n - 1)
    except OverflowError as exc:
        raise RangeError(f"derivative magnitude overflows at x = {x!r}") from exc


def psi_primitive(a, branch: BranchId, x: float) -> float:
    """Antiderivative of the selected branch:

    x*psi(x) - x/(1-a^2) + a*x*coth(a*psi(x))/(1-a^2),
    with the limits a/(1-a^2) at x=0 (principal) and
    f_min*(w_min - 2/(1-a^2)) at the branch point where coth = -1/a.
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("primitive formula requires 0 < a < 1")
    x = float(x)
    aa = p.a
    one_m = 1.0 - aa * aa
    bc = branch_constants(p)
    if x - bc.f_min <= 8.0 * math.ulp(1.0) * abs(bc.f_min):
        return bc.f_min * (bc.w_min - 2.0 / one_m)
    if x == 0.0:
        if branch is BranchId.LOWER:
            raise DomainError("lower branch is undefined at x = 0")
        return aa / one_m
    psiv = branches.psi(p, branch, x)
    return x * psiv - x / one_m + aa * (x / math.tanh(aa * psiv)) / one_m


def integral_psi(a, branch: BranchId) -> float:
    """Closed form of the branch integral over [f_min, 0].

    Principal: (a + 2*f_min)/(1-a^2) - f_min*w_min;
    lower:     2*f_min/(1-a^2) - f_min*w_min.
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("requires 0 < a < 1")
    aa = p.a
    bc = branch_constants(p)
    if branch is BranchId.PRINCIPAL:
        return (aa + 2.0 * bc.f_min) / (1.0 - aa * aa) - bc.f_min * bc.w_min
    return 2.0 * bc.f_min / (1.0 - aa * aa) - bc.f_min * bc.w_min


def integral_psi_quadrature(a, branch: BranchId, rel_tol: float = 1e-9) -> float:
    """Numeric check of integral_psi by adaptive quadrature.

    The square-root behavior at the branch point is removed with the
    substitution x = f_min + t^2; the lower branch additionally maps its
    logarithmic endpoint at 0 through x = -exp(-s).
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("requires 0 < a < 1")
    bc = branch_constants(p)
    fmin = bc.f_min

    def by_t(t):
        return 2.0 * t * branches.psi(p, branch, fmin + t * t)

    if branch is BranchId.PRINCIPAL:
        val, err = quad(by_t, 0.0, math.sqrt(-fmin), epsabs=rel_tol / 4.0,
                        epsrel=rel_tol / 4.0, limit=200)
        return val
    # lower branch: [f_min, f_min/2] via t, [f_min/2, 0) via x = -exp(-s)
    v1, e1 = quad(by_t, 0.0, math.sqrt(-fmin / 2.0), epsabs=rel_tol / 8.0,
                  epsrel=rel_tol / 8.0, limit=200)
    s0 = -math.log(-fmin / 2.0)
    s_max = s0 + 60.0  # exp(-60) tail is far below any allowed tolerance

    def by_s(s):
        xv = -math.exp(-s)
        return branches.psi(p, branch, xv) * math.exp(-s)

    v2, e2 = quad(by_s, s0, s_max, epsabs=rel_tol / 8.0, epsrel=rel_tol / 8.0,
                  limit=200)
    return v1 + v2


def integral_omega(a) -> float:
    """Closed form of the transition-function integral over (-inf, 0):

    pi^2 / (3*(a^2 - 1)); diverges at a = 1.
    """
    p = as_param(a)
    if p.kind is ParamKind.ONE_LIMIT:
        raise DomainError("the integral diverges at a = 1")
    aa = p.a
    return math.pi ** 2 / (3.0 * (aa * aa - 1.0))


def integral_omega_quadrature(a, rel_tol: float) -> float:
    """Adaptive quadrature of the transition function over (-inf, 0).

    Tail model: toward -inf the integrand decays like a pure exponential
    (e^((1-a)z) for a > 0; z*e^z at a = 0), so the cut at -z_cut carries an
    analytic correction omega(-z_cut)/(1-a) (times (z+1)/z at a = 0).
    Toward 0^- the substitution z = -exp(-s) turns the logarithmic blowup
    into a smooth exponentially decaying integrand, truncated at s = 60
    with negligible remainder.  Raises AccuracyError when the combined
    error estimate exceeds rel_tol times the result.
    """
    p = as_param(a)
    if p.kind is ParamKind.ONE_LIMIT:
        raise DomainError("the integral diverges at a = 1")
    if not 1e-10 <= rel_tol <= 1e-3:
        raise ValueError(f"rel_tol must be in [1e-10, 1e-3], got {rel_tol!r}")
    aa = p.a

    # cut where the integrand itself is below rel_tol/10 (exponential tail)
    z_cut = 30.0
    while abs(branches.omega(p, -z_cut)) > rel_tol / 10.0 and z_cut < 4000.0:
        z_cut *= 1.5
    omega_cut = branches.omega(p, -z_cut)
    if aa > 0.0:
        tail_left = omega_cut / (1.0 - aa)
    else:
        tail_left = omega_cut * (z_cut + 1.0) / z_cut
    tail_left_err = 0.5 * abs(tail_left)

    v1, e1 = quad(lambda z: branches.omega(p, z), -z_cut, -1.0,
                  epsabs=rel_tol / 4.0, epsrel=rel_tol / 4.0, limit=300)

    def by_s(s):
        return branches.omega(p, -math.exp(-s)) * math.exp(-s)

    v2, e2 = quad(by_s, 0.0, 60.0, epsabs=rel_tol / 4.0, epsrel=rel_tol / 4.0,
                  limit=300)
    tail_right_err = 65.0 * math.exp(-60.0)

    value = v1 + v2 + tail_left
    estimate = e1 + e2 + tail_left_err + tail_right_err
    if estimate > rel_tol * abs(value):
        raise AccuracyError(
            f"achieved error estimate {estimate!r} exceeds rel_tol*|I|",
            value=value, estimate=estimate)
    return value
