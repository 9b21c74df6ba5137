"""Exact parametrizations of the inverse branches: the beta form of the
principal branch for x > 0, and the simultaneous alpha form of both
branches over [f_min, 0)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import AsymmetryParam, DomainError, ParamKind, as_param

__all__ = ["AlphaPoint", "param_alpha", "param_beta"]


@dataclass(frozen=True)
class AlphaPoint:
    """One simultaneous sample of both branches at a common abscissa.

    psi0 = log(alpha) + psi1 holds to rounding (each branch value is
    computed through its own cancellation-free form), and both branch
    values map forward to the same x.
    """

    alpha: float
    x: float
    psi0: float
    psi1: float


def param_beta(a, beta: float) -> tuple[float, float]:
    """Principal-branch parametrization for positive abscissas.

    Returns (x, psi0) with x = (beta^(1+a) - beta^(1-a))/2 and
    psi0 = log(beta); any beta > 1 gives x > 0.
    """
    p = as_param(a)
    if p.kind is ParamKind.ZERO_LIMIT:
        raise DomainError("parametrization undefined at a=0")
    beta = float(beta)
    if not beta > 1.0:
        raise DomainError(f"requires beta > 1, got {beta!r}")
    aa = p.a
    lb = math.log(beta)
    x = 0.5 * math.exp((1.0 - aa) * lb) * math.expm1(2.0 * aa * lb)
    return x, lb


def _log_expm1(t: float) -> float:
    """log(exp(t) - 1) for t > 0, stable for both tiny and huge t."""
    if t > 33.0:
        return t + math.log1p(-math.exp(-t))
    return math.log(math.expm1(t))


def param_alpha(a, alpha: float) -> AlphaPoint:
    """Simultaneous parametrization of both branches for f_min <= x < 0.

    With rho = (alpha^(2a)-1)/(alpha^(1+a)-1) in (0, 1):
    psi1 = log((alpha^(1-a)-1)/(alpha^(1+a)-1))/(2a),
    psi0 = log(1-rho)/(2a)  (identical to log(alpha) + psi1), and
    x = -rho*(1-rho)^((1-a)/(2a))/2.  All alpha^c - 1 factors go through
    expm1/log1p kernels, so neither the alpha -> 1 branch-point limit nor
    the alpha -> inf tail loses precision beyond the representation of
    alpha itself.  alpha sweeps (1, inf) onto x in [f_min, 0).
    """
    p = as_param(a)
    if p.kind is not ParamKind.INTERIOR:
        raise DomainError("requires 0 < a < 1")
    alpha = float(alpha)
    if not alpha > 1.0:
        raise DomainError(f"requires alpha > 1, got {alpha!r}")
    aa = p.a
    la = math.log(alpha)
    le_low = _log_expm1((1.0 - aa) * la)
    le_mid = _log_expm1(2.0 * aa * la)
    le_high = _log_expm1((1.0 + aa) * la)
    psi1 = (le_low - le_high) / (2.0 * aa)
    log_rho = le_mid - le_high
    rho = math.exp(log_rho)
    log1m_rho = math.log1p(-rho)
    psi0 = log1m_rho / (2.0 * aa)
    x = -0.5 * math.exp(log_rho + (1.0 - aa) / (2.0 * aa) * log1m_rho)
    return AlphaPoint(alpha=alpha, x=x, psi0=psi0, psi1=psi1)
