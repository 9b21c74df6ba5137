"""Log-domain p,q-binomial coefficients, the normalized distribution with
peak detection, and the bridge from the asymmetry/transition parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import branches
from .core import DomainError, as_param

__all__ = [
    "DegenerateRatioError",
    "PqDistribution",
    "PqParams",
    "build_distribution",
    "equal_ratio_residual",
    "log_pq_binomial",
    "peak_drift",
]

N_MAX = 2 ** 24          # practical cap for building full distributions
PLATEAU_TOL = 1e-13      # log-coefficients closer than this count as tied


class DegenerateRatioError(DomainError):
    """The equal-coefficient ratio has a vanishing denominator."""


@dataclass(frozen=True)
class PqParams:
    """Parameters (n, p, q) of a p,q-binomial coefficient sequence.

    ``provenance`` records (a, y, z) when built through the transition
    parameterization p = 1 + 2y/n, q = 1 + 2z/n with z < 0.
    """

    n: int
    p: float
    q: float
    provenance: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not (self.p > 0.0 and self.q > 0.0):
            raise DomainError("p and q must be positive")
        if self.p == self.q:
            raise DomainError("p = q is degenerate (the definition divides by p^j - q^j)")
        if self.provenance is not None:
            a, y, z = self.provenance
            if not z < 0.0:
                raise DomainError("provenance requires z < 0")
            if self.p != 1.0 + 2.0 * y / self.n or self.q != 1.0 + 2.0 * z / self.n:
                raise DomainError("provenance does not reproduce p, q exactly")

    @classmethod
    def from_transition(cls, n: int, a, z: float, y: float | None = None) -> "PqParams":
        """Build p, q from the asymmetry/transition parameterization.

        ``y`` defaults to the transition value omega(a, z), which places the
        distribution peaks near k/n = (1 -+ a)/2.
        """
        ap = as_param(a)
        z = float(z)
        if y is None:
            y = branches.omega(ap, z)
        q = 1.0 + 2.0 * z / n
        if q <= 0.0:
            raise DomainError(f"q = 1 + 2z/n = {q!r} must be positive")
        return cls(n=n, p=1.0 + 2.0 * y / n, q=q, provenance=(ap.a, y, z))


@dataclass(frozen=True)
class PqDistribution:
    """Normalized p,q-binomial distribution in the log domain.

    ``log_coeffs[k]`` is the natural log of the k-th coefficient,
    symmetric under k <-> n-k by construction; ``log_norm`` is the
    log-sum-exp normalizer; ``peaks`` lists the strict local maxima
    (1 or 2 of them), plateaus collapsing to their smallest index.
    """

    params: PqParams
    log_coeffs: np.ndarray = field(repr=False)
    log_norm: float
    peaks: tuple

    def masses(self) -> np.ndarray:
        """Probability masses exp(log_coeffs - log_norm), summing to 1."""
        return np.exp(self.log_coeffs - self.log_norm)


def _log_abs_diff_terms(log_hi: float, log_ratio: float, m) -> np.ndarray:
    """log |hi^m - lo^m| = m*log(hi) + log(1 - (lo/hi)^m), vectorized in m.

    ``log_ratio`` = log(lo/hi) < 0.  The second term switches between
    log(-expm1(t)) and log1p(-exp(t)) at t = -log(2) to stay accurate for
    ratios near 1 and near 0 alike.
    """
    t = m * log_ratio
    out = np.empty_like(t, dtype=float)
    near = t > -math.log(2.0)
    out[near] = np.log(-np.expm1(t[near]))
    out[~near] = np.log1p(-np.exp(t[~near]))
    return m * log_hi + out


def log_pq_binomial(params: PqParams, k: int) -> float:
    """Natural log of the p,q-binomial coefficient (n, k).

    Sum over j of log((hi^(n-k+j) - lo^(n-k+j))/(hi^j - lo^j)) with
    hi = max(p,q): numerator and denominator always carry the same sign,
    so the coefficient is positive for any p != q > 0.
    """
    n = params.n
    if not isinstance(k, int) or not 0 <= k <= n:
        raise DomainError(f"k must be an integer in [0, {n}], got {k!r}")
    if k == 0:
        return 0.0
    hi = max(params.p, params.q)
    lo = min(params.p, params.q)
    log_hi = math.log(hi)
    log_ratio = math.log(lo) - math.log(hi)
    j = np.arange(1, k + 1, dtype=float)
    num = _log_abs_diff_terms(log_hi, log_ratio, n - k + j)
    den = _log_abs_diff_terms(log_hi, log_ratio, j)
    return float(np.sum(num - den))


def _find_peaks(log_coeffs: np.ndarray) -> tuple:
    """Strict local maxima with plateau handling.

    Differences within PLATEAU_TOL are treated as flat; a flat run counts
    as a single candidate at its smallest index.  Boundary maxima count.
    """
    d = np.diff(log_coeffs)
    trend = np.zeros(d.shape, dtype=np.int8)
    trend[d > PLATEAU_TOL] = 1
    trend[d < -PLATEAU_TOL] = -1
    nz = np.flatnonzero(trend)
    if nz.size == 0:
        return (0,)
    peaks = []
    if trend[nz[0]] == -1:
        peaks.append(0)
    for i in range(nz.size - 1):
        if trend[nz[i]] == 1 and trend[nz[i + 1]] == -1:
            peaks.append(int(nz[i]) + 1)
    if trend[nz[-1]] == 1:
        peaks.append(int(nz[-1]) + 1)
    return tuple(peaks)


def build_distribution(params: PqParams) -> PqDistribution:
    """Build all n+1 log-coefficients, the normalizer, and the peak list.

    Uses prefix sums of the factor logs: log C(k) = S(n) - S(n-k) - S(k)
    where S accumulates log|hi^m - lo^m|.  This is O(n), overflow-free,
    and bit-exactly symmetric under k <-> n-k.
    """
    n = params.n
    if n > N_MAX:
        raise DomainError(f"n = {n} exceeds the practical cap {N_MAX}")
    hi = max(params.p, params.q)
    lo = min(params.p, params.q)
    log_hi = math.log(hi)
    log_ratio = math.log(lo) - math.log(hi)
    m = np.arange(1, n + 1, dtype=float)
    d = _log_abs_diff_terms(log_hi, log_ratio, m)
    s = np.concatenate(([0.0], np.cumsum(d)))
    k = np.arange(0, n // 2 + 1)
    half = s[n] - s[n - k] - s[k]
    log_coeffs = np.concatenate((half, half[: (n + 1) // 2][::-1]))
    # max-shifted log-sum-exp; numpy's pairwise sum keeps the error O(log n)
    shift = float(log_coeffs.max())
    log_norm = shift + math.log(float(np.exp(log_coeffs - shift).sum()))
    peaks = _find_peaks(log_coeffs)
    log_coeffs.flags.writeable = False
    return PqDistribution(params=params, log_coeffs=log_coeffs,
                          log_norm=log_norm, peaks=peaks)


def equal_ratio_residual(params: PqParams, k: int) -> float:
    """(p^(n-k+1) - p^k)/(q^(n-k+1) - q^k) - 1, evaluated in the log domain.

    Zero exactly when coefficients k-1 and k are equal.  Defined for
    1 <= k <= n (the ratio is invariant under k <-> n-k+1); the canonical
    range of the equal-coefficient equation is k <= n/2.
    """
    n = params.n
    if not isinstance(k, int) or not 1 <= k <= n:
        raise DomainError(f"k must be an integer in [1, {n}], got {k!r}")
    p, q = params.p, params.q
    d = n + 1 - 2 * k
    if q == 1.0:
        raise DegenerateRatioError("q = 1 makes the denominator vanish")
    if p == 1.0:
        return -1.0
    lp, lq = math.log(p), math.log(q)
    log_num = k * lp + math.log(abs(math.expm1(d * lp)))
    log_den = k * lq + math.log(abs(math.expm1(d * lq)))
    sign = 1.0 if (p - 1.0) * (q - 1.0) > 0.0 else -1.0
    return sign * math.exp(log_num - log_den) - 1.0


def peak_drift(n: int, a, z: float) -> tuple[int, float]:
    """Lower peak index and its normalized offset from k/n = (1-a)/2.

    Builds the distribution at y = omega(a, z) and measures
    |k_peak - n(1-a)/2| / n; the offset shrinks toward 0 as n grows.
    """
    ap = as_param(a)
    dist = build_distribution(PqParams.from_transition(n, ap, z))
    k_peak = min(dist.peaks)
    offset = abs(k_peak - n * (1.0 - ap.a) / 2.0) / n
    return k_peak, offset
