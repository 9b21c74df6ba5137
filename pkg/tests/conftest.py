"""Shared oracle helpers for the test suite."""

import math

import pytest


def richardson_derivative(f, x, n, h):
    """n-th derivative of f at x: central differences at h, h/2, h/4 with a
    two-level Richardson ladder (leading error O(h^6))."""

    def central(hh):
        if n == 1:
            return (f(x + hh) - f(x - hh)) / (2.0 * hh)
        if n == 2:
            return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / hh ** 2
        if n == 3:
            return (f(x + 2 * hh) - 2.0 * f(x + hh) + 2.0 * f(x - hh)
                    - f(x - 2 * hh)) / (2.0 * hh ** 3)
        if n == 4:
            return (f(x + 2 * hh) - 4.0 * f(x + hh) + 6.0 * f(x)
                    - 4.0 * f(x - hh) + f(x - 2 * hh)) / hh ** 4
        raise ValueError(n)

    d0, d1, d2 = central(h), central(h / 2.0), central(h / 4.0)
    r0 = (4.0 * d1 - d0) / 3.0
    r1 = (4.0 * d2 - d1) / 3.0
    return (16.0 * r1 - r0) / 15.0


def geometric_grid(lo, hi, count):
    """Geometric grid between same-sign nonzero endpoints."""
    assert lo != 0.0 and hi != 0.0 and (lo < 0.0) == (hi < 0.0)
    sgn = -1.0 if lo < 0.0 else 1.0
    la, lb = math.log(abs(lo)), math.log(abs(hi))
    return [sgn * math.exp(la + (lb - la) * i / (count - 1)) for i in range(count)]


def linear_grid(lo, hi, count):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


@pytest.fixture(scope="session")
def mp50():
    import mpmath as mp

    mp.mp.dps = 50
    return mp
