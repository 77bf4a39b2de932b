"""Real-valued special functions used by the interference Laplace transforms.

Only the lower, non-regularized incomplete beta is exposed, since that is the
form the closed-form metrics are written in.
"""

import math

_CF_MAX_ITER = 10_000
_CF_EPS = 1e-16
_CF_TINY = 1e-300


def log_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Complete beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    if not (a > 0 and b > 0):
        raise ValueError(f"beta requires a, b > 0, got a={a!r}, b={b!r}")
    # a, b enter only through a commutative sum so B(a,b) == B(b,a) bitwise
    return math.exp((log_gamma(a) + log_gamma(b)) - log_gamma(a + b))


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})"
    )


def _lower_cf(x: float, a: float, b: float) -> float:
    # x^a (1-x)^b / a times the continued fraction
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - math.log(a))
    return front * _beta_cf(x, a, b)


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Lower incomplete beta B(x; a, b) = int_0^x u^(a-1) (1-u)^(b-1) du.

    Not regularized. Accurate for the singular case a, b in (0, 1) that the
    interference integrals need.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"incomplete_beta requires a, b > 0, got a={a!r}, b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete_beta requires 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return _lower_cf(x, a, b)
    return beta(a, b) - _lower_cf(1.0 - x, b, a)
