"""Independent oracles shared by the test modules.

Nothing here imports the package's numerical code paths; each oracle is a
direct evaluation of the defining formula.
"""

import math

import pytest
from scipy.integrate import quad

C = 299_792_458.0


def quad_incomplete_beta(x, a, b):
    """int_0^x u^(a-1) (1-u)^(b-1) du by adaptive Gauss-Kronrod.

    Both endpoint singularities are removed by substitution: u = t^(1/a) on
    [0, min(x, 1/2)] and 1 - u = w^(1/b) on [1/2, x].
    """
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=500)
    lo = min(x, 0.5)
    total = quad(lambda t: (1.0 - t ** (1.0 / a)) ** (b - 1.0), 0.0, lo**a, **opts)[0] / a
    if x > 0.5:
        w_hi = 0.5**b
        w_lo = (1.0 - x) ** b
        total += quad(lambda w: (1.0 - w ** (1.0 / b)) ** (a - 1.0), w_lo, w_hi, **opts)[0] / b
    return total


def finite_window_laplace(z, classes, k1, r0, r_max, alpha_I=2.5):
    """E[exp(-z I)] for HPPP interferers on r0 < r <= r_max, by quadrature.

    classes is a list of (density, power fraction); fading is Exp(1), so each
    interferer contributes 1 - 1/(1 + s r^-alpha_I).
    """
    total = 0.0
    for lam, frac in classes:
        s = z * frac * k1
        f = lambda r: r * s / (s + r**alpha_I)
        total += 2 * math.pi * lam * quad(f, r0, r_max, epsrel=1e-12, limit=500, points=[10 * r0, 100 * r0])[0]
    return math.exp(-total)


def k1_oracle(p_w=0.1, g_t=10.0, g_ri=0.1, f=35e9):
    return p_w * g_t * g_ri * C**2 / ((4.0 * math.pi) ** 2 * f**2)


def eq7(parent, r0):
    area = math.pi * r0**2
    return (1.0 - math.exp(-parent * area)) / area


@pytest.fixture
def table3():
    from uav_coexist.network import RadioParams

    return RadioParams()


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
