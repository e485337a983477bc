"""The local pole/zero expansions satisfy the equation (analytic jets)."""

import numpy as np
import pytest

from dp3.monodromy import ProblemParams

PARAMS = ProblemParams(0.3 + 0.1j, 1.0, 1)
CENTER, U0 = 0.12 + 0.03j, 0.4 - 0.2j


def _pole_defect(d, u0_quad_coeff=-24.0):
    a, b, eps, beff = PARAMS.a, PARAMS.b, PARAMS.epsilon, PARAMS.beff
    c = CENTER
    c2 = (2 * a * beff * c + u0_quad_coeff * c * U0 * U0 + 9 * U0) / (10 * c**2)
    u = -c / (4 * d * d) + U0 - (U0 / c) * d + c2 * d * d
    du = c / (2 * d**3) - U0 / c + 2 * c2 * d
    d2u = -3 * c / (2 * d**4) + 2 * c2
    t = c + d
    return abs(
        d2u - (du**2 / u - du / t + (-8 * eps * u * u + 2 * a * b) / t + b * b / u)
    )


def test_pole_model_defect_vanishes_linearly():
    # with the correct second-order coefficient the truncation defect of the
    # local pole expansion decays like d (until the float floor)
    d1 = _pole_defect(1e-2 * (0.6 + 0.8j))
    d2 = _pole_defect(1e-3 * (0.6 + 0.8j))
    assert d2 < 0.2 * d1


def test_pole_model_quadratic_coefficient_is_discriminated():
    # corrupting the u0^2-coefficient leaves an O(1) defect plateau: the
    # equation itself pins the value
    good = _pole_defect(1e-3 * (0.6 + 0.8j))
    bad = _pole_defect(1e-3 * (0.6 + 0.8j), u0_quad_coeff=-8.0)
    assert good < 0.2 * bad


@pytest.mark.parametrize("sign", [1, -1])
def test_zero_model_defect_cubic(sign):
    a, b, eps, beff = PARAMS.a, PARAMS.b, PARAMS.epsilon, PARAMS.beff
    c, U3 = CENTER, 0.25 + 0.1j

    def defect(d):
        s = 1j * sign
        c2 = -(2 * a - 1j * sign) * beff / (2 * c)
        c4 = (
            (4 * beff**2 + (1j * a - 1) * U3)
            if sign > 0
            else (4 * beff**2 - (1j * a + 1) * U3)
        ) / (2 * c)
        u = s * beff * d + c2 * d * d + U3 * d**3 + c4 * d**4
        du = s * beff + 2 * c2 * d + 3 * U3 * d * d + 4 * c4 * d**3
        d2u = 2 * c2 + 6 * U3 * d + 12 * c4 * d * d
        t = c + d
        return abs(
            d2u
            - (du**2 / u - du / t + (-8 * eps * u * u + 2 * a * b) / t + b * b / u)
        )

    d1 = defect(1e-2 * (0.6 + 0.8j))
    d2 = defect(1e-3 * (0.6 + 0.8j))
    assert d2 < 3e-3 * d1  # ~d^3
