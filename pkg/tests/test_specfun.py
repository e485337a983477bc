"""Special-function accuracy and identity tests (oracle: mpmath)."""

import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from dp3.specfun import (
    EULER_GAMMA,
    GammaPoleError,
    ZeroBaseError,
    digamma,
    gamma,
    pow_principal,
)

mp.mp.dps = 30

# sqrt(pi) from a 30-digit series oracle, fixed before the build
SQRT_PI = 1.7724538509055160272981674833411


def _rand_box(rng, n, lim=50.0, min_dist=0.3):
    """Random complex samples in the test box, away from the real poles."""
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-lim, lim), rng.uniform(-lim, lim))
        if abs(z.imag) < min_dist and z.real < 0.6:
            continue
        out.append(z)
    return out


def test_gamma_one():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)


def test_gamma_half_matches_series_oracle():
    assert abs(gamma(0.5) - SQRT_PI) < 1e-14 * SQRT_PI


def test_gamma_recurrence_at_fixed_point():
    z = 0.3 + 0.7j
    assert abs(gamma(z + 1) / gamma(z) - z) < 1e-13 * abs(z)


def test_gamma_accuracy_box():
    rng = np.random.default_rng(7)
    for z in _rand_box(rng, 300):
        ref = complex(mp.gamma(mp.mpc(z.real, z.imag)))
        assert abs(gamma(z) - ref) <= 1e-13 * abs(ref), f"z={z}"


def test_gamma_reflection_500():
    rng = np.random.default_rng(11)
    for z in _rand_box(rng, 500, lim=20.0):
        # sin(pi z) overflows for huge |Im z|; the identity is checked where
        # both sides are representable
        val = gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
        assert abs(val - 1) < 1e-12, f"z={z}"


def test_gamma_recurrence_500():
    rng = np.random.default_rng(13)
    for z in _rand_box(rng, 500):
        g1 = gamma(z + 1)
        assert abs(g1 - z * gamma(z)) < 1e-13 * abs(g1), f"z={z}"


def test_gamma_conjugation_symmetry():
    rng = np.random.default_rng(17)
    for z in _rand_box(rng, 200):
        a = gamma(z.conjugate())
        b = gamma(z).conjugate()
        assert abs(a - b) <= 1e-14 * abs(b)


def test_gamma_pole_error_carries_index():
    for n in (0, 1, 5):
        with pytest.raises(GammaPoleError) as exc:
            gamma(complex(-n))
        assert exc.value.pole_index == n
    with pytest.raises(GammaPoleError):
        gamma(-3.0 + 1e-14j)
    # just outside the pole tolerance: finite value
    assert np.isfinite(gamma(-3.0 + 1e-9j).real)


def test_digamma_at_one_is_minus_euler_gamma():
    assert abs(digamma(1.0) + EULER_GAMMA) < 1e-14


def test_digamma_at_two():
    assert abs(digamma(2.0) - (1.0 - EULER_GAMMA)) < 1e-14


def test_digamma_tan_identity_fixed_point():
    z = 0.2 + 0.1j
    lhs = digamma(0.5 + z) - digamma(0.5 - z)
    rhs = math.pi * cmath.tan(math.pi * z)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_digamma_accuracy_box():
    rng = np.random.default_rng(19)
    for z in _rand_box(rng, 300):
        ref = complex(mp.digamma(mp.mpc(z.real, z.imag)))
        assert abs(digamma(z) - ref) <= 1e-12 * max(1.0, abs(ref)), f"z={z}"


def test_digamma_reflection_500():
    rng = np.random.default_rng(23)
    for z in _rand_box(rng, 500, lim=20.0):
        w = z - 0.5  # psi(1/2+w) - psi(1/2-w) = pi tan(pi w)
        lhs = digamma(0.5 + w) - digamma(0.5 - w)
        rhs = math.pi * cmath.tan(math.pi * w)
        if abs(rhs) > 1e6:
            continue
        assert abs(lhs - rhs) < 1e-11 * max(1.0, abs(rhs)), f"z={z}"


def test_digamma_pole_error():
    with pytest.raises(GammaPoleError) as exc:
        digamma(-2.0)
    assert exc.value.pole_index == 2
    assert exc.value.func == "digamma"


def test_pow_principal_basics():
    assert pow_principal(1.0, 3.7 - 2.2j) == pytest.approx(1.0)
    # e**((i pi/2)*(-i)) = e**(pi/2)
    val = pow_principal(math.e, (1j * math.pi / 2) * (-1j))
    assert abs(val - math.exp(math.pi / 2)) < 1e-13 * math.exp(math.pi / 2)


def test_pow_principal_matches_exp_log_oracle():
    tau, a = 1e-3, 0.5
    base = 2 * tau**2
    expo = 1j * a
    oracle = cmath.exp(expo * cmath.log(base))
    assert abs(pow_principal(base, expo) - oracle) <= 1e-14 * abs(oracle)


def test_pow_principal_zero_base():
    with pytest.raises(ZeroBaseError):
        pow_principal(0.0, 1.0)
