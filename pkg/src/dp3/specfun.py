"""Complex gamma, digamma, and branch-consistent powers.

Self-contained double-precision implementations sized for the asymptotic
formulas in this package: every coefficient of the leading-term
parametrizations is a product of gamma/digamma values and principal powers,
so relative accuracy ~1e-13 inside |Re z|, |Im z| <= 50 is the target.

The Lanczos coefficient table below (g = 607/128, 15 terms) is fixed
in-repo; ``tools/regen_lanczos.py`` regenerates and validates it against a
high-precision oracle.
"""

from __future__ import annotations

import cmath
import math

__all__ = [
    "EULER_GAMMA",
    "GammaPoleError",
    "ZeroBaseError",
    "gamma",
    "digamma",
    "pow_principal",
]

# gamma = -psi(1), to double precision.
EULER_GAMMA = 0.5772156649015328606065120900824024

# Pole detector: |z + n| below this (n a nonnegative integer) is treated as
# an exact pole so that downstream indeterminacy handling is deterministic.
POLE_TOL = 1e-12

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


class GammaPoleError(ArithmeticError):
    """Raised when gamma/digamma is evaluated at a nonpositive integer.

    Carries the pole index n >= 0 (the argument is -n); callers that need
    the pole resolved analytically read it from ``pole_index``.
    """

    def __init__(self, pole_index: int, func: str = "gamma"):
        self.pole_index = pole_index
        self.func = func
        super().__init__(f"{func} pole at z = -{pole_index}")


class ZeroBaseError(ValueError):
    """Raised by pow_principal on a zero base."""


def _pole_index(z: complex) -> int | None:
    """Index n >= 0 if z is within POLE_TOL of the pole -n, else None."""
    if abs(z.imag) > POLE_TOL:
        return None
    n = round(z.real)
    if n > 0:
        return None
    if abs(z.real - n) <= POLE_TOL:
        return -n
    return None


def _lanczos_sum(z: complex) -> complex:
    s = _LANCZOS_COEFFS[0] + 0j
    for k in range(1, len(_LANCZOS_COEFFS)):
        s += _LANCZOS_COEFFS[k] / (z + (k - 1))
    return s


def gamma(z: complex) -> complex:
    """Gamma function on the complex plane, principal everywhere.

    Lanczos approximation for Re z >= 1/2, reflection otherwise.  Raises
    GammaPoleError (with the pole index) at nonpositive integers.
    """
    z = complex(z)
    n = _pole_index(z)
    if n is not None:
        raise GammaPoleError(n)
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) sin(pi z) = pi
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    t = z + (_LANCZOS_G - 0.5)
    return _SQRT_TWO_PI * t ** (z - 0.5) * cmath.exp(-t) * _lanczos_sum(z)


_BERNOULLI_OVER_2N = (
    # B_{2n}/(2n) for n = 1..7
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(z: complex) -> complex:
    """Digamma psi(z) = d log Gamma / dz on the complex plane.

    Reflection for Re z < 1/2, then upward recurrence to Re z >= 10 and the
    asymptotic Bernoulli series.  Raises GammaPoleError at nonpositive
    integers.
    """
    z = complex(z)
    n = _pole_index(z)
    if n is not None:
        raise GammaPoleError(n, func="digamma")
    if z.real < 0.5:
        # psi(1-z) - psi(z) = pi cot(pi z)
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    s = 0j
    w = z
    while w.real < 10.0:
        s -= 1.0 / w
        w += 1.0
    w2 = 1.0 / (w * w)
    t = 0j
    p = w2
    for b in _BERNOULLI_OVER_2N:
        t -= b * p
        p *= w2
    return s + cmath.log(w) - 0.5 / w + t


def pow_principal(base: complex, exponent: complex) -> complex:
    """base**exponent via the principal logarithm.

    All tau**(...) and (eps*b/2)**(...) factors in the asymptotic formulas
    use this branch.  Raises ZeroBaseError on base == 0.
    """
    base = complex(base)
    exponent = complex(exponent)
    if base == 0:
        raise ZeroBaseError("pow_principal: zero base")
    return cmath.exp(exponent * cmath.log(base))
