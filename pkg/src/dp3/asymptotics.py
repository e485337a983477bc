"""Leading small-tau asymptotics of u and exp(i*phi) for every regime.

Each classified monodromy point gets an AsymptoticProfile holding the
closed-form amplitude data of its regime (the w/omega amplitudes of the
power regimes, the log-shift constants of the logarithmic regimes, the
oscillator amplitudes of the pole-accumulation regime, or the Taylor seeds
of the meromorphic ones).  Evaluators return the leading value together
with the correction exponents the formula is valid to.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from dp3.monodromy import (
    BranchingParams,
    MonodromyData,
    Regime,
    RegimeTag,
    branching,
    classify,
    residual_norm,
)
from dp3.series import (
    SeriesExpansion,
    eval_expansion,
    irreglog_coeffs,
    phi_series,
    power_coeffs,
    reglog_coeffs,
)
from dp3.specfun import EULER_GAMMA, digamma, gamma, pow_principal

__all__ = [
    "AsymptoticProfile",
    "PoleChart",
    "DomainError",
    "build_profile",
    "eval_u",
    "eval_phi",
    "eval_uniform",
    "uniform_terms",
    "pole_chart",
    "G_plus_minus",
    "find_G_pm_roots",
    "identify_from_asymptotics",
    "w_amplitudes",
    "series_for_regime",
    "perturbed_w1_oracle",
]

PI = math.pi


class DomainError(ValueError):
    """Evaluation requested inside an excluded disc; carries the nearest
    predicted pole."""

    def __init__(self, msg, nearest=None):
        super().__init__(msg)
        self.nearest = nearest


@dataclass
class AsymptoticProfile:
    regime: Regime
    branching: BranchingParams
    data: MonodromyData
    coefficients: dict
    correction_orders: tuple


@dataclass
class PoleChart:
    """Predicted second-order pole sites accumulating at the origin, with
    the excluded discs D_p of radius R_p = J |tau_p|^(1+delta_d)."""

    tau_p: list
    p_range: range
    J: float
    delta_d: float
    radii: list
    varkappa: float
    ray_angle: float

    def nearest(self, tau: complex):
        d, best = min((abs(tau - t), t) for t in self.tau_p)
        return best, d

    def in_disc(self, tau: complex) -> bool:
        return any(abs(tau - t) < r for t, r in zip(self.tau_p, self.radii))


# ---------------------------------------------------------------------------
# amplitude coefficients


def w_amplitudes(data: MonodromyData, varrho: complex):
    """The four generic power amplitudes at the branching representative
    varrho; they satisfy w1 w2 w3 w4 = (2 pi)^2 e^{-pi a} and w1/w2 = w3/w4,
    and w_k(varrho) = -w_{k+1}(1 - varrho) for k = 1, 3."""
    a = data.params.a
    beff = data.params.beff
    q = cmath.exp(0.25j * PI)
    ev = cmath.exp(1j * PI * varrho)
    base_p = 0.5 * beff * 1j  # (eps b/2) e^{i pi/2}
    base_m = -0.5 * beff * 1j
    g11, g12, g21, g22 = data.g
    gr = gamma(2 * varrho) / gamma(2 - 2 * varrho)
    w1 = (
        pow_principal(base_p, 0.5 - varrho)
        * gr
        * gamma(1 - varrho + 0.5j * a)
        * (g11 * q / ev + g21 / q * ev)
    )
    w2 = (
        pow_principal(base_p, varrho - 0.5)
        / gr
        * gamma(varrho + 0.5j * a)
        * (g11 * q * ev + g21 / q / ev)
    )
    w3 = (
        pow_principal(base_m, 0.5 - varrho)
        * gr
        * gamma(1 - varrho - 0.5j * a)
        * (g12 * q / ev + g22 / q * ev)
    )
    w4 = (
        pow_principal(base_m, varrho - 0.5)
        / gr
        * gamma(varrho - 0.5j * a)
        * (g12 * q * ev + g22 / q / ev)
    )
    return w1, w2, w3, w4


def _special_power_hats(data: MonodromyData, br: BranchingParams, plus: bool):
    """Amplitudes of the one-parameter power families (the gamma-pole
    indeterminacy of the generic w resolved in closed form)."""
    a = data.params.a
    beff = data.params.beff
    varrho = br.varrho
    gr = gamma(2 * varrho) / gamma(2 - 2 * varrho)
    sha = cmath.sinh(PI * a)
    if plus:
        n = max(0, round((varrho - 1 - 0.5j * a).real))
        base = 0.5 * beff * 1j
        w1 = (
            pow_principal(base, 0.5 - varrho)
            * (2 * PI / math.factorial(n))
            * gr
            * cmath.exp(0.75j * PI - 1.5 * PI * a)
            / (data.s1inf * data.g21)
        )
        w2 = (
            pow_principal(base, varrho - 0.5)
            * cmath.exp(1j * PI * (varrho - 0.25))
            / gr
            * gamma(2 * varrho - n - 1)
            * 2
            * sha
            * data.g21
        )
        return w1, w2, n
    n = max(0, round((varrho - 1 + 0.5j * a).real))
    base = -0.5 * beff * 1j
    w3 = (
        pow_principal(base, 0.5 - varrho)
        * (2 * PI / math.factorial(n))
        * gr
        * cmath.exp(0.25j * PI + 0.5 * PI * a)
        / (data.s0inf * data.g12)
    )
    w4 = (
        pow_principal(base, varrho - 0.5)
        * cmath.exp(1j * PI * (0.25 - varrho))
        / gr
        * gamma(2 * varrho - n - 1)
        * 2
        * sha
        * data.g12
    )
    return w3, w4, n


def _pole_amplitudes(data: MonodromyData, varkappa: float):
    """Oscillator amplitudes of the pole-accumulation regime (generic
    Stokes data); A-route and B-route give identical asymptotics."""
    a = data.params.a
    beff = data.params.beff
    g11, g12, g21, g22 = data.g
    q = cmath.exp(-0.25j * PI)

    def A(k):
        return (
            math.exp(PI * k / 2)
            * pow_principal(beff / 2, -1j * k)
            * gamma(1 + 2j * k)
            / gamma(1 - 2j * k)
            * gamma(0.5 + 0.5j * a - 1j * k)
            * (g11 * q * math.exp(PI * k) + g21 / q * math.exp(-PI * k))
        )

    def B(k):
        return (
            math.exp(-PI * k / 2)
            * pow_principal(beff / 2, -1j * k)
            * gamma(1 + 2j * k)
            / gamma(1 - 2j * k)
            * gamma(0.5 - 0.5j * a - 1j * k)
            * (g12 * q * math.exp(PI * k) + g22 / q * math.exp(-PI * k))
        )

    return {
        "A+": A(varkappa),
        "A-": A(-varkappa),
        "B+": B(varkappa),
        "B-": B(-varkappa),
    }


def _pole_variant_amplitudes(data: MonodromyData, varkappa: float, n: int, plus: bool):
    """Amplitudes of the special-power pole variants a = 2k +- i(2n+1)."""
    beff = data.params.beff
    k = varkappa
    gr = gamma(1 + 2j * k) / gamma(1 - 2j * k)
    if plus:
        w1 = (
            pow_principal(beff / 2, -1j * k)
            * cmath.exp(0.25j * PI + 1j * PI * (n + 1))
            * (2 * PI / math.factorial(n))
            * gr
            * math.exp(-2.5 * PI * k)
            / (data.s1inf * data.g21)
        )
        w2 = (
            pow_principal(beff / 2, 1j * k)
            * cmath.exp(-0.25j * PI - 1j * PI * (n + 1))
            * (2 * PI / gamma(n + 1 - 2j * k))
            / gr
            * math.exp(-1.5 * PI * k)
            * data.g21
        )
        return {"o1": w1, "o2": w2}
    w3 = (
        pow_principal(beff / 2, 1j * k)
        * cmath.exp(-0.25j * PI - 1j * PI * n)
        * (2 * PI / math.factorial(n))
        / gr
        * math.exp(1.5 * PI * k)
        / (data.s0inf * data.g12)
    )
    w4 = (
        pow_principal(beff / 2, -1j * k)
        * cmath.exp(0.25j * PI + 1j * PI * (n + 1))
        * (2 * PI / gamma(n + 1 + 2j * k))
        * gr
        * math.exp(-1.5 * PI * k)
        * data.g12
    )
    return {"o3": w3, "o4": w4}


def _log_constants(data: MonodromyData):
    """The log-shift constants: c for the branching-exponent-0 family,
    c_-/c_+ for the exponent-1/2 family (they coincide on the manifold)."""
    a = data.params.a
    beff = data.params.beff
    g11, g12, g21, g22 = data.g
    lb = math.log(beff / 2)
    out = {}
    if abs(data.s00 - 2j) < 1e-6 * max(1.0, abs(data.s00)):
        out["c"] = (
            4 * EULER_GAMMA
            + 1j / a
            + digamma(-0.5j * a)
            - 0.5j * PI
            + 1j * PI * (g12 + 1j * g22) / (g12 - 1j * g22)
            + lb
        )
    if abs(data.s00 + 2j) < 1e-6 * max(1.0, abs(data.s00)):
        out["c_minus"] = (
            4 * EULER_GAMMA
            + digamma(0.5 + 0.5j * a)
            + 0.5j * PI
            + 1j * PI * (g11 - 1j * g21) / (g11 + 1j * g21)
            + lb
        )
        out["c_plus"] = (
            4 * EULER_GAMMA
            + digamma(0.5 - 0.5j * a)
            - 0.5j * PI
            + 1j * PI * (g12 - 1j * g22) / (g12 + 1j * g22)
            + lb
        )
    return out


def G_plus_minus(a: complex, eb: float):
    """The pair of truncation indicators of the exponent-1/2 log family
    (zero iff the log-shift constant vanishes).

    The digamma arguments are 1 +- ia/2: that convention reproduces the
    reference root table for eb = 2 (the 1/2 +- ia/2 variant does not)."""
    ema = cmath.exp(-PI * a)
    psi_sym = 0.5 * (digamma(1 + 0.5j * a) + digamma(1 - 0.5j * a))
    core = (1 + ema) / PI * (math.log(eb / 2) + 4 * EULER_GAMMA + psi_sym)
    return core + 1j * ema, core - 1j * ema


# ---------------------------------------------------------------------------
# profile construction


def build_profile(data: MonodromyData, tol: float = 1e-9) -> AsymptoticProfile:
    """Fill the regime-specific coefficient record from the closed forms."""
    if residual_norm(data) > 1e-6:
        raise ValueError("data too far off the monodromy manifold")
    regime = classify(data, tol=tol)
    br = branching(data, regime, tol=tol)
    a = data.params.a
    beff = data.params.beff
    tag = regime.tag
    co: dict = {}

    if tag is RegimeTag.GENERIC_POWER:
        if regime.subcase.get("varrho_ray"):
            raise DomainError("excluded ray: use uniform or rho-based evaluation")
        w1, w2, w3, w4 = w_amplitudes(data, br.varrho)
        co.update(w1=w1, w2=w2, w3=w3, w4=w4)
        re = br.varrho.real
        orders = (4 * re, 4 - 4 * re)
    elif tag is RegimeTag.SPECIAL_POWER_PLUS:
        if regime.subcase.get("poles"):
            co.update(_pole_variant_amplitudes(data, regime.subcase["varkappa"],
                                               regime.subcase["n"], True))
            orders = (2.0,)
        else:
            sigma = -2j * a
            b1m1 = (
                -1j
                * pow_principal(beff / 2, 1 + 1j * a)
                * PI
                * cmath.exp(PI * a / 2)
                / cmath.sinh(PI * a)
                * data.s1inf
                * data.g21**2
                / gamma(1 + 1j * a) ** 3
            )
            co.update(sigma=sigma, b1m1=b1m1)
            if a.imag > 0:
                w1, w2, n = _special_power_hats(data, br, True)
                co.update(w1=w1, w2=w2, n=n)
            orders = (2.0, abs(2 - 2 * sigma.real))
    elif tag is RegimeTag.SPECIAL_POWER_MINUS:
        if regime.subcase.get("poles"):
            co.update(_pole_variant_amplitudes(data, regime.subcase["varkappa"],
                                               regime.subcase["n"], False))
            orders = (2.0,)
        else:
            sigma = -2j * a
            b11 = (
                -1j
                * pow_principal(beff / 2, 1 - 1j * a)
                * PI
                * cmath.exp(-1.5 * PI * a)
                / cmath.sinh(PI * a)
                * data.s0inf
                * data.g12**2
                / gamma(1 - 1j * a) ** 3
            )
            co.update(sigma=sigma, b11=b11)
            if a.imag < 0:
                w3, w4, n = _special_power_hats(data, br, False)
                co.update(w3=w3, w4=w4, n=n)
            orders = (2.0, abs(2 + 2 * sigma.real))
    elif tag is RegimeTag.LOG_RHO0:
        co.update(_log_constants(data))
        orders = (2.0,)
    elif tag is RegimeTag.LOG_VARRHO_HALF:
        co.update(_log_constants(data))
        gp, gm = G_plus_minus(a, beff)
        co.update(G_plus=gp, G_minus=gm)
        orders = (2.0,)
    elif tag is RegimeTag.POLE_ACCUMULATION:
        co.update(_pole_amplitudes(data, regime.subcase["varkappa"]))
        co["varkappa"] = regime.subcase["varkappa"]
        orders = (2.0,)  # 2 - delta_d once a chart is chosen
    elif tag is RegimeTag.MEROMORPHIC_VANISHING:
        co["sigma"] = -2j * a
        if regime.subcase.get("family") == "half":
            n = regime.subcase["n"]
            co["n"] = n
            dfac = float(_double_factorial(2 * n - 1))
            if a.imag > 0:
                co["b11_hat"] = (
                    cmath.exp(0.75j * PI)
                    * cmath.exp(-0.5j * PI * n)
                    * beff ** (n + 0.5)
                    * 2 ** (2 * n)
                    * data.s0inf
                    * data.g12**2
                    / (math.sqrt(2 * PI) * dfac**3)
                )
            else:
                co["b1m1_check"] = (
                    cmath.exp(-0.75j * PI)
                    * cmath.exp(0.5j * PI * n)
                    * beff ** (n + 0.5)
                    * 2 ** (2 * n)
                    * data.s1inf
                    * data.g21**2
                    / (math.sqrt(2 * PI) * dfac**3)
                )
        orders = (float("inf"),)
    elif tag is RegimeTag.MEROMORPHIC_NONVANISHING:
        co["sigma"] = 1.0 + 0j
        g11, g12, g21, g22 = data.g
        if regime.subcase.get("family") == "generic":
            co["b1m1_tilde"] = (
                math.sqrt(beff / 2)
                * cmath.exp(PI * a / 2)
                / (2 * PI)
                * gamma(0.75 - 0.5j * a)
                * gamma(0.75 + 0.5j * a)
                * (g11 + g21)
                * (g12 + g22)
            )
        else:
            m = regime.subcase["m"]
            co["m"] = m
            if m >= 1:
                # a = i(m - 1/2), s0inf = 0
                if m % 2 == 0:
                    n = (m - 2) // 2  # a = i(2n + 3/2)
                    co["b1m1_tilde"] = (
                        -math.sqrt(2 * PI)
                        / 4
                        * math.sqrt(beff)
                        / (data.s1inf * g21**2)
                        * _double_factorial(2 * n + 1)
                        / _double_factorial(2 * n)
                    )
                else:
                    n = (m - 1) // 2  # a = i(2n + 1/2)
                    co["b1m1_tilde"] = (
                        -4
                        * cmath.exp(0.25j * PI)
                        * math.sqrt(beff)
                        / math.sqrt(2 * PI)
                        * _double_factorial(2 * n)
                        / _double_factorial(2 * n - 1)
                        * data.s1inf
                        * g21**2
                    )
            else:
                nn = 1 - m
                if nn % 2 == 0:
                    n = (nn - 2) // 2  # a = -i(2n + 3/2)
                    co["b1m1_tilde"] = (
                        cmath.exp(-0.25j * PI)
                        * math.sqrt(2 * PI)
                        / 4
                        * math.sqrt(beff)
                        / (data.s0inf * g12**2)
                        * _double_factorial(2 * n + 1)
                        / _double_factorial(2 * n)
                    )
                else:
                    n = (nn - 1) // 2  # a = -i(2n + 1/2)
                    co["b1m1_tilde"] = (
                        cmath.exp(0.75j * PI)
                        * math.sqrt(beff)
                        / math.sqrt(2 * PI)
                        * _double_factorial(2 * n)
                        / _double_factorial(2 * n - 1)
                        * data.s0inf
                        * g12**2
                    )
        orders = (float("inf"),)
    else:
        raise ValueError(f"unhandled regime {tag}")

    return AsymptoticProfile(regime, br, data, co, orders)


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    out = 1
    while n > 0:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# evaluation


def _power_like_u(eps, varrho, wa, wb, tau):
    t1 = pow_principal(tau, 1 - 2 * varrho)
    t2 = pow_principal(tau, -1 + 2 * varrho)
    return eps * (1 - 2 * varrho) ** 2 * wa * wb / (tau * (wa * t1 + wb * t2) ** 2)


def _tau2ia(tau, a):
    return pow_principal(2 * tau * tau, 1j * a)


def eval_u(
    profile: AsymptoticProfile,
    tau: complex,
    chart: PoleChart | None = None,
    series_level: int | None = None,
):
    """Leading-order u(tau) for the profile's regime.

    Returns (value, correction_orders).  In the pole-accumulation regime
    the point is checked against the excluded discs (a DomainError carries
    the nearest predicted pole).  For the meromorphic regimes the Taylor
    series is summed to series_level (default 6).
    """
    tau = complex(tau)
    data = profile.data
    eps = data.params.epsilon
    a = data.params.a
    beff = data.params.beff
    tag = profile.regime.tag
    co = profile.coefficients

    if tag is RegimeTag.GENERIC_POWER:
        return (
            _power_like_u(eps, profile.branching.varrho, co["w1"], co["w2"], tau),
            profile.correction_orders,
        )

    if tag is RegimeTag.SPECIAL_POWER_PLUS and not profile.regime.subcase.get("poles"):
        if -1 < a.imag < 1:
            sigma, b1m1 = co["sigma"], co["b1m1"]
            ts = pow_principal(tau, 1 - sigma)
            val = (
                eps * b1m1 * ts / (1 + 4 * b1m1 * ts * tau / (sigma - 2) ** 2) ** 2
                - data.params.b * tau / (2 * a)
            )
            return val, (abs(2 - sigma.real), 2.0)
        if a.imag > 0:
            return (
                _power_like_u(eps, profile.branching.varrho, co["w1"], co["w2"], tau),
                profile.correction_orders,
            )
        return _middle_series_u(profile, tau, series_level)

    if tag is RegimeTag.SPECIAL_POWER_MINUS and not profile.regime.subcase.get("poles"):
        if -1 < a.imag < 1:
            sigma, b11 = co["sigma"], co["b11"]
            ts = pow_principal(tau, 1 + sigma)
            val = (
                eps * b11 * ts / (1 + 4 * b11 * ts * tau / (sigma + 2) ** 2) ** 2
                - data.params.b * tau / (2 * a)
            )
            return val, (abs(2 + sigma.real), 2.0)
        if a.imag < 0:
            return (
                _power_like_u(eps, profile.branching.varrho, co["w3"], co["w4"], tau),
                profile.correction_orders,
            )
        return _middle_series_u(profile, tau, series_level)

    if tag is RegimeTag.LOG_RHO0:
        lt = cmath.log(tau)
        c = co["c"]
        val = (
            -a
            * data.params.b
            * tau
            * (lt + 0.5 * (c - 1j / a))
            * (lt + 0.5 * (c + 1j / a))
        )
        return val, (2.0,)

    if tag is RegimeTag.LOG_VARRHO_HALF:
        lt = cmath.log(tau)
        return -eps / (4 * tau * (lt + co["c_minus"] / 2) ** 2), (2.0,)

    if tag is RegimeTag.POLE_ACCUMULATION:
        if chart is not None and chart.in_disc(tau):
            t, d = chart.nearest(tau)
            raise DomainError(f"tau inside excluded disc around {t}", nearest=t)
        k = co["varkappa"]
        Ap, Am = co["A+"], co["A-"]
        tp = pow_principal(tau, -2j * k)
        tm = pow_principal(tau, 2j * k)
        val = 4 * eps * k * k * Ap * Am / (tau * (Ap * tp - Am * tm) ** 2)
        dd = chart.delta_d if chart is not None else 0.0
        return val, (2.0 - dd,)

    if tag in (RegimeTag.SPECIAL_POWER_PLUS, RegimeTag.SPECIAL_POWER_MINUS):
        # pole variants
        k = profile.regime.subcase["varkappa"]
        if chart is not None and chart.in_disc(tau):
            t, d = chart.nearest(tau)
            raise DomainError(f"tau inside excluded disc around {t}", nearest=t)
        if "o1" in co:
            o1, o2 = co["o1"], co["o2"]
            tp = pow_principal(tau, -2j * k)
            tm = pow_principal(tau, 2j * k)
            val = -4 * eps * k * k * o1 * o2 / (tau * (o1 * tp + o2 * tm) ** 2)
        else:
            o3, o4 = co["o3"], co["o4"]
            tp = pow_principal(tau, 2j * k)
            tm = pow_principal(tau, -2j * k)
            val = -4 * eps * k * k * o3 * o4 / (tau * (o3 * tp + o4 * tm) ** 2)
        dd = chart.delta_d if chart is not None else 0.0
        return val, (2.0 - dd,)

    if tag in (RegimeTag.MEROMORPHIC_VANISHING, RegimeTag.MEROMORPHIC_NONVANISHING):
        return _middle_series_u(profile, tau, series_level)

    raise ValueError(f"unhandled regime {tag}")


def _middle_series_u(profile, tau, series_level):
    K = series_level or 6
    exp = series_for_regime(profile, K=K)
    r = eval_expansion(exp, tau)
    return r.value, (float(2 * K + 1),)


def eval_phi(profile: AsymptoticProfile, tau: complex, N: int = 4):
    """Leading value of exp(i*phi(tau)) with its correction orders."""
    tau = complex(tau)
    data = profile.data
    a = data.params.a
    eps = data.params.epsilon
    beff = data.params.beff
    tag = profile.regime.tag
    co = profile.coefficients
    g11, g12, g21, g22 = data.g

    if tag is RegimeTag.GENERIC_POWER:
        w1w2 = co["w1"] * co["w2"]
        val = (
            cmath.exp(1.5j * PI)
            * cmath.exp(-PI * a / 2)
            * (2 * PI / w1w2)
            * _tau2ia(tau, a)
        )
        return val, profile.correction_orders

    if tag is RegimeTag.SPECIAL_POWER_PLUS and not profile.regime.subcase.get("poles"):
        if -1 < a.imag < 1:
            val = (
                cmath.exp(PI * a)
                / (2 * PI * a * g21**2)
                * (
                    cmath.exp(PI * a / 2)
                    * gamma(1 - 1j * a)
                    * data.s1inf
                    * g21**2
                    * _tau2ia(tau, a)
                    - 1j * gamma(1 + 1j * a) ** 2 * pow_principal(4 / beff, 1j * a)
                )
            )
            return val, (2.0, abs(2 + (2j * a).real))
        if a.imag > 0:
            w1w2 = co["w1"] * co["w2"]
            val = (
                cmath.exp(1.5j * PI)
                * cmath.exp(-PI * a / 2)
                * (2 * PI / w1w2)
                * _tau2ia(tau, a)
            )
            return val, profile.correction_orders
        # Im a < 0: exponent-series form
        n = profile.regime.subcase.get("n", 1)
        exp = series_for_regime(profile, K=max(N + 1, n + 1))
        ps = phi_series("middle", exp, N)
        sigma, b1m1 = co["sigma"], co["b1m1"]
        pre = (
            -1j
            * cmath.exp(PI * a)
            * gamma(1 + 1j * a) ** 2
            / (2 * PI * a * g21**2)
            * pow_principal(beff / 4, -1j * a)
        )
        expo = ps.exponent_value(tau) + 1j * (4 * a * a / beff) * b1m1 * pow_principal(
            tau, -sigma
        ) / sigma
        return pre * cmath.exp(expo), (float(2 * n),)

    if tag is RegimeTag.SPECIAL_POWER_MINUS and not profile.regime.subcase.get("poles"):
        if -1 < a.imag < 1:
            inv = (
                -cmath.exp(PI * a)
                / (2 * PI * a * g12**2)
                * (
                    cmath.exp(-1.5 * PI * a)
                    * gamma(1 + 1j * a)
                    * data.s0inf
                    * g12**2
                    * _tau2ia(tau, -a)
                    - 1j * gamma(1 - 1j * a) ** 2 * pow_principal(4 / beff, -1j * a)
                )
            )
            return 1 / inv, (2.0, abs(2 - (2j * a).real))
        if a.imag < 0:
            w3w4 = co["w3"] * co["w4"]
            val = (
                cmath.exp(1.5j * PI)
                * cmath.exp(PI * a / 2)
                * (w3w4 / (2 * PI))
                * _tau2ia(tau, a)
            )
            return val, profile.correction_orders
        n = profile.regime.subcase.get("n", 1)
        exp = series_for_regime(profile, K=max(N + 1, n + 1))
        ps = phi_series("middle", exp, N)
        sigma, b11 = co["sigma"], co["b11"]
        pre_inv = (
            1j
            * cmath.exp(PI * a)
            * gamma(1 - 1j * a) ** 2
            / (2 * PI * a * g12**2)
            * pow_principal(beff / 4, 1j * a)
        )
        expo_inv = -ps.exponent_value(tau) + 1j * (4 * a * a / beff) * b11 * (
            pow_principal(tau, sigma) / sigma
        )
        return 1 / (pre_inv * cmath.exp(expo_inv)), (float(2 * n),)

    if tag is RegimeTag.LOG_RHO0:
        lt = cmath.log(tau)
        c = co["c"]
        val = (
            cmath.exp(0.5 * PI * (a + 1j))
            / (PI * a)
            * (g12 - 1j * g22) ** 2
            * gamma(1 - 0.5j * a) ** 2
            * _tau2ia(tau, a)
            * (lt + 0.5 * (c + 1j / a))
            / (lt + 0.5 * (c - 1j / a))
        )
        return val, (2.0,)

    if tag is RegimeTag.LOG_VARRHO_HALF:
        lt = cmath.log(tau)
        cm = co["c_minus"]
        expo = -2j * eps * data.params.b * tau * tau * (
            (lt + cm / 2 - 0.5) ** 2 + 0.25
        )
        val = (
            -2
            * PI
            * cmath.exp(-PI * a / 2)
            * _tau2ia(tau, a)
            * cmath.exp(expo)
            / (gamma(0.5 + 0.5j * a) * (g11 + 1j * g21)) ** 2
        )
        return val, (4.0,)

    if tag is RegimeTag.POLE_ACCUMULATION:
        AA = co["A+"] * co["A-"]
        val = (
            2
            * PI
            * cmath.exp(-1.5j * PI)
            * cmath.exp(-PI * a / 2)
            / AA
            * _tau2ia(tau, a)
        )
        return val, (2.0,)

    if tag in (RegimeTag.SPECIAL_POWER_PLUS, RegimeTag.SPECIAL_POWER_MINUS):
        k = profile.regime.subcase["varkappa"]
        n = profile.regime.subcase["n"]
        if "o1" in co:
            oo = co["o1"] * co["o2"]
            val = (
                cmath.exp(-PI * k - 1j * PI * (n + 1))
                * (2 * PI / oo)
                * pow_principal(2 * tau * tau, -2 * n - 1 + 2j * k)
            )
        else:
            oo = co["o3"] * co["o4"]
            val = (
                cmath.exp(PI * k + 1j * PI * (n + 1))
                * (oo / (2 * PI))
                * pow_principal(2 * tau * tau, 2 * n + 1 + 2j * k)
            )
        return val, (2.0,)

    if tag is RegimeTag.MEROMORPHIC_VANISHING:
        exp = series_for_regime(profile, K=max(N + 1, 3))
        if profile.regime.subcase.get("family") == "odd":
            ps = phi_series("middle", exp, N)
            pre_inv = (
                1j
                * cmath.exp(PI * a)
                * gamma(1 - 1j * a) ** 2
                / (2 * PI * a * g12**2)
                * pow_principal(beff / 4, 1j * a)
            )
            return 1 / (pre_inv * cmath.exp(-ps.exponent_value(tau))), (
                float(2 * N + 2),
            )
        n = profile.regime.subcase["n"]
        dfac = float(_double_factorial(2 * n - 1))
        if a.imag > 0:
            ps = phi_series("vanishing-plus", exp, N)
            pre_inv = (
                (-1) ** n
                * 1j
                * dfac**2
                / (2 * beff ** (n - 0.5) * g12**2 * (2 * n - 1))
            )
            return 1 / (pre_inv * cmath.exp(ps.exponent_value(tau))), (float(N + 1),)
        ps = phi_series("vanishing-minus", exp, N)
        pre = (
            (-1) ** n
            * 1j
            * dfac**2
            / (2 * beff ** (n - 0.5) * g21**2 * (2 * n - 1))
        )
        return pre * cmath.exp(ps.exponent_value(tau)), (float(N + 1),)

    if tag is RegimeTag.MEROMORPHIC_NONVANISHING:
        exp = series_for_regime(profile, K=max(N + 2, 3))
        ps = phi_series("nonvanishing", exp, N)
        expo = ps.exponent_value(tau)
        if profile.regime.subcase.get("family") == "generic":
            pre = (
                cmath.exp(-0.75j * PI)
                * gamma(0.75 - 0.5j * a)
                / gamma(0.75 + 0.5j * a)
                * ((g12 + g22) / (g11 + g21))
                * _tau2ia(tau, a)
            )
            return pre * cmath.exp(expo), (float(N + 1),)
        m = profile.regime.subcase["m"]
        if m >= 1:
            if m % 2 == 0:
                n = (m - 2) // 2
                pre = (
                    cmath.exp(-0.25j * PI)
                    * (-1) ** n
                    * math.factorial(2 * n + 1)
                    * data.s1inf
                    / (math.sqrt(2 * PI) * (2 * tau) ** (4 * n + 3))
                )
            else:
                n = (m - 1) // 2
                pre = (
                    cmath.exp(0.25j * PI)
                    * (-1) ** n
                    * math.factorial(2 * n)
                    * data.s1inf
                    / (math.sqrt(2 * PI) * (2 * tau) ** (4 * n + 1))
                )
        else:
            nn = 1 - m
            if nn % 2 == 0:
                n = (nn - 2) // 2
                pre = (
                    cmath.exp(-0.25j * PI)
                    * math.sqrt(2 * PI)
                    * (-1) ** n
                    * (2 * tau) ** (4 * n + 3)
                    / (math.factorial(2 * n + 1) * data.s0inf)
                )
            else:
                n = (nn - 1) // 2
                pre = (
                    cmath.exp(0.25j * PI)
                    * math.sqrt(2 * PI)
                    * (2 * tau) ** (4 * n + 1)
                    / ((-1) ** n * math.factorial(2 * n) * data.s0inf)
                )
        return pre * cmath.exp(expo), (float(N + 1),)

    raise ValueError(f"unhandled regime {tag}")


# ---------------------------------------------------------------------------
# series parametrization (seeding the integrator and the complete expansions)


def series_for_regime(profile: AsymptoticProfile, K: int = 6, M: int = 12) -> SeriesExpansion:
    """Complete local expansion whose leading behaviour is the profile's.

    Maps the regime's amplitude data onto the seeds of the matching family:
    power-like for the power regimes (the branching representative chosen
    inside |Re sigma| < 2), regular log for the exponent-0 log family,
    irregular log for the exponent-1/2 one (ct[-1,3] = c_-/4).
    """
    data = profile.data
    params = data.params
    a = params.a
    tag = profile.regime.tag
    co = profile.coefficients

    if tag is RegimeTag.GENERIC_POWER:
        vr = profile.branching.varrho
        w1, w2 = co["w1"], co["w2"]
        if vr.real > 0.5:
            sigma = 4 * vr - 4
            b11 = (1 - 2 * vr) ** 2 * w2 / w1
            return power_coeffs(params, sigma, b11=b11, K=K)
        sigma = 4 * vr
        b1m1 = (1 - 2 * vr) ** 2 * w1 / w2
        return power_coeffs(params, sigma, b1m1=b1m1, K=K)

    if tag is RegimeTag.SPECIAL_POWER_PLUS and not profile.regime.subcase.get("poles"):
        return power_coeffs(params, co["sigma"], b11=0.0, b1m1=co["b1m1"], K=K)
    if tag is RegimeTag.SPECIAL_POWER_MINUS and not profile.regime.subcase.get("poles"):
        return power_coeffs(params, co["sigma"], b11=co["b11"], b1m1=0.0, K=K)

    if tag is RegimeTag.LOG_RHO0:
        return reglog_coeffs(params, co["c"], K=K)
    if tag is RegimeTag.LOG_VARRHO_HALF:
        return irreglog_coeffs(params, co["c_minus"] / 4, K=K, M=M)

    if tag is RegimeTag.POLE_ACCUMULATION:
        k = co["varkappa"]
        vr = 0.5 + 1j * k
        sigma = 4 * vr - 4  # Re sigma = -2: convergent off the pole ray
        w1, w2 = co["A+"], -co["A-"]
        b11 = (1 - 2 * vr) ** 2 * w2 / w1
        return power_coeffs(params, sigma, b11=b11, K=K)

    if tag in (RegimeTag.SPECIAL_POWER_PLUS, RegimeTag.SPECIAL_POWER_MINUS):
        k = profile.regime.subcase["varkappa"]
        if "o1" in co:
            vr = 0.5 + 1j * k
            sigma = 4 * vr - 4
            b11 = (1 - 2 * vr) ** 2 * co["o2"] / co["o1"]
            return power_coeffs(params, sigma, b11=b11, K=K)
        vr = 0.5 - 1j * k
        sigma = 4 * vr - 4
        b11 = (1 - 2 * vr) ** 2 * co["o4"] / co["o3"]
        return power_coeffs(params, sigma, b11=b11, K=K)

    if tag is RegimeTag.MEROMORPHIC_VANISHING:
        if profile.regime.subcase.get("family") == "odd":
            return power_coeffs(params, co["sigma"], b11=0.0, b1m1=0.0, K=K)
        if "b11_hat" in co:
            return power_coeffs(params, co["sigma"], b11=co["b11_hat"], b1m1=0.0, K=K)
        return power_coeffs(params, co["sigma"], b11=0.0, b1m1=co["b1m1_check"], K=K)

    if tag is RegimeTag.MEROMORPHIC_NONVANISHING:
        return power_coeffs(params, 1.0 + 0j, b1m1=co["b1m1_tilde"], K=K)

    raise ValueError(f"unhandled regime {tag}")


# ---------------------------------------------------------------------------
# uniform formula


def uniform_terms(params, sigma, b11, b1m1, tau):
    """The three leading uniform terms and the two first-correction terms,
    all with their tau-derivatives; eps is NOT applied here."""
    a, beff = params.a, params.beff
    x = pow_principal(tau, 2 + sigma)
    xb = pow_principal(tau, 2 - sigma)
    z = 4 * b11 * x / (sigma + 2) ** 2
    zb = 4 * b1m1 * xb / (sigma - 2) ** 2
    b10 = 2 * a * beff / sigma**2

    # A0(x)/tau and its mirror
    def a0_pair(z, sgn):
        pref = (sigma + 2 * sgn) ** 2 / 4
        val = pref * z / (1 + z) ** 2
        dz = (2 + sgn * sigma) * z / tau
        dval = pref * (1 - z) / (1 + z) ** 3 * dz
        return val, dval

    A0v, A0d = a0_pair(z, 1)
    B0v, B0d = a0_pair(zb, -1)

    # A1(x)/x - b10 and mirror (first correction kernels)
    def corr_pair(z, sgn):
        s = sigma * sgn
        K = 4 * a * beff * (s + 2) / (sigma**2 * (s + 4) ** 2)
        # h = -K z/(z+1) (2(s+2)^2/(z+1)^2 - (s^2-4)/(z+1) + 4)
        c1, c2 = 2 * (s + 2) ** 2, s * s - 4

        def frac(m):  # z/(1+z)^m and derivative wrt z
            return z / (1 + z) ** m, (1 - (m - 1) * z) / (1 + z) ** (m + 1)

        f3, df3 = frac(3)
        f2, df2 = frac(2)
        f1, df1 = frac(1)
        h = -K * (c1 * f3 - c2 * f2 + 4 * f1)
        dh_dz = -K * (c1 * df3 - c2 * df2 + 4 * df1)
        dz = (2 + s) * z / tau
        return h, dh_dz * dz

    H1v, H1d = corr_pair(z, 1)
    H2v, H2d = corr_pair(zb, -1)
    return {
        "lead": (A0v + B0v) / tau + b10 * tau,
        "dlead": (A0d + B0d) / tau - (A0v + B0v) / tau**2 + b10,
        "corr": tau * (H1v + H2v),
        "dcorr": (H1v + H2v) + tau * (H1d + H2d),
    }


def eval_uniform(
    data_or_profile,
    tau: complex,
    with_correction: bool = False,
    derivative: bool = False,
):
    """Branching-uniform leading term (valid across Re sigma in [-2, 2],
    sigma away from 0, +-2), optionally with the explicit first correction.

    Returns value or (value, derivative)."""
    profile = (
        data_or_profile
        if isinstance(data_or_profile, AsymptoticProfile)
        else build_profile(data_or_profile)
    )
    params = profile.data.params
    eps = params.epsilon
    sigma, b11, b1m1 = uniform_seeds(profile)
    for s in (0.0, 2.0, -2.0):
        if abs(sigma - s) < 1e-6:
            raise DomainError(
                f"sigma within 1e-6 of {s:+.0f}: uniform formula excluded; "
                "use the logarithmic regimes"
            )
    if not -2 - 1e-9 <= sigma.real <= 2 + 1e-9:
        raise DomainError("uniform formula needs Re sigma in [-2, 2]")
    t = uniform_terms(params, sigma, b11, b1m1, complex(tau))
    val = t["lead"]
    dval = t["dlead"]
    if with_correction:
        exp3 = power_coeffs(params, sigma, b11=b11, K=2)
        b30 = exp3.coeffs[(2, 0)]
        val = val + t["corr"] + b30 * tau**3
        dval = dval + t["dcorr"] + 3 * b30 * tau**2
    if derivative:
        return eps * val, eps * dval
    return eps * val


def uniform_seeds(profile: AsymptoticProfile):
    """(sigma, b11, b1m1) of the uniform representation, from the profile's
    amplitude data (sigma = 4*rho, |Re sigma| <= 2)."""
    tag = profile.regime.tag
    co = profile.coefficients
    params = profile.data.params
    a, beff = params.a, params.beff
    if tag is RegimeTag.GENERIC_POWER:
        vr = profile.branching.varrho
        w1, w2 = co["w1"], co["w2"]
        if vr.real > 0.5:
            sigma = 4 * vr - 4
            b11 = (1 - 2 * vr) ** 2 * w2 / w1
            b1m1 = _other_seed(params, sigma, b11)
        else:
            sigma = 4 * vr
            b1m1 = (1 - 2 * vr) ** 2 * w1 / w2
            b11 = _other_seed(params, sigma, b1m1, flip=True)
        return sigma, b11, b1m1
    if tag is RegimeTag.SPECIAL_POWER_PLUS and "b1m1" in co:
        return co["sigma"], 0j, co["b1m1"]
    if tag is RegimeTag.SPECIAL_POWER_MINUS and "b11" in co:
        return co["sigma"], co["b11"], 0j
    if tag is RegimeTag.POLE_ACCUMULATION:
        k = co["varkappa"]
        vr = 0.5 + 1j * k
        sigma = 4 * vr - 4
        b11 = (1 - 2 * vr) ** 2 * (-co["A-"]) / co["A+"]
        return sigma, b11, _other_seed(params, sigma, b11)
    if "o1" in co or "o3" in co:
        # special-power pole variants carry oscillator amplitudes
        k = profile.regime.subcase["varkappa"]
        if "o1" in co:
            vr = 0.5 + 1j * k
            b11 = (1 - 2 * vr) ** 2 * co["o2"] / co["o1"]
        else:
            vr = 0.5 - 1j * k
            b11 = (1 - 2 * vr) ** 2 * co["o4"] / co["o3"]
        sigma = 4 * vr - 4
        return sigma, b11, _other_seed(params, sigma, b11)
    raise DomainError(f"no uniform seeds for regime {tag}")


def _other_seed(params, sigma, seed, flip=False):
    prod = params.beff**2 * (4 * params.a**2 + sigma**2) / (4 * sigma**4)
    return prod / seed if seed != 0 else 0j


# ---------------------------------------------------------------------------
# pole chart


def pole_chart(
    profile: AsymptoticProfile,
    p_range: range,
    delta_d: float = 0.5,
) -> PoleChart:
    """Predicted pole sites tau_p and excluded discs for a pole regime."""
    if not 0 <= delta_d < 2:
        raise ValueError("delta_d must lie in [0, 2)")
    co = profile.coefficients
    tag = profile.regime.tag
    if tag is RegimeTag.POLE_ACCUMULATION:
        k = co["varkappa"]
        shift = (1j / (4 * k)) * cmath.log(co["A-"] / co["A+"])
    elif "o1" in co:
        k = profile.regime.subcase["varkappa"]
        shift = PI / (4 * k) - (1j / (4 * k)) * cmath.log(co["o1"] / co["o2"])
    elif "o3" in co:
        k = profile.regime.subcase["varkappa"]
        shift = PI / (4 * k) + (1j / (4 * k)) * cmath.log(co["o3"] / co["o4"])
    else:
        raise ValueError("pole charts exist only for pole regimes")
    J = 1 - math.exp(-PI / (2 * abs(k)))
    if delta_d == 0:
        J /= 3.0
    taus = [cmath.exp(-PI * p / (2 * abs(k)) + shift) for p in p_range]
    radii = [J * abs(t) ** (1 + delta_d) for t in taus]
    return PoleChart(
        taus, p_range, J, delta_d, radii, k, cmath.phase(taus[0]) if taus else 0.0
    )


# ---------------------------------------------------------------------------
# root finding for the truncation indicators


def find_G_pm_roots(
    eb: float,
    box: tuple,
    which: str = "plus",
    grid: int = 14,
    tol: float = 1e-13,
    max_iter: int = 60,
):
    """Roots of G_+ = 0 (or G_- = 0) inside box = (re_min, re_max, im_min,
    im_max), by damped Newton from a grid of starting points.  Returns the
    deduplicated roots sorted by |Im a|."""
    re0, re1, im0, im1 = box
    idx = 0 if which == "plus" else 1

    def f(a):
        return G_plus_minus(a, eb)[idx]

    roots = []
    h = 1e-7
    for i in range(grid):
        for j in range(grid):
            a = complex(
                re0 + (re1 - re0) * (i + 0.5) / grid,
                im0 + (im1 - im0) * (j + 0.5) / grid,
            )
            ok = False
            for _ in range(max_iter):
                try:
                    fv = f(a)
                    df = (f(a + h) - f(a - h)) / (2 * h)
                except Exception:
                    break
                if df == 0:
                    break
                step = fv / df
                # damping: never jump more than a box diagonal fraction
                lim = 0.3 * max(re1 - re0, im1 - im0)
                if abs(step) > lim:
                    step *= lim / abs(step)
                a = a - step
                if abs(step) < tol:
                    ok = True
                    break
            if not ok:
                continue
            if not (re0 - 0.1 <= a.real <= re1 + 0.1 and im0 - 0.1 <= a.imag <= im1 + 0.1):
                continue
            if abs(f(a)) > 1e-8:
                continue
            if all(abs(a - r) > 1e-6 for r in roots):
                roots.append(a)
    roots.sort(key=lambda r: abs(r.imag))
    return roots


# ---------------------------------------------------------------------------
# identification from an observed power-like asymptotic form


def identify_from_asymptotics(p, q1, q2, alpha, params):
    """Which theorem parametrizes u ~ p/(tau (q1 tau^alpha + q2 tau^-alpha)^2).

    Returns (tag, info) where tag is 'generic', 'special-plus' or
    'special-minus' and info carries the admissible branching exponent(s)
    and the amplitude-ratio relation the monodromy data must satisfy."""
    p, q1, q2, alpha = complex(p), complex(q1), complex(q2), complex(alpha)
    a = params.a
    if 0 in (p, q1, q2, alpha) or abs(alpha.real) >= 1:
        raise ValueError("need alpha, p, q1, q2 != 0 and |Re alpha| < 1")
    # (1) candidate exponents from the tau powers
    vr_a = (1 - alpha) / 2
    vr_b = (1 + alpha) / 2
    # (2) normalize q1*q2 = 1
    lam2 = 1 / (q1 * q2)
    # (3) same exponents from the amplitude
    root = cmath.sqrt(params.epsilon * p * lam2)
    vr_c = (1 - root) / 2
    vr_d = (1 + root) / 2
    pairs = sorted([vr_a, vr_b], key=lambda z: (z.real, z.imag))
    pairs2 = sorted([vr_c, vr_d], key=lambda z: (z.real, z.imag))
    if any(abs(x - y) > 1e-8 * max(1, abs(x)) for x, y in zip(pairs, pairs2)):
        raise ValueError("malformed asymptotics: amplitude and exponents disagree")
    qt1 = q1 * cmath.sqrt(lam2)
    qt2 = q2 * cmath.sqrt(lam2)
    info = {
        "varrho_candidates": (vr_a, vr_b),
        "ratio_relation": {"q1_tilde^2": qt1 * qt1, "equals": "w1/w2 at the chosen varrho"},
    }
    if abs(a.imag) < 1e-12:
        info["varrho"] = vr_a if 0 < vr_a.real < 1 else vr_b
        return "generic", info
    if a.imag > 0:
        want_re = 1 - (a.imag / 2 - math.floor(a.imag / 2))
        want_im = a.real / 2
        for vr in (vr_a, vr_b):
            if abs(vr.real - want_re) < 1e-8 and abs(vr.imag - want_im) < 1e-8:
                info["varrho"] = vr
                info["n"] = math.floor(a.imag / 2)
                return "special-plus", info
        info["varrho"] = vr_a if 0 < vr_a.real < 1 else vr_b
        return "generic", info
    want_re = a.imag / 2 - math.floor(a.imag / 2)
    want_im = -a.real / 2
    for vr in (vr_a, vr_b):
        if abs(vr.real - want_re) < 1e-8 and abs(vr.imag - want_im) < 1e-8:
            info["varrho"] = vr
            info["n"] = math.floor(-a.imag / 2)
            return "special-minus", info
    info["varrho"] = vr_a if 0 < vr_a.real < 1 else vr_b
    return "generic", info


# ---------------------------------------------------------------------------
# the perturbative limit oracle for the special-power amplitude


def perturbed_w1_oracle(data: MonodromyData, delta: float = 1e-6):
    """The gamma-pole indeterminacy of the first special-power amplitude,
    resolved by the limiting procedure: move varrho off the lattice point by
    delta, perturb g11 consistently, and evaluate the generic amplitude.

    Converges to the closed form as delta -> 0 (an independent check; the
    production path never divides limits numerically)."""
    a = data.params.a
    reg = classify(data)
    if reg.tag is not RegimeTag.SPECIAL_POWER_PLUS:
        raise ValueError("oracle applies to the s0inf = 0 family")
    br = branching(data, reg)
    varrho = br.varrho - delta
    epa = cmath.exp(PI * a)
    kappa = (
        -2j * PI * delta / (data.s1inf * data.g21) / epa**2
        + 2 * PI * delta * data.g21 / epa
    )
    perturbed = MonodromyData(
        data.params,
        data.s00,
        data.s0inf,
        data.s1inf,
        data.g11 + kappa,
        data.g12,
        data.g21,
        data.g22,
    )
    w1, _w2, _w3, _w4 = w_amplitudes(perturbed, varrho)
    return w1
