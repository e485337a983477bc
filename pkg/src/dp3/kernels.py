"""Adaptive RK45 core for the complex-plane integration of the system.

This is the one hot numeric loop of the package: stepping the first-order
system y = (u, u', phi) along a straight segment tau(s) = tau0 + s*dtau,
with embedded Dormand-Prince error control and pole/zero guards.

The kernel is compiled with numba when available; setting DP3_NUMBA=0 (or
a missing numba install) selects the identical pure-Python path.  See
benchmarks/bench_integrate.py for the speed comparison.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["integrate_segment", "NUMBA_ENABLED", "STATUS"]

STATUS = {
    "done": 0,
    "pole_guard": 1,
    "zero_guard": 2,
    "max_steps": 3,
    "step_underflow": 4,
}

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5, _C6 = 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# error = y5 - y4
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _integrate_segment_impl(
    tau0,
    dtau,
    u0,
    du0,
    phi0,
    a,
    b,
    eps,
    rtol,
    atol,
    max_steps,
    umax,
    umin,
    rec_tau,
    rec_u,
    rec_du,
    rec_phi,
):
    """Integrate s: 0 -> 1 along tau = tau0 + s*dtau.

    umax/umin are the pole/zero guard thresholds on |u*tau|.  Records
    accepted steps into the rec_* buffers; returns
    (status, n_recorded, s_reached, u, du, phi).
    """
    s = 0.0
    u = u0
    du = du0
    phi = phi0
    h = 1e-3
    nrec = 0
    rec_tau[nrec] = tau0
    rec_u[nrec] = u
    rec_du[nrec] = du
    rec_phi[nrec] = phi
    nrec += 1
    twoab = 2.0 * a * b
    b2 = b * b
    eight_eps = 8.0 * eps

    for _step in range(max_steps):
        if s >= 1.0:
            return 0, nrec, s, u, du, phi
        if h > 1.0 - s:
            h = 1.0 - s

        # stage derivatives (f = dy/ds = dy/dtau * dtau)
        tau = tau0 + s * dtau
        k1u = du * dtau
        k1d = (
            du * du / u - du / tau + (-eight_eps * u * u + twoab) / tau + b2 / u
        ) * dtau
        k1p = (2.0 * a / tau + b / u) * dtau

        uu = u + h * _A21 * k1u
        dd = du + h * _A21 * k1d
        tau = tau0 + (s + _C2 * h) * dtau
        k2u = dd * dtau
        k2d = (
            dd * dd / uu - dd / tau + (-eight_eps * uu * uu + twoab) / tau + b2 / uu
        ) * dtau
        k2p = (2.0 * a / tau + b / uu) * dtau

        uu = u + h * (_A31 * k1u + _A32 * k2u)
        dd = du + h * (_A31 * k1d + _A32 * k2d)
        tau = tau0 + (s + _C3 * h) * dtau
        k3u = dd * dtau
        k3d = (
            dd * dd / uu - dd / tau + (-eight_eps * uu * uu + twoab) / tau + b2 / uu
        ) * dtau
        k3p = (2.0 * a / tau + b / uu) * dtau

        uu = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
        dd = du + h * (_A41 * k1d + _A42 * k2d + _A43 * k3d)
        tau = tau0 + (s + _C4 * h) * dtau
        k4u = dd * dtau
        k4d = (
            dd * dd / uu - dd / tau + (-eight_eps * uu * uu + twoab) / tau + b2 / uu
        ) * dtau
        k4p = (2.0 * a / tau + b / uu) * dtau

        uu = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
        dd = du + h * (_A51 * k1d + _A52 * k2d + _A53 * k3d + _A54 * k4d)
        tau = tau0 + (s + _C5 * h) * dtau
        k5u = dd * dtau
        k5d = (
            dd * dd / uu - dd / tau + (-eight_eps * uu * uu + twoab) / tau + b2 / uu
        ) * dtau
        k5p = (2.0 * a / tau + b / uu) * dtau

        uu = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u)
        dd = du + h * (_A61 * k1d + _A62 * k2d + _A63 * k3d + _A64 * k4d + _A65 * k5d)
        tau = tau0 + (s + h) * dtau
        k6u = dd * dtau
        k6d = (
            dd * dd / uu - dd / tau + (-eight_eps * uu * uu + twoab) / tau + b2 / uu
        ) * dtau
        k6p = (2.0 * a / tau + b / uu) * dtau

        un = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
        dn = du + h * (_B1 * k1d + _B3 * k3d + _B4 * k4d + _B5 * k5d + _B6 * k6d)
        pn = phi + h * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p + _B6 * k6p)

        # FSAL stage for the error estimate
        k7u = dn * dtau
        k7d = (
            dn * dn / un - dn / tau + (-eight_eps * un * un + twoab) / tau + b2 / un
        ) * dtau
        k7p = (2.0 * a / tau + b / un) * dtau

        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
        ed = h * (_E1 * k1d + _E3 * k3d + _E4 * k4d + _E5 * k5d + _E6 * k6d + _E7 * k7d)
        ep = h * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p + _E7 * k7p)

        sc_u = atol + rtol * max(abs(u), abs(un))
        sc_d = atol + rtol * max(abs(du), abs(dn))
        sc_p = atol + rtol * max(abs(phi), abs(pn))
        err = np.sqrt(
            (
                (abs(eu) / sc_u) ** 2
                + (abs(ed) / sc_d) ** 2
                + (abs(ep) / sc_p) ** 2
            )
            / 3.0
        )

        if err <= 1.0:
            s += h
            u = un
            du = dn
            phi = pn
            if nrec < rec_tau.shape[0]:
                rec_tau[nrec] = tau0 + s * dtau
                rec_u[nrec] = u
                rec_du[nrec] = du
                rec_phi[nrec] = phi
                nrec += 1
            # guards on |u*tau| plus a local distance estimate: a second-order
            # pole has |2u/u'| -> 0 and a first-order zero has |u/u'| -> 0,
            # while smooth growth/decay keeps both comparable to |tau| (this
            # suppresses spurious trips when the natural |u*tau| scale drifts
            # over a long run)
            taunow = tau0 + s * dtau
            aut = abs(u) * abs(taunow)
            if aut > umax:
                if abs(2.0 * u) < 0.05 * abs(du) * abs(taunow) or aut > 1e6 * umax:
                    return 1, nrec, s, u, du, phi
            if aut < umin:
                if abs(u) < 0.05 * abs(du) * abs(taunow) or aut < 1e-6 * umin:
                    return 2, nrec, s, u, du, phi
        fac = 2.0 if err == 0.0 else 0.9 * err ** (-0.2)
        if fac > 5.0:
            fac = 5.0
        if fac < 0.2:
            fac = 0.2
        h *= fac
        if h < 1e-14:
            return 4, nrec, s, u, du, phi
    return 3, nrec, s, u, du, phi


NUMBA_ENABLED = False
integrate_segment = _integrate_segment_impl

if os.environ.get("DP3_NUMBA", "1") != "0":
    try:
        import numba

        integrate_segment = numba.njit(cache=True, fastmath=False)(
            _integrate_segment_impl
        )
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised via the env flag instead
        pass
