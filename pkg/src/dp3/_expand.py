"""Graded series algebra used by the expansion generators.

Terms are keyed (p, m, j) and stand for  tau**(p + m*sigma) * log(tau)**j
with integer p, m, j and a fixed complex grading exponent sigma.  The three
expansion families all live in this algebra (the logarithmic families use
m = 0 keys only).  Coefficient recurrences reduce to collecting rows of the
polynomial form of the equation,

    E(u) = u u'' - (u')^2 + u u'/tau + (8 u^3 - 2 a beff u)/tau - beff^2,

which vanishes identically on solutions with eps = +1 and b replaced by
beff = eps*b (the eps-normalized convention used throughout).
"""

from __future__ import annotations

from typing import Dict, Tuple

Key = Tuple[int, int, int]
Series = Dict[Key, complex]


def smul(A: Series, B: Series) -> Series:
    out: Series = {}
    for (pa, ma, ja), ca in A.items():
        for (pb, mb, jb), cb in B.items():
            k = (pa + pb, ma + mb, ja + jb)
            out[k] = out.get(k, 0j) + ca * cb
    return out


def sadd(*terms) -> Series:
    """Sum of (coeff, series) pairs."""
    out: Series = {}
    for c, A in terms:
        if c == 0:
            continue
        for k, v in A.items():
            out[k] = out.get(k, 0j) + c * v
    return out


def sshift(A: Series, dp: int) -> Series:
    return {(p + dp, m, j): c for (p, m, j), c in A.items()}


def sdtau(A: Series, sigma: complex) -> Series:
    """d/dtau of a series: tau^e log^j -> e tau^(e-1) log^j + j tau^(e-1) log^(j-1)."""
    out: Series = {}
    for (p, m, j), c in A.items():
        e = p + m * sigma
        k1 = (p - 1, m, j)
        out[k1] = out.get(k1, 0j) + c * e
        if j != 0:
            k2 = (p - 1, m, j - 1)
            out[k2] = out.get(k2, 0j) + c * j
    return out


def sclean(A: Series, tol: float = 0.0) -> Series:
    return {k: v for k, v in A.items() if abs(v) > tol}


def equation_defect(u: Series, a: complex, beff: float, sigma: complex) -> Series:
    """E(u) for the eps-normalized equation (see module docstring)."""
    u1 = sdtau(u, sigma)
    u2 = sdtau(u1, sigma)
    U2 = smul(u, u)
    E = sadd(
        (1, smul(u, u2)),
        (-1, smul(u1, u1)),
        (1, sshift(smul(u, u1), -1)),
        (8, sshift(smul(U2, u), -1)),
        (-2 * a * beff, sshift(u, -1)),
    )
    k0 = (0, 0, 0)
    E[k0] = E.get(k0, 0j) - beff * beff
    return E


def defect_linearization(
    u_ref: Series,
    u1_ref: Series,
    u2_ref: Series,
    U2_ref: Series,
    e: Series,
    a: complex,
    beff: float,
    sigma: complex,
) -> Series:
    """Directional derivative of E at u_ref in direction e (exact since E is
    cubic; callers arrange gradings so self-pairings of e land off the rows
    they read)."""
    e1 = sdtau(e, sigma)
    e2 = sdtau(e1, sigma)
    return sadd(
        (1, smul(u_ref, e2)),
        (1, smul(e, u2_ref)),
        (-2, smul(u1_ref, e1)),
        (1, sshift(smul(u_ref, e1), -1)),
        (1, sshift(smul(e, u1_ref), -1)),
        (24, sshift(smul(U2_ref, e), -1)),
        (-2 * a * beff, sshift(e, -1)),
    )


def row(A: Series, p: int) -> Dict[Tuple[int, int], complex]:
    """Restriction of a series to integer tau-grade p: {(m, j): coeff}."""
    return {(m, j): c for (p_, m, j), c in A.items() if p_ == p}
