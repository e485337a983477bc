"""End-to-end validation of the exponent-series phi forms (item-3 paths)."""

import cmath

import numpy as np
import pytest

from dp3.asymptotics import build_profile, eval_phi, eval_u, series_for_regime
from dp3.dynamics import IntegrateOptions, SolutionState, integrate
from dp3.monodromy import ProblemParams, RegimeTag, classify, complete_special
from dp3.series import eval_expansion


@pytest.mark.parametrize(
    "tag,a,kw",
    [
        (RegimeTag.SPECIAL_POWER_PLUS, 0.4 - 1.3j, dict(g21=0.8, s1inf=0.5)),
        (RegimeTag.SPECIAL_POWER_MINUS, 0.4 + 1.3j, dict(g12=0.8, s0inf=0.5)),
    ],
)
def test_item3_u_and_phi_close_under_integration(tag, a, kw):
    # deep in the one-parameter family (|Im a| > 1) the evaluators use the
    # rearranged middle-series form for u and the exponent-series form for
    # exp(i*phi); both must be consistent with direct integration
    params = ProblemParams(a, 1.0, 1)
    data = complete_special(tag, params, **kw)
    assert classify(data).tag is tag
    prof = build_profile(data)
    exp = series_for_regime(prof, K=6)
    tau0, tau1 = 1e-4, 1e-3
    r = eval_expansion(exp, tau0)
    phi0 = -1j * cmath.log(eval_phi(prof, tau0)[0])
    st = SolutionState(tau0, r.value, r.derivative, phi0)
    tr = integrate(st, params, [tau1], IntegrateOptions(rtol=1e-12))
    assert tr.status == "done"
    u1, _ = eval_u(prof, tau1)
    assert abs(u1 - tr.u[-1]) < 1e-8 * abs(tr.u[-1])
    e1, _ = eval_phi(prof, tau1)
    assert abs(e1 - cmath.exp(1j * tr.phi[-1])) < 1e-6 * abs(e1)


def test_lattice_orbit_accessor_fields():
    from dp3.monodromy import complete_from_G
    from dp3.dynamics import lattice_orbit

    params = ProblemParams(0.25 + 0.1j, 1.0, 1)
    data = complete_from_G(params, 0.95 + 0.15j, 0.25 - 0.1j, 0.2 + 0.1j)
    prof = build_profile(data)
    exp = series_for_regime(prof, K=6)
    r = eval_expansion(exp, 1e-3)
    st = SolutionState(1e-3, r.value, r.derivative, 0j)
    grid = list(np.linspace(0.1, 0.3, 8))
    tr = integrate(st, params, grid, IntegrateOptions(rtol=1e-11))
    idx = [int(np.argmin(np.abs(tr.tau - g))) for g in grid]
    states = [SolutionState(tr.tau[i], tr.u[i], tr.du[i], tr.phi[i]) for i in idx]
    orb = lattice_orbit(states, params, range(0, 2))
    assert np.allclose(orb.v(0), orb.u[0] / orb.taus)
    assert np.allclose(orb.w(0), orb.v(0) * orb.v(1))
    assert np.allclose(orb.g(0), orb.w(0) * orb.w(1))
    assert np.allclose(orb.alpha(0) ** 2, orb.w(0))
    # x grid carries the stated sign at eps = +1
    assert np.all(orb.x_grid().real < 0)
