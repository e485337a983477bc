"""Kernel backend selection and cross-backend agreement."""

import os
import subprocess
import sys
import textwrap


def _run_backend(flag: str) -> str:
    code = textwrap.dedent(
        """
        from dp3.kernels import NUMBA_ENABLED
        from dp3.monodromy import ProblemParams, complete_from_G
        from dp3.asymptotics import build_profile, series_for_regime
        from dp3.series import eval_expansion
        from dp3.dynamics import SolutionState, IntegrateOptions, integrate

        params = ProblemParams(0.25 + 0.1j, 1.0, 1)
        data = complete_from_G(params, 0.95 + 0.15j, 0.25 - 0.1j, 0.2 + 0.1j)
        prof = build_profile(data)
        exp = series_for_regime(prof, K=5)
        r = eval_expansion(exp, 1e-3)
        start = SolutionState(1e-3, r.value, r.derivative, 0j)
        tr = integrate(start, params, [5e-2], IntegrateOptions(rtol=1e-11))
        print(NUMBA_ENABLED, repr(complex(tr.u[-1])), tr.status)
        """
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env=dict(os.environ, DP3_NUMBA=flag),
    )
    assert out.returncode == 0, out.stderr
    return out.stdout.strip()


def test_env_flag_selects_backend_and_results_agree():
    jit = _run_backend("1")
    py = _run_backend("0")
    assert jit.startswith("True ")
    assert py.startswith("False ")
    u_jit = complex(jit.split()[1].strip("()"))
    u_py = complex(py.split()[1].strip("()"))
    assert abs(u_jit - u_py) < 1e-12 * abs(u_py)
    assert jit.endswith("done") and py.endswith("done")
