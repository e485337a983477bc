#!/usr/bin/env python3
"""Benchmark the RK45 kernel: numba-compiled vs pure-Python fallback.

The kernel is selected at import time by DP3_NUMBA, so each variant runs
in a fresh interpreter.  Run:  python benchmarks/bench_integrate.py
"""

import json
import os
import subprocess
import sys
import textwrap

WORK = textwrap.dedent(
    """
    import json, os, time
    import numpy as np
    from dp3.kernels import NUMBA_ENABLED
    from dp3.monodromy import ProblemParams, complete_from_G
    from dp3.asymptotics import build_profile, series_for_regime
    from dp3.series import eval_expansion
    from dp3.dynamics import SolutionState, IntegrateOptions, integrate

    params = ProblemParams(0.25 + 0.1j, 1.0, 1)
    data = complete_from_G(params, 0.95 + 0.15j, 0.25 - 0.1j, 0.2 + 0.1j)
    prof = build_profile(data)
    exp = series_for_regime(prof, K=6)
    r = eval_expansion(exp, 1e-4)
    start = SolutionState(1e-4, r.value, r.derivative, 0j)
    opts = IntegrateOptions(rtol=1e-12, atol=1e-14)

    # warm-up (includes JIT compilation when enabled)
    integrate(start, params, [1e-3], opts)

    reps = 5
    t0 = time.perf_counter()
    steps = 0
    for _ in range(reps):
        tr = integrate(start, params, [0.8], opts)
        steps += tr.tau.size
    dt = (time.perf_counter() - t0) / reps
    print(json.dumps({
        "numba": NUMBA_ENABLED,
        "seconds_per_run": dt,
        "accepted_steps": steps // reps,
        "endpoint_u": [tr.u[-1].real, tr.u[-1].imag],
    }))
    """
)


def run(numba_flag: str):
    env = dict(os.environ, DP3_NUMBA=numba_flag)
    out = subprocess.run(
        [sys.executable, "-c", WORK], capture_output=True, text=True, env=env
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    jit = run("1")
    py = run("0")
    assert jit["numba"] and not py["numba"], "backend selection failed"
    du = abs(
        complex(*jit["endpoint_u"]) - complex(*py["endpoint_u"])
    ) / abs(complex(*py["endpoint_u"]))
    print(f"numba kernel : {jit['seconds_per_run']*1e3:8.1f} ms/run  "
          f"({jit['accepted_steps']} accepted steps)")
    print(f"pure python  : {py['seconds_per_run']*1e3:8.1f} ms/run  "
          f"({py['accepted_steps']} accepted steps)")
    print(f"speedup      : {py['seconds_per_run']/jit['seconds_per_run']:8.1f}x")
    print(f"endpoint agreement between backends: {du:.2e}")


if __name__ == "__main__":
    main()
