#!/usr/bin/env python3
"""Smoke test for the hsx_py extension module.

Builds nothing itself: run `cargo build -p hsx-py --release` first, then
`python3 python/smoke_test.py`. The script locates the built cdylib,
exposes it as an importable module, and exercises the main types and
operations end to end against the closed-form reference values.
"""

import glob
import math
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load_module():
    candidates = []
    for profile in ("release", "debug"):
        candidates += glob.glob(os.path.join(ROOT, "target", profile, "libhsx_py.so"))
        candidates += glob.glob(os.path.join(ROOT, "target", profile, "libhsx_py.dylib"))
        candidates += glob.glob(os.path.join(ROOT, "target", profile, "hsx_py.dll"))
    if not candidates:
        sys.exit("no built extension found; run `cargo build -p hsx-py --release` first")
    stage = tempfile.mkdtemp(prefix="hsx_py_")
    dest = os.path.join(stage, "hsx_py.so")
    shutil.copy(candidates[0], dest)
    sys.path.insert(0, stage)
    import hsx_py

    return hsx_py


def approx(a, b, tol=1e-10):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    hsx = load_module()
    checks = 0

    # initial data and validation
    s = hsx.EulerianState.multipeakon(0.5, 0.5)
    approx(s.total_energy(), 2.5, 1e-14)
    approx(s.u(1.0), 1.0, 1e-14)
    approx(s.f_right(0.0) - s.f_left(0.0), 0.5, 1e-14)
    assert s.validate() == []
    checks += 4

    # JSON loading matches the built-in family
    s2 = hsx.EulerianState.from_json(
        '{"alpha": 0.5, "u": {"nodes": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 0.0]},'
        ' "F_atoms": [{"x": 0.0, "mass": 0.5}], "F_continuous": "from_u"}'
    )
    approx(s2.total_energy(), 2.5, 1e-14)
    checks += 1

    # projection on an atom-aligned grid reproduces the profile exactly
    p = s.project(0.5, 0.0)
    for x in (-0.3, 0.25, 1.0, 1.7, 2.4):
        approx(p.u(x), s.u(x), 1e-13)
    approx(p.total_energy(), 2.5, 1e-12)
    checks += 6

    # the energy drop at the concentration time, against the closed form
    lag = p.to_lagrangian()
    approx(lag.evolve(1.999999).v_inf(), 2.5, 1e-9)
    approx(lag.evolve(2.0).v_inf(), 2.0, 1e-12)
    approx(lag.evolve(4.0).v_inf(), hsx.exact_total_energy("multipeakon", 0.5, 4.0), 1e-12)
    checks += 3

    # evolved profile matches the exact solution pointwise
    st = lag.evolve(1.5).to_eulerian()
    for x in (-2.0, -0.5, 0.4, 1.9, 3.1, 5.0):
        ue, fe = hsx.exact_eulerian("multipeakon", 0.5, 1.5, x)
        approx(st.u(x), ue, 1e-11)
    checks += 6

    # breaking times of the projected data: the falling flank breaks at 2
    taus = [t for t in lag.breaking_times() if math.isfinite(t) and t > 0]
    approx(min(taus), 2.0, 1e-12)
    checks += 1

    # cusp: projected energy converges to 8/3 and dissipates linearly
    c = hsx.project_example("cusp", 0.4, 0.01)
    approx(c.total_energy(), 8.0 / 3.0, 1e-3)
    xc = c.to_lagrangian()
    approx(xc.evolve(3.0).v_inf(), hsx.exact_total_energy("cusp", 0.4, 3.0), 1e-2)
    checks += 2

    # cosine: Lagrangian closed form and first breaking time
    y, u, v, h = hsx.exact_lagrangian("cosine", 0.6, 0.0, 1.0 + math.pi**2 / 2.0)
    approx(y, 1.0, 1e-11)
    approx(u, math.cos(math.pi), 1e-11)
    approx(hsx.exact_total_energy("cosine", 0.6, 0.0), 2 * math.pi**2, 1e-12)
    checks += 3

    # the metric separates different resolutions and vanishes on identity
    a = hsx.project_example("multipeakon", 0.5, 0.25, origin=-0.13).to_lagrangian()
    b = hsx.project_example("multipeakon", 0.5, 0.125, origin=-0.13).to_lagrangian()
    assert a.metric(a) == 0.0
    assert a.metric(b) > 0.0
    checks += 2

    # a small convergence study end to end
    out = tempfile.mkdtemp(prefix="hsx_exp_")
    table = hsx.run_experiment(
        "multipeakon", out, alpha=0.5, beta=0.5,
        dx_list=[0.235, 0.1196, 0.0609, 0.031, 0.0158], t_final=4.0, nt=129,
    )
    assert len(table["rows"]) == 5
    assert table["order_u"] > 0.8, table
    assert table["order_f_inf"] > 0.8, table
    assert os.path.exists(os.path.join(out, "error_table.csv"))
    assert os.path.exists(os.path.join(out, "plots.gp"))
    checks += 5

    print(f"smoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
