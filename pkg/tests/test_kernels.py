"""The numba loops and the numpy fallback must agree."""

import numpy as np
import pytest

from irs_seclab import kernels
from irs_seclab.covert import CovertnessParams, _beta_combos
from irs_seclab.detector import covertness_table


def _problem(rng, n):
    cn = lambda *s: rng.standard_normal(s) + 1j * rng.standard_normal(s)
    return complex(cn()), complex(cn()), cn(n), cn(n)


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.ENV_VAR == "IRS_SECLAB_KERNELS"


@pytest.mark.parametrize("refine", [True, False])
def test_secrecy_ascent_agrees(refine):
    rng = np.random.default_rng(1)
    grid = 2 * np.pi * np.arange(16) / 16
    for _ in range(20):
        db, de, cb, ce = _problem(rng, 5)
        init = rng.uniform(0, 2 * np.pi, (3, 5)) if refine else grid[rng.integers(0, 16, (3, 5))]
        args = (db, de, cb, ce, np.ones(5), 10.0, 10.0, np.cos(grid), np.sin(grid), grid, refine, init,
                1e-9, 100, 1)
        t1, v1 = kernels.loops.secrecy_ascent(*args)
        t2, v2 = kernels.vectorized.secrecy_ascent(*args)
        assert v1 == pytest.approx(v2, rel=1e-9, abs=1e-12)


def test_table_eval_agrees():
    t = covertness_table(100)
    rng = np.random.default_rng(2)
    s = 10 ** rng.uniform(-7, 5, 500)
    u = rng.uniform(0, 1, 500)
    a = np.array([kernels.loops.table_eval(t.values, t.x0, t.dx, x, y) for x, y in zip(s, u)])
    b = kernels.vectorized.table_eval(t.values, t.x0, t.dx, s, u)
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_covert_bruteforce_agrees():
    rng = np.random.default_rng(3)
    t = covertness_table(100)
    combos = _beta_combos((0.0, 0.5, 1.0), 2)
    theta = 2 * np.pi * np.arange(8) / 8
    thr = np.array([CovertnessParams(e).threshold for e in (0.05, 0.2, 0.5)])
    for _ in range(10):
        mb0, mw0, mb_el, mw_el = _problem(rng, 2)
        mw_el = 0.3 * mw_el
        vw_el = rng.uniform(0.1, 0.5, 2)
        snr = np.logspace(-1, 2, 6)
        args = (combos, mb0, mb_el, mw0, mw_el, 0.4, vw_el, np.cos(theta), np.sin(theta), snr, thr,
                t.values, t.x0, t.dx)
        m1, i1, g1 = kernels.loops.covert_bruteforce(*args)
        m2, i2, g2 = kernels.vectorized.covert_bruteforce(*args)
        assert np.array_equal(i1, i2)
        assert np.allclose(m1, m2, rtol=1e-12)
        assert g1 == pytest.approx(g2, abs=1e-12)


def test_env_flag_selects_numpy():
    import os
    import subprocess
    import sys

    env = dict(os.environ, IRS_SECLAB_KERNELS="numpy")
    out = subprocess.run([sys.executable, "-c", "from irs_seclab import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
