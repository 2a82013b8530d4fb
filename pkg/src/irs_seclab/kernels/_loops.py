"""Scalar-loop kernels, compiled with numba when it is available."""

import math

import numpy as np

from ._backend import njit


@njit
def _ratio(gb, ge, ab, ae):
    return (1.0 + gb * (ab.real * ab.real + ab.imag * ab.imag)) / (
        1.0 + ge * (ae.real * ae.real + ae.imag * ae.imag))


@njit
def _stationary_points(n0, n1, n2, d0, d1, d2):
    """Roots of d/dphi [(n0+n1 cos+n2 sin)/(d0+d1 cos+d2 sin)] = 0."""
    a = n0 * d1 - n1 * d0
    b = n2 * d0 - n0 * d2
    c = n2 * d1 - n1 * d2
    r = math.sqrt(a * a + b * b)
    if r == 0.0:
        return 0.0, 0.0, False
    psi = math.atan2(b, a)
    q = -c / r
    if q > 1.0:
        q = 1.0
    elif q < -1.0:
        q = -1.0
    base = math.asin(q)
    return base - psi, math.pi - base - psi, True


@njit
def secrecy_ascent(db, de, cb, ce, beta, gb, ge, cos_grid, sin_grid, grid, refine, init, tol, max_sweeps, grid_sweeps):
    """Element-wise coordinate ascent on ``(1+gb|Ab|^2)/(1+ge|Ae|^2)``.

    ``init`` holds one starting phase vector per row. Each element update scans
    ``grid`` (on every sweep without ``refine``, on the first ``grid_sweeps``
    sweeps with it) and, with ``refine``, also tries the two closed-form
    stationary points of its one-dimensional subproblem. Returns the best phase
    vector over all starts and its objective ratio.
    """
    n_starts, n = init.shape
    k = grid.shape[0]
    best_f = -1.0
    best_theta = init[0].copy()
    two_pi = 2.0 * math.pi
    for r in range(n_starts):
        theta = init[r].copy()
        ab = db + 0j
        ae = de + 0j
        for i in range(n):
            u = complex(math.cos(theta[i]), math.sin(theta[i]))
            ab += beta[i] * u * cb[i]
            ae += beta[i] * u * ce[i]
        f = _ratio(gb, ge, ab, ae)
        for sweep in range(max_sweeps):
            f_start = f
            scan = (not refine) or sweep < grid_sweeps
            for i in range(n):
                u = complex(math.cos(theta[i]), math.sin(theta[i]))
                xb = beta[i] * cb[i]
                xe = beta[i] * ce[i]
                rb = ab - xb * u
                re = ae - xe * u
                pb = 2.0 * gb * (rb.conjugate() * xb)
                pe = 2.0 * ge * (re.conjugate() * xe)
                n0 = 1.0 + gb * (abs(rb) ** 2 + abs(xb) ** 2)
                d0 = 1.0 + ge * (abs(re) ** 2 + abs(xe) ** 2)
                n1 = pb.real
                n2 = -pb.imag
                d1 = pe.real
                d2 = -pe.imag
                f_cur = (n0 + n1 * u.real + n2 * u.imag) / (d0 + d1 * u.real + d2 * u.imag)
                best_val = -1.0
                new_phase = theta[i]
                if scan:
                    for j in range(k):
                        val = (n0 + n1 * cos_grid[j] + n2 * sin_grid[j]) / (d0 + d1 * cos_grid[j] + d2 * sin_grid[j])
                        if val > best_val:
                            best_val = val
                            new_phase = grid[j]
                if refine:
                    p1, p2, ok = _stationary_points(n0, n1, n2, d0, d1, d2)
                    if ok:
                        for p in (p1, p2):
                            val = (n0 + n1 * math.cos(p) + n2 * math.sin(p)) / (d0 + d1 * math.cos(p) + d2 * math.sin(p))
                            if val > best_val:
                                best_val = val
                                new_phase = p % two_pi
                if best_val > f_cur:
                    theta[i] = new_phase
                    u = complex(math.cos(new_phase), math.sin(new_phase))
                    ab = rb + xb * u
                    ae = re + xe * u
            ab = db + 0j
            ae = de + 0j
            for i in range(n):
                u = complex(math.cos(theta[i]), math.sin(theta[i]))
                ab += beta[i] * u * cb[i]
                ae += beta[i] * u * ce[i]
            f = _ratio(gb, ge, ab, ae)
            if math.log2(f) - math.log2(f_start) < tol:
                break
        if f > best_f:
            best_f = f
            best_theta = theta.copy()
    return best_theta, best_f


@njit
def table_eval(table, x0, dx, s, u):
    """Bilinear lookup of a covertness table at mean SNR ``s`` and LoS share ``u``.

    Rows run over log10(s) on a uniform grid starting at ``x0``; columns over
    u in [0, 1]. Below the first row the value is linearly blended towards 1
    at s = 0; above the last row it is held.
    """
    if s <= 0.0:
        return 1.0
    return table_eval_log(table, x0, dx, math.log10(s), u)


@njit
def table_eval_log(table, x0, dx, x, u):
    """``table_eval`` with the mean SNR given as ``x = log10(s)``."""
    nx, nu = table.shape
    fu = u * (nu - 1)
    iu = int(fu)
    if iu >= nu - 1:
        iu = nu - 2
    if iu < 0:
        iu = 0
    wu = fu - iu
    if x <= x0:
        g = table[0, iu] * (1.0 - wu) + table[0, iu + 1] * wu
        return 1.0 + (g - 1.0) * 10.0 ** (x - x0)
    fx = (x - x0) / dx
    ix = int(fx)
    if ix >= nx - 1:
        return table[nx - 1, iu] * (1.0 - wu) + table[nx - 1, iu + 1] * wu
    wx = fx - ix
    g0 = table[ix, iu] * (1.0 - wu) + table[ix, iu + 1] * wu
    g1 = table[ix + 1, iu] * (1.0 - wu) + table[ix + 1, iu + 1] * wu
    return g0 * (1.0 - wx) + g1 * wx


@njit
def covert_bruteforce(beta_combos, mb0, mb_el, mw0, mw_el, vw0, vw_el, cos_grid, sin_grid,
                      snr_scale, thresholds, table, x0, dx):
    """Exhaustive (beta, theta) sweep grouped by the largest covert power level.

    For every amplitude combination (rows of ``beta_combos``) and every phase
    combination over the elements with non-zero amplitude, the Willie-side
    covertness is evaluated at each power level in ``snr_scale`` (P/sigma^2,
    ascending). For each covertness threshold the candidate joins the group of
    its largest feasible power level; each group keeps the largest Bob mean
    magnitude and the first phase index that reached it. ``best_g0`` is the
    largest covertness value seen at the lowest power level.
    """
    n_combo, n = beta_combos.shape
    t = cos_grid.shape[0]
    n_p = snr_scale.shape[0]
    n_e = thresholds.shape[0]
    best_mag = np.full((n_e, n_combo, n_p), -1.0)
    best_idx = np.full((n_e, n_combo, n_p), -1, dtype=np.int64)
    log_scale = np.log10(snr_scale)
    g_floor = thresholds.min()
    best_g0 = -1.0
    gvals = np.empty(n_p)
    active = np.empty(n, dtype=np.int64)
    digits = np.zeros(n, dtype=np.int64)
    weight = np.empty(n, dtype=np.int64)
    for i in range(n):
        weight[i] = t ** (n - 1 - i)
    for c in range(n_combo):
        n_act = 0
        vw = vw0
        for i in range(n):
            b = beta_combos[c, i]
            vw += b * b * vw_el[i]
            if b > 0.0:
                active[n_act] = i
                n_act += 1
        for i in range(n):
            digits[i] = 0
        while True:
            mb = mb0 + 0j
            mw = mw0 + 0j
            idx = 0
            for j in range(n_act):
                i = active[j]
                d = digits[i]
                u = complex(cos_grid[d], sin_grid[d]) * beta_combos[c, i]
                mb += u * mb_el[i]
                mw += u * mw_el[i]
                idx += d * weight[i]
            mag_b = abs(mb)
            pw = mw.real * mw.real + mw.imag * mw.imag
            tot = pw + vw
            share = pw / tot if tot > 0.0 else 0.0
            log_tot = math.log10(tot) if tot > 0.0 else 0.0
            # covertness falls with power, so stop once even the loosest level fails
            for kp in range(n_p):
                if snr_scale[kp] <= 0.0 or tot <= 0.0:
                    gvals[kp] = 1.0
                else:
                    gvals[kp] = table_eval_log(table, x0, dx, log_scale[kp] + log_tot, share)
                if gvals[kp] < g_floor:
                    for rest in range(kp + 1, n_p):
                        gvals[rest] = -1.0
                    break
            if gvals[0] > best_g0:
                best_g0 = gvals[0]
            for e in range(n_e):
                kmax = -1
                for kp in range(n_p):
                    if gvals[kp] >= thresholds[e]:
                        kmax = kp
                    else:
                        break
                if kmax >= 0 and mag_b > best_mag[e, c, kmax]:
                    best_mag[e, c, kmax] = mag_b
                    best_idx[e, c, kmax] = idx
            # odometer over active elements, last element fastest
            j = n_act - 1
            while j >= 0:
                i = active[j]
                digits[i] += 1
                if digits[i] < t:
                    break
                digits[i] = 0
                j -= 1
            if j < 0:
                break
    return best_mag, best_idx, best_g0
