"""Pure-numpy counterparts of the loop kernels (same algorithms, same results)."""

import numpy as np

TWO_PI = 2.0 * np.pi


def _sum_terms(d, beta, theta, c):
    # sequential accumulation keeps the rounding identical to the loop kernel
    acc = np.full(theta.shape[:-1], d, dtype=complex)
    for i in range(theta.shape[-1]):
        u = np.cos(theta[..., i]) + 1j * np.sin(theta[..., i])
        acc = acc + beta[i] * u * c[i]
    return acc


def _ratio(gb, ge, ab, ae):
    return (1.0 + gb * (ab.real * ab.real + ab.imag * ab.imag)) / (
        1.0 + ge * (ae.real * ae.real + ae.imag * ae.imag))


def secrecy_ascent(db, de, cb, ce, beta, gb, ge, cos_grid, sin_grid, grid, refine, init, tol, max_sweeps, grid_sweeps):
    """Coordinate ascent, vectorized across starts and grid points."""
    theta = np.array(init, dtype=float, copy=True)
    n_starts, n = theta.shape
    ab = _sum_terms(db, beta, theta, cb)
    ae = _sum_terms(de, beta, theta, ce)
    f = _ratio(gb, ge, ab, ae)
    running = np.ones(n_starts, dtype=bool)
    for sweep in range(max_sweeps):
        if not running.any():
            break
        f_start = f.copy()
        scan = (not refine) or sweep < grid_sweeps
        for i in range(n):
            u = np.cos(theta[:, i]) + 1j * np.sin(theta[:, i])
            xb = beta[i] * cb[i]
            xe = beta[i] * ce[i]
            rb = ab - xb * u
            re = ae - xe * u
            pb = 2.0 * gb * (np.conj(rb) * xb)
            pe = 2.0 * ge * (np.conj(re) * xe)
            n0 = 1.0 + gb * (np.abs(rb) ** 2 + abs(xb) ** 2)
            d0 = 1.0 + ge * (np.abs(re) ** 2 + abs(xe) ** 2)
            n1, n2 = pb.real, -pb.imag
            d1, d2 = pe.real, -pe.imag
            f_cur = (n0 + n1 * u.real + n2 * u.imag) / (d0 + d1 * u.real + d2 * u.imag)
            if scan:
                vals = (n0[:, None] + n1[:, None] * cos_grid + n2[:, None] * sin_grid) / (
                    d0[:, None] + d1[:, None] * cos_grid + d2[:, None] * sin_grid)
                best_k = np.argmax(vals, axis=1)
                best_val = vals[np.arange(n_starts), best_k]
                new_phase = grid[best_k]
            else:
                best_val = np.full(n_starts, -1.0)
                new_phase = theta[:, i].copy()
            if refine:
                a = n0 * d1 - n1 * d0
                b = n2 * d0 - n0 * d2
                c = n2 * d1 - n1 * d2
                r = np.sqrt(a * a + b * b)
                ok = r != 0.0
                with np.errstate(divide="ignore", invalid="ignore"):
                    q = np.clip(-c / np.where(ok, r, 1.0), -1.0, 1.0)
                psi = np.arctan2(b, a)
                base = np.arcsin(q)
                for p in (base - psi, np.pi - base - psi):
                    val = (n0 + n1 * np.cos(p) + n2 * np.sin(p)) / (d0 + d1 * np.cos(p) + d2 * np.sin(p))
                    take = ok & (val > best_val)
                    best_val = np.where(take, val, best_val)
                    new_phase = np.where(take, np.mod(p, TWO_PI), new_phase)
            move = running & (best_val > f_cur)
            theta[move, i] = new_phase[move]
            u_new = np.cos(new_phase) + 1j * np.sin(new_phase)
            ab = np.where(move, rb + xb * u_new, ab)
            ae = np.where(move, re + xe * u_new, ae)
        ab = _sum_terms(db, beta, theta, cb)
        ae = _sum_terms(de, beta, theta, ce)
        f_new = _ratio(gb, ge, ab, ae)
        f = np.where(running, f_new, f)
        running &= ~(np.log2(f) - np.log2(f_start) < tol)
    best = int(np.argmax(f))
    return theta[best].copy(), float(f[best])


def table_eval(table, x0, dx, s, u):
    """Vectorized bilinear covertness-table lookup (see the loop kernel)."""
    s = np.asarray(s, dtype=float)
    u = np.broadcast_to(np.asarray(u, dtype=float), s.shape)
    with np.errstate(divide="ignore"):
        x = np.log10(np.where(s > 0, s, 1.0))
    out = table_eval_log(table, x0, dx, x, u)
    return np.where(s > 0, out, 1.0)


def table_eval_log(table, x0, dx, x, u):
    nx, nu = table.shape
    x = np.asarray(x, dtype=float)
    u = np.broadcast_to(np.asarray(u, dtype=float), x.shape)
    fu = u * (nu - 1)
    iu = np.clip(fu.astype(np.int64), 0, nu - 2)
    wu = fu - iu
    fx = (x - x0) / dx
    ix = np.clip(np.where(x <= x0, 0, fx).astype(np.int64), 0, nx - 1)
    ix1 = np.minimum(ix + 1, nx - 1)
    wx = fx - ix
    g0 = table[ix, iu] * (1.0 - wu) + table[ix, iu + 1] * wu
    g1 = table[ix1, iu] * (1.0 - wu) + table[ix1, iu + 1] * wu
    inner = g0 * (1.0 - wx) + g1 * wx
    low = 1.0 + (g0 - 1.0) * 10.0 ** np.minimum(x - x0, 0.0)
    out = np.where(x <= x0, low, np.where(ix >= nx - 1, g0, inner))
    return out


def covert_bruteforce(beta_combos, mb0, mb_el, mw0, mw_el, vw0, vw_el, cos_grid, sin_grid,
                      snr_scale, thresholds, table, x0, dx):
    """Same contract as the loop kernel; vectorized over phase combinations."""
    n_combo, n = beta_combos.shape
    t = cos_grid.shape[0]
    n_p = snr_scale.shape[0]
    n_e = thresholds.shape[0]
    best_mag = np.full((n_e, n_combo, n_p), -1.0)
    best_idx = np.full((n_e, n_combo, n_p), -1, dtype=np.int64)
    with np.errstate(divide="ignore"):
        log_scale = np.log10(snr_scale)
    weight = t ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best_g0 = -1.0
    for c in range(n_combo):
        betas = beta_combos[c]
        vw = vw0
        for i in range(n):
            vw = vw + betas[i] * betas[i] * vw_el[i]
        active = np.flatnonzero(betas > 0.0)
        if active.size:
            digits = np.stack(np.unravel_index(np.arange(t ** active.size), (t,) * active.size), axis=1)
        else:
            digits = np.zeros((1, 0), dtype=np.int64)
        mb = np.full(digits.shape[0], mb0, dtype=complex)
        mw = np.full(digits.shape[0], mw0, dtype=complex)
        idx = np.zeros(digits.shape[0], dtype=np.int64)
        for j, i in enumerate(active):
            d = digits[:, j]
            u = (cos_grid[d] + 1j * sin_grid[d]) * betas[i]
            mb = mb + u * mb_el[i]
            mw = mw + u * mw_el[i]
            idx = idx + d * weight[i]
        mag_b = np.abs(mb)
        pw = mw.real * mw.real + mw.imag * mw.imag
        tot = pw + vw
        pos = tot > 0.0
        share = np.where(pos, pw / np.where(pos, tot, 1.0), 0.0)
        log_tot = np.log10(np.where(pos, tot, 1.0))
        gvals = np.empty((digits.shape[0], n_p))
        for kp in range(n_p):
            if snr_scale[kp] <= 0.0:
                gvals[:, kp] = 1.0
            else:
                g = table_eval_log(table, x0, dx, log_scale[kp] + log_tot, share)
                gvals[:, kp] = np.where(pos, g, 1.0)
        best_g0 = max(best_g0, float(gvals[:, 0].max()))
        for e in range(n_e):
            ok = gvals >= thresholds[e]
            # the feasible set is a prefix of the power levels
            prefix = np.cumprod(ok, axis=1).sum(axis=1) - 1
            for kp in range(n_p):
                sel = np.flatnonzero(prefix == kp)
                if sel.size:
                    j = sel[np.argmax(mag_b[sel])]
                    best_mag[e, c, kp] = mag_b[j]
                    best_idx[e, c, kp] = idx[j]
    return best_mag, best_idx, best_g0
