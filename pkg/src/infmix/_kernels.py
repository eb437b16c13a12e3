"""Compiled inner loops for the intermittent family f(x) = x(1 + a x^{1/beta}) mod 1.

Everything here is scalar-parameter only so numba can cache the compiled
code; generic map objects take the (slower) pure-Python paths in
:mod:`infmix.inducing`.
"""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def afn_step(x, a, invb):
    v = x * (1.0 + a * x ** invb)
    f = v - math.floor(v)
    if f > 1.0 - 1e-12:
        f = 0.0
    return f


@njit(cache=True)
def afn_first_return(x, a, invb, y_lo, y_hi, max_iter):
    """Return (r, F x); r = -1 signals the iteration cap (censored)."""
    for k in range(1, max_iter + 1):
        x = afn_step(x, a, invb)
        if y_lo <= x <= y_hi:
            return k, x
    return -1, x


@njit(cache=True)
def afn_collect_returns(x0, a, invb, y_lo, y_hi, n, burn, max_iter, restarts):
    """n stationary points with their first-return times.

    Walks a single f-orbit through successive F-returns; rows are
    (point, r(point)) so the next point is F of the current one.
    Censored excursions restart from the companion pool and are counted.
    """
    ys = np.empty(n)
    rs = np.empty(n, np.int64)
    censored = 0
    ridx = 0
    x = x0
    k = 0
    count = 0
    while count < n:
        r, fx = afn_first_return(x, a, invb, y_lo, y_hi, max_iter)
        if r < 0:
            censored += 1
            x = restarts[ridx % restarts.shape[0]]
            ridx += 1
            continue
        if k >= burn:
            ys[count] = x
            rs[count] = r
            count += 1
        k += 1
        x = fx
    return ys, rs, censored


@njit(cache=True, parallel=True)
def afn_advance_pool_const(ys, fys, taus, us, dt, a, invb, y_lo, y_hi,
                           c_roof, max_iter):
    """Advance every flow point (y, u) by time dt under a constant base roof.

    taus[i] < 0 marks a censored path; it is skipped.  Arrays are updated
    in place; each element is independent so the loop is order-free.
    """
    n = ys.shape[0]
    for i in prange(n):
        tau = taus[i]
        if tau < 0.0:
            continue
        u = us[i] + dt
        y = ys[i]
        fy = fys[i]
        while u >= tau:
            u -= tau
            y = fy
            r, nfy = afn_first_return(y, a, invb, y_lo, y_hi, max_iter)
            if r < 0:
                tau = -1.0
                break
            fy = nfy
            tau = c_roof * r
        ys[i] = y
        fys[i] = fy
        taus[i] = tau
        us[i] = u


@njit(cache=True, parallel=True)
def afn_init_pool_const(ys, fys, taus, a, invb, y_lo, y_hi, c_roof, max_iter):
    """Fill fys/taus for a fresh pool of base points."""
    n = ys.shape[0]
    for i in prange(n):
        r, fy = afn_first_return(ys[i], a, invb, y_lo, y_hi, max_iter)
        if r < 0:
            taus[i] = -1.0
        else:
            fys[i] = fy
            taus[i] = c_roof * r


@njit(cache=True)
def afn_inverse_first_return(lo, hi, v, a, invb, y_lo, y_hi, max_iter):
    """Solve F(x) = v on [lo, hi] where F (the first-return map) is monotone.

    Plain bisection; orientation is read off the endpoint images.
    """
    rl, fl = afn_first_return(lo, a, invb, y_lo, y_hi, max_iter)
    rh, fh = afn_first_return(hi, a, invb, y_lo, y_hi, max_iter)
    increasing = fh >= fl
    x_lo = lo
    x_hi = hi
    for _ in range(200):
        mid = 0.5 * (x_lo + x_hi)
        if mid <= x_lo or mid >= x_hi:
            break
        rm, fm = afn_first_return(mid, a, invb, y_lo, y_hi, max_iter)
        if (fm < v) == increasing:
            x_lo = mid
        else:
            x_hi = mid
    return 0.5 * (x_lo + x_hi)


@njit(cache=True)
def gm_chain(z0, cyl_lo, cyl_hi, sigma, a, invb, y_lo, y_hi, max_iter,
             n, burn, restarts):
    """G-orbit of the reinduced scheme; returns (points, sigmas, resets).

    Gap landings snap to the nearest cylinder; censored excursions restart
    from the companion pool.  Both count as resets.
    """
    zs = np.empty(n)
    sigs = np.empty(n, np.int64)
    resets = 0
    ridx = 1
    ncyl = cyl_lo.shape[0]
    z = z0
    k = 0
    count = 0
    while count < n:
        i = np.searchsorted(cyl_lo, z, side="right") - 1
        if i < 0 or z > cyl_hi[i] + 1e-12:
            resets += 1
            lo_gap = cyl_hi[i] if i >= 0 else cyl_lo[0]
            hi_gap = cyl_lo[i + 1] if i + 1 < ncyl else cyl_hi[ncyl - 1]
            if i < 0 or (i + 1 < ncyl and hi_gap - z < z - lo_gap):
                i = min(i + 1, ncyl - 1)
                z = cyl_lo[i] + 1e-9 * (cyl_hi[i] - cyl_lo[i])
            else:
                z = cyl_hi[i] - 1e-9 * (cyl_hi[i] - cyl_lo[i])
        if k >= burn:
            zs[count] = z
            sigs[count] = sigma[i]
            count += 1
        k += 1
        ok = True
        for _ in range(sigma[i]):
            r, z = afn_first_return(z, a, invb, y_lo, y_hi, max_iter)
            if r < 0:
                ok = False
                break
        if not ok:
            resets += 1
            z = restarts[ridx % restarts.shape[0]]
            ridx += 1
    return zs, sigs, resets


@njit(cache=True)
def afn_lap_points(zs, ells, a, invb, y_lo, y_hi, max_iter):
    """f^... images F^ell(z) per sample (ell counted in F-steps)."""
    n = zs.shape[0]
    out = np.empty(n)
    for i in range(n):
        z = zs[i]
        good = True
        for _ in range(ells[i]):
            r, z = afn_first_return(z, a, invb, y_lo, y_hi, max_iter)
            if r < 0:
                good = False
                break
        out[i] = z if good else -1.0
    return out


@njit(cache=True)
def logistic_orbit(x0, ce, n):
    xs = np.empty(n + 1)
    xs[0] = x0
    x = x0
    for k in range(n):
        x = ce * x * (1.0 - x)
        xs[k + 1] = x
    return xs
