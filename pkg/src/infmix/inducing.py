"""First-return inducing, reinduced Gibbs-Markov schemes, and tail-law fits.

The induced system is F = f^r on a reference interval Y with roof
tau(y) = sum_{j<r} tau_0(f^j y).  ``build_gm_scheme`` produces the
full-branch scheme G = F^sigma on Z = Y, either exactly (Markov bases)
or by breadth-first refinement of F-cylinders until each image covers Z
up to a declared defect.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import _kernels as K
from .errors import (CoverageFailure, DepthExceeded, DomainError,
                     InsufficientTail, MaxIterExceeded)
from .mapzoo import Family, MapSpec, RoofKind, RoofSpec, _afn_raw

DEFAULT_MAX_ITER = 10 ** 7
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class InducedSystem:
    """First-return system (Y, r, F, tau) over a base map and roof."""

    base: object
    roof0: RoofSpec
    y_lo: float
    y_hi: float
    max_iter: int = DEFAULT_MAX_ITER

    @property
    def is_afn(self) -> bool:
        fam = getattr(self.base, "family", None)
        return fam in (Family.AFN_INTERMITTENT, Family.LSV_MARKOV)

    @property
    def afn_params(self):
        return self.base.a, 1.0 / self.base.beta

    @property
    def const_roof(self) -> bool:
        return self.roof0.kind is RoofKind.CONSTANT

    def contains(self, x: float) -> bool:
        return self.y_lo - _EDGE_TOL <= x <= self.y_hi + _EDGE_TOL


def induced_system(base, roof0: RoofSpec, Y=None,
                   max_iter: int = DEFAULT_MAX_ITER) -> InducedSystem:
    """Y defaults to the domain of the rightmost branch of the base map."""
    if Y is None:
        ends = base.branch_endpoints
        Y = (ends[-2], ends[-1])
    y_lo, y_hi = float(Y[0]), float(Y[1])
    if not 0.0 <= y_lo < y_hi <= 1.0:
        raise DomainError(f"Y = {Y!r} is not a subinterval of [0, 1]")
    return InducedSystem(base, roof0, y_lo, y_hi, int(max_iter))


# ---------------------------------------------------------------------------
# first return and induced roof
# ---------------------------------------------------------------------------

def first_return(sys: InducedSystem, x: float):
    """(r, F x) with r = min{n >= 1 : f^n x in Y}."""
    if not sys.contains(x):
        raise DomainError(f"x = {x!r} not in Y = [{sys.y_lo}, {sys.y_hi}]")
    if sys.is_afn:
        a, invb = sys.afn_params
        r, fx = K.afn_first_return(x, a, invb, sys.y_lo, sys.y_hi, sys.max_iter)
        if r < 0:
            raise MaxIterExceeded(sys.max_iter)
        return int(r), float(fx)
    f = sys.base
    for k in range(1, sys.max_iter + 1):
        x = f.eval(x)
        if sys.y_lo - _EDGE_TOL <= x <= sys.y_hi + _EDGE_TOL:
            return k, x
    raise MaxIterExceeded(sys.max_iter)


def induced_roof(sys: InducedSystem, x: float) -> float:
    """tau(x): Birkhoff sum of tau_0 along the excursion from x back to Y."""
    if not sys.contains(x):
        raise DomainError(f"x = {x!r} not in Y")
    if sys.const_roof:
        r, _ = first_return(sys, x)
        return sys.roof0.value * r
    f = sys.base
    total = sys.roof0.eval(x)
    for _ in range(1, sys.max_iter + 1):
        x = f.eval(x)
        if sys.y_lo - _EDGE_TOL <= x <= sys.y_hi + _EDGE_TOL:
            return total
        total += sys.roof0.eval(x)
    raise MaxIterExceeded(sys.max_iter)


def _F_pow(sys: InducedSystem, x: float, k: int) -> float:
    for _ in range(k):
        _, x = first_return(sys, x)
    return x


# ---------------------------------------------------------------------------
# stationary sampling
# ---------------------------------------------------------------------------

def stationary_sample(sys: InducedSystem, n: int, burn_in: int, seed: int,
                      full_output: bool = False):
    """n successive F-return points of one long f-orbit (deterministic in seed).

    Censored excursions (> max_iter f-steps) restart from a companion pool
    of uniform points and are counted.  With ``full_output`` the return
    times and the censoring count come along.
    """
    if n < 1:
        raise DomainError("n must be positive")
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(sys.y_lo, sys.y_hi)
    restarts = rng.uniform(sys.y_lo, sys.y_hi, size=256)
    if sys.is_afn:
        a, invb = sys.afn_params
        ys, rs, censored = K.afn_collect_returns(
            x0, a, invb, sys.y_lo, sys.y_hi, n, burn_in, sys.max_iter, restarts)
    else:
        ys, rs, censored = _collect_returns_py(sys, x0, n, burn_in, restarts)
    if full_output:
        return ys, rs, int(censored)
    return ys


def _collect_returns_py(sys, x0, n, burn, restarts):
    ys = np.empty(n)
    rs = np.empty(n, np.int64)
    censored = 0
    ridx = 0
    x = x0
    k = 0
    count = 0
    while count < n:
        try:
            r, fx = first_return(sys, x)
        except MaxIterExceeded:
            censored += 1
            x = restarts[ridx % len(restarts)]
            ridx += 1
            continue
        if k >= burn:
            ys[count] = x
            rs[count] = r
            count += 1
        k += 1
        x = fx
    return ys, rs, censored


def roof_samples(sys: InducedSystem, n: int, burn_in: int, seed: int):
    """(tau samples at stationary points, censoring count)."""
    ys, rs, censored = stationary_sample(sys, n, burn_in, seed, full_output=True)
    if sys.const_roof:
        return sys.roof0.value * rs.astype(float), censored
    taus = np.array([induced_roof(sys, y) for y in ys])
    return taus, censored


# ---------------------------------------------------------------------------
# tail fits
# ---------------------------------------------------------------------------

def tail_fit(samples, t_min: float, t_max: float):
    """Least squares of log empirical survival against log t on [t_min, t_max].

    Returns (beta_hat, c_hat, stderr) where beta_hat = -slope and
    c_hat = exp(intercept); stderr is the regression error of the slope.
    """
    samples = np.sort(np.asarray(samples, dtype=float))
    n = samples.size
    if n < 10_000:
        raise InsufficientTail(f"need at least 1e4 samples, got {n}")
    n_over = n - np.searchsorted(samples, t_min, side="right")
    if n_over < 100:
        raise InsufficientTail(f"only {n_over} samples exceed t_min = {t_min}")
    if not t_min < t_max:
        raise DomainError("t_min must be below t_max")
    ts = np.geomspace(t_min, t_max, 120)
    surv = (n - np.searchsorted(samples, ts, side="right")) / n
    keep = surv > 0
    if keep.sum() < 4:
        raise InsufficientTail("survival vanishes inside the fit window")
    x = np.log(ts[keep])
    y = np.log(surv[keep])
    (slope, intercept), cov = np.polyfit(x, y, 1, cov=True)
    return -float(slope), float(np.exp(intercept)), float(np.sqrt(cov[0, 0]))


def sigma_tail(scheme, samples):
    """Exponential-tail fit of sigma: log survival ~ -d n.  Returns (d_hat, r2)."""
    samples = np.asarray(samples)
    if samples.size < 10_000:
        raise InsufficientTail(f"need at least 1e4 sigma samples, got {samples.size}")
    smax = int(samples.max())
    ns = np.arange(1, smax)
    if ns.size == 0:
        return math.inf, math.nan
    surv = np.array([(samples > m).mean() for m in ns])
    keep = surv > 0
    if keep.sum() < 2:
        return math.inf, math.nan
    x = ns[keep].astype(float)
    y = np.log(surv[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = ((y - y.mean()) ** 2).sum()
    r2 = 1.0 - (resid ** 2).sum() / ss_tot if ss_tot > 0 else math.nan
    return -float(slope), float(r2)


# ---------------------------------------------------------------------------
# Gibbs-Markov schemes
# ---------------------------------------------------------------------------

@dataclass
class GMScheme:
    """Full-branch scheme G = F^sigma on Z with roof phi = tau_sigma.

    Cylinders are stored as sorted disjoint intervals; ``defect`` is the
    relative Lebesgue shortfall of each cylinder's G-image against Z
    (exactly zero in MARKOV_EXACT mode).
    """

    sys: InducedSystem
    z_lo: float
    z_hi: float
    cyl_lo: np.ndarray
    cyl_hi: np.ndarray
    sigma: np.ndarray
    defect: np.ndarray
    unaccepted_mass: float
    eta: float
    mode: str
    _phi_inf: np.ndarray = field(default=None, repr=False)
    _kde: object = field(default=None, repr=False)

    @property
    def alpha(self):
        return list(zip(self.cyl_lo.tolist(), self.cyl_hi.tolist()))

    @property
    def n_cylinders(self) -> int:
        return len(self.cyl_lo)

    def locate(self, z: float) -> int:
        """Cylinder index containing z, or -1 if z falls in an unaccepted gap."""
        i = int(np.searchsorted(self.cyl_lo, z, side="right")) - 1
        if i >= 0 and z <= self.cyl_hi[i] + _EDGE_TOL:
            return i
        return -1

    def sigma_of(self, z: float) -> int:
        i = self.locate(z)
        if i < 0:
            raise DomainError(f"z = {z!r} lies in an unaccepted gap")
        return int(self.sigma[i])

    def G(self, z: float) -> float:
        return _F_pow(self.sys, z, self.sigma_of(z))

    def phi(self, z: float) -> float:
        """phi(z) = sum_{j < sigma(z)} tau(F^j z)."""
        total = 0.0
        for _ in range(self.sigma_of(z)):
            total += induced_roof(self.sys, z)
            _, z = first_return(self.sys, z)
        return total

    def G_with_derivative(self, z: float):
        """(G z, |G'(z)|) with the derivative chained through every f-step."""
        f = self.sys.base
        deriv = 1.0
        x = z
        for _ in range(self.sigma_of(z)):
            r, _ = first_return(self.sys, x)
            for _ in range(r):
                deriv *= f.derivative(x)
                x = f.eval(x)
        return x, abs(deriv)

    def inverse_branch(self, i: int, v: float) -> float:
        """z in cylinder i with G(z) = v (bisection; G is monotone per cylinder)."""
        lo, hi = float(self.cyl_lo[i]), float(self.cyl_hi[i])
        k = int(self.sigma[i])
        glo, ghi = _F_pow(self.sys, lo, k), _F_pow(self.sys, hi, k)
        increasing = ghi >= glo
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if (_F_pow(self.sys, mid, k) < v) == increasing:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def phi_inf(self, i: int) -> float:
        """Estimated infimum of phi over cylinder i (small interior grid, cached)."""
        if self._phi_inf is None:
            self._phi_inf = np.full(self.n_cylinders, np.nan)
        if math.isnan(self._phi_inf[i]):
            lo, hi = self.cyl_lo[i], self.cyl_hi[i]
            zs = lo + (hi - lo) * np.array([0.05, 0.3, 0.5, 0.7, 0.95])
            self._phi_inf[i] = min(self.phi(float(z)) for z in zs)
        return float(self._phi_inf[i])

    # -- sampling and the measure Jacobian ----------------------------

    def sample_mu_z(self, n: int, burn_in: int, seed: int):
        """(points, sigmas, resets): the G-orbit chain targeting mu_Z.

        Orbit points falling in unaccepted gaps are snapped to the nearest
        cylinder and counted as resets.
        """
        rng = np.random.default_rng(seed)
        weights = (self.cyl_hi - self.cyl_lo)
        weights = weights / weights.sum()
        starts = rng.choice(self.n_cylinders, size=64, p=weights)
        restarts = np.array([
            self.cyl_lo[i] + rng.uniform(0.05, 0.95) * (self.cyl_hi[i] - self.cyl_lo[i])
            for i in starts])
        if self.sys.is_afn:
            a, invb = self.sys.afn_params
            zs, sigs, resets = _gm_chain_afn(
                restarts[0], self.cyl_lo, self.cyl_hi, self.sigma,
                a, invb, self.sys.y_lo, self.sys.y_hi, self.sys.max_iter,
                n, burn_in, restarts)
            return zs, sigs, int(resets)
        return self._sample_mu_z_py(restarts, n, burn_in)

    def _sample_mu_z_py(self, restarts, n, burn):
        zs = np.empty(n)
        sigs = np.empty(n, np.int64)
        resets = 0
        ridx = 1
        z = restarts[0]
        k = 0
        count = 0
        while count < n:
            i = self.locate(z)
            if i < 0:
                resets += 1
                z = _snap_to_cylinders(z, self.cyl_lo, self.cyl_hi)
                i = self.locate(z)
            if k >= burn:
                zs[count] = z
                sigs[count] = self.sigma[i]
                count += 1
            k += 1
            try:
                z = _F_pow(self.sys, z, int(self.sigma[i]))
            except MaxIterExceeded:
                resets += 1
                z = restarts[ridx % len(restarts)]
                ridx += 1
        return zs, sigs, resets

    def xi(self, z: float, kde=None) -> float:
        """Measure Jacobian d(mu|Z) / d(mu|Z o G), kernel-density estimated."""
        kde = kde or self._density()
        gz, dg = self.G_with_derivative(z)
        return float(kde(z)[0] / (kde(gz)[0] * dg))

    def _density(self):
        if self._kde is None:
            from scipy.stats import gaussian_kde
            pts = stationary_sample(self.sys, 60_000, 500, seed=20_240_601)
            self._kde = gaussian_kde(pts)
        return self._kde

    # -- persistence ---------------------------------------------------

    def to_text(self, path):
        lines = [f"# gm-scheme mode={self.mode} z=[{self.z_lo!r},{self.z_hi!r}] "
                 f"eta={self.eta!r} unaccepted={self.unaccepted_mass!r}",
                 "# lo hi sigma defect"]
        for lo, hi, s, d in zip(self.cyl_lo, self.cyl_hi, self.sigma, self.defect):
            lines.append(f"{lo!r} {hi!r} {int(s)} {d!r}")
        Path(path).write_text("\n".join(lines) + "\n")
        return path


def _snap_to_cylinders(z, cyl_lo, cyl_hi):
    i = int(np.searchsorted(cyl_lo, z, side="right")) - 1
    cands = []
    if i >= 0:
        cands.append(cyl_hi[i] - 1e-9 * (cyl_hi[i] - cyl_lo[i]))
    if i + 1 < len(cyl_lo):
        cands.append(cyl_lo[i + 1] + 1e-9 * (cyl_hi[i + 1] - cyl_lo[i + 1]))
    return min(cands, key=lambda c: abs(c - z))


def _gm_chain_afn(z0, cyl_lo, cyl_hi, sigma, a, invb, y_lo, y_hi, max_iter,
                  n, burn, restarts):
    return K.gm_chain(z0, cyl_lo, cyl_hi, sigma.astype(np.int64), a, invb,
                      y_lo, y_hi, max_iter, n, burn, restarts)


# -- construction -----------------------------------------------------------

def build_gm_scheme(sys: InducedSystem, mode: str, depth: int,
                    coverage_tol: float, mass_budget: float = 2e-3,
                    max_cylinders: int = 200_000) -> GMScheme:
    """Build the reinduced scheme; see the class docstring for the contract.

    MARKOV_EXACT enumerates exact first-return cylinders (Markov bases
    only, sigma = 1); REINDUCE refines F-cylinders breadth-first until
    each accepted image covers Z within ``coverage_tol`` (relative
    Lebesgue defect), stopping at ``depth`` F-steps.
    """
    if depth < 1:
        raise DepthExceeded(f"depth = {depth} leaves no admissible cylinders")
    eta = sys.roof0.holder_exponent
    if mode == "MARKOV_EXACT":
        return _build_markov_exact(sys, depth, mass_budget, max_cylinders, eta)
    if mode == "REINDUCE":
        return _build_reinduce(sys, depth, coverage_tol, mass_budget,
                               max_cylinders, eta)
    raise DomainError(f"unknown scheme mode {mode!r}")


def _is_full_branch_markov(m) -> bool:
    ends = m.branch_endpoints
    for k in range(len(ends) - 1):
        lo = m.eval(ends[k] + 1e-13)
        hi = m.eval(ends[k + 1] - 1e-13)
        if min(lo, hi) > 1e-9 or max(lo, hi) < 1.0 - 1e-9:
            return False
    return True


def _build_markov_exact(sys, depth, mass_budget, max_cyl, eta):
    base = sys.base
    fam = getattr(base, "family", None)
    if fam == Family.LSV_MARKOV or (fam == Family.AFN_INTERMITTENT
                                    and base.a == int(base.a)):
        atlas, lost = _afn_return_atlas(sys, mass_budget, max_cyl,
                                        need_images=False)
    elif _is_full_branch_markov(base) and sys.y_lo == 0.0 and sys.y_hi == 1.0:
        ends = base.branch_endpoints
        atlas = [(ends[k], ends[k + 1], 1, 0.0, 1.0)
                 for k in range(len(ends) - 1)]
        lost = 0.0
    else:
        raise DomainError("MARKOV_EXACT requires a Markov base "
                          "(integer a, or a full-branch Markov map on Y = [0,1])")
    width = sys.y_hi - sys.y_lo
    if lost > mass_budget * width:
        raise CoverageFailure(
            f"unaccepted mass {lost / width:.2e} exceeds budget {mass_budget:.1e}")
    atlas.sort(key=lambda c: c[0])
    n = len(atlas)
    return GMScheme(
        sys=sys, z_lo=sys.y_lo, z_hi=sys.y_hi,
        cyl_lo=np.array([c[0] for c in atlas]),
        cyl_hi=np.array([c[1] for c in atlas]),
        sigma=np.ones(n, dtype=np.int64),
        defect=np.zeros(n),
        unaccepted_mass=lost / width, eta=eta, mode="MARKOV_EXACT")


def _afn_inverse_branch(base, j, v):
    """Preimage in branch j of v under f (AFN family): raw(x) = v + j."""
    ends = base.branch_endpoints
    lo, hi = ends[j], ends[j + 1]
    a, beta = base.a, base.beta
    fn = lambda x: _afn_raw(x, a, beta) - (v + j)
    flo, fhi = fn(lo), fn(hi)
    if flo > 0.0 or fhi < 0.0:
        return None
    return brentq(fn, lo, hi, xtol=1e-15, rtol=8.9e-16)


def _afn_return_atlas(sys, mass_budget, max_cyl, need_images,
                      floor_frac=1e-9):
    """First-return cylinders of Y for the AFN family, fattest first.

    Words run over the non-Y branches (all full for this family); the
    final pullback into Y clips by the image of f|_Y, which is where the
    nonMarkov case loses full branches.  Returns (cylinders, lost_mass)
    with cylinders = (lo, hi, r, img_lo, img_hi).
    """
    base = sys.base
    ends = base.branch_endpoints
    n_br = len(ends) - 1
    afrac = (1.0 + base.a) % 1.0
    if afrac == 0.0:
        afrac = 1.0                      # integer a: f|_Y is onto [0,1]
    y_lo, y_hi = sys.y_lo, sys.y_hi
    width = y_hi - y_lo
    floor = floor_frac * width
    a, invb = sys.afn_params

    def pull_to_Y(dlo, dhi):
        """Cylinder {y in Y : f y in [dlo, dhi]} (clip by the f|_Y image)."""
        dlo, dhi = max(dlo, 0.0), min(dhi, afrac)
        if dhi - dlo <= 0.0:
            return None
        lo = _afn_inverse_branch(base, n_br - 1, dlo)
        hi = _afn_inverse_branch(base, n_br - 1, dhi)
        if lo is None or hi is None:
            return None
        return (lo, hi) if lo <= hi else (hi, lo)

    out = []
    lost = 0.0
    # heap entries: (-D_length, tiebreak, D_lo, D_hi, word_length)
    # D is the nested pullback of Y through non-Y branches, inside [0,1].
    heap = [(-(y_hi - y_lo), 0, y_lo, y_hi, 0)]
    tie = 1
    covered = 0.0
    while heap and len(out) < max_cyl:
        negl, _, dlo, dhi, m = heapq.heappop(heap)
        cyl = pull_to_Y(dlo, dhi)
        if cyl is not None and cyl[1] - cyl[0] > floor:
            r = m + 1
            if need_images:
                _, img_a = K.afn_first_return(cyl[0] + 1e-15, a, invb, y_lo,
                                              y_hi, sys.max_iter)
                _, img_b = K.afn_first_return(cyl[1] - 1e-15, a, invb, y_lo,
                                              y_hi, sys.max_iter)
                img_lo, img_hi = min(img_a, img_b), max(img_a, img_b)
            else:
                img_lo, img_hi = y_lo, y_hi
            out.append((cyl[0], cyl[1], r, img_lo, img_hi))
            covered += cyl[1] - cyl[0]
        elif cyl is not None:
            lost += cyl[1] - cyl[0]
        if width - covered - lost < 0.25 * mass_budget * width:
            break
        for j in range(n_br - 1):
            plo = _afn_inverse_branch(base, j, dlo)
            phi_ = _afn_inverse_branch(base, j, dhi)
            if plo is None or phi_ is None:
                continue
            qlo, qhi = min(plo, phi_), max(plo, phi_)
            if qhi - qlo < 1e-16:
                continue
            heapq.heappush(heap, (-(qhi - qlo), tie, qlo, qhi, m + 1))
            tie += 1
    lost = width - covered
    return out, lost


def _build_reinduce(sys, depth, coverage_tol, mass_budget, max_cyl, eta):
    if not sys.is_afn:
        raise DomainError("REINDUCE is implemented for the AFN family")
    a, invb = sys.afn_params
    y_lo, y_hi = sys.y_lo, sys.y_hi
    width = y_hi - y_lo
    atlas, atlas_lost = _afn_return_atlas(sys, 0.25 * mass_budget,
                                          max_cyl, need_images=True)
    atlas.sort(key=lambda c: c[0])
    br_lo = np.array([c[0] for c in atlas])
    br_hi = np.array([c[1] for c in atlas])

    def F(x):
        r, fx = K.afn_first_return(x, a, invb, y_lo, y_hi, sys.max_iter)
        return fx

    accepted = []          # (lo, hi, sigma, defect)
    unacc = atlas_lost
    # nodes: (-mass, tiebreak, lo, hi, img_lo, img_hi, sigma)
    heap = []
    tie = 0
    for (blo, bhi, r, ilo, ihi) in atlas:
        heap.append((-(bhi - blo), tie, blo, bhi, ilo, ihi, 1))
        tie += 1
    heapq.heapify(heap)
    pops = 0
    node_floor = 1e-10 * width
    while heap and pops < 40 * max_cyl and len(accepted) < max_cyl:
        negm, _, lo, hi, ilo, ihi, sig = heapq.heappop(heap)
        pops += 1
        defect = 1.0 - (ihi - ilo) / width
        if defect <= coverage_tol:
            accepted.append((lo, hi, sig, max(defect, 0.0)))
            continue
        if sig >= depth:
            unacc += hi - lo
            continue
        # refine: split the image interval by the F-branch atlas
        child_mass = 0.0
        j0 = max(int(np.searchsorted(br_hi, ilo, side="left")), 0)
        for j in range(j0, len(atlas)):
            blo, bhi = br_lo[j], br_hi[j]
            if blo >= ihi:
                break
            jlo, jhi = max(blo, ilo), min(bhi, ihi)
            if jhi - jlo <= 0.0:
                continue
            clo = K.afn_inverse_first_return(lo, hi, jlo, a, invb, y_lo, y_hi,
                                             sys.max_iter)
            chi = K.afn_inverse_first_return(lo, hi, jhi, a, invb, y_lo, y_hi,
                                             sys.max_iter)
            clo, chi = min(clo, chi), max(clo, chi)
            if chi - clo < node_floor:
                continue
            va, vb = F(jlo + 1e-15 * width), F(jhi - 1e-15 * width)
            heapq.heappush(
                heap, (-(chi - clo), tie, clo, chi, min(va, vb), max(va, vb),
                       sig + 1))
            tie += 1
            child_mass += chi - clo
        unacc += max(0.0, (hi - lo) - child_mass)
    for (negm, _, lo, hi, *_rest) in heap:
        unacc += hi - lo
    acc_mass = sum(hi - lo for lo, hi, _, _ in accepted)
    if acc_mass < (1.0 - mass_budget) * width:
        raise CoverageFailure(
            f"accepted mass {acc_mass / width:.4f} below budget "
            f"1 - {mass_budget:.1e} (unaccepted {unacc / width:.2e})")
    accepted.sort(key=lambda c: c[0])
    return GMScheme(
        sys=sys, z_lo=y_lo, z_hi=y_hi,
        cyl_lo=np.array([c[0] for c in accepted]),
        cyl_hi=np.array([c[1] for c in accepted]),
        sigma=np.array([c[2] for c in accepted], dtype=np.int64),
        defect=np.array([c[3] for c in accepted]),
        unaccepted_mass=1.0 - acc_mass / width, eta=eta, mode="REINDUCE")


# ---------------------------------------------------------------------------
# sample persistence (single-column CSV + JSON sidecar)
# ---------------------------------------------------------------------------

def save_samples(path, samples, meta: dict):
    path = Path(path)
    with path.open("w") as fh:
        fh.write("value\n")
        for v in np.asarray(samples).ravel():
            fh.write(f"{v!r}\n")
    sidecar = path.with_suffix(path.suffix + ".json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True))
    return path


def load_samples(path):
    path = Path(path)
    vals = np.loadtxt(path, skiprows=1)
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    return vals, meta
