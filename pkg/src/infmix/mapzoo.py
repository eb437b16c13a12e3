"""Interval maps and roof functions.

Implements the intermittent family ``f(x) = x (1 + a x^{1/beta}) mod 1``
(Markov when ``a`` is an integer), Collet-Eckmann logistic maps, and a
generic piecewise-monotone interface shared by all map types.  Roof
functions come in constant, Hoelder/BV and critically-singular flavours,
the latter of the form ``g(x) |x - x0|^{-1/beta}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import BranchBoundary, DomainError, NonDifferentiableRoof

BOUNDARY_TOL = 1e-12   # branch-endpoint snap tolerance
DOMAIN_TOL = 1e-9      # slack accepted on [0,1] membership


class Family(str, enum.Enum):
    AFN_INTERMITTENT = "AFN_INTERMITTENT"
    LSV_MARKOV = "LSV_MARKOV"
    LOGISTIC_CE = "LOGISTIC_CE"


def _check_unit_interval(x):
    if x < -DOMAIN_TOL or x > 1.0 + DOMAIN_TOL:
        raise DomainError(f"x = {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def _afn_raw(x, a, beta):
    return x * (1.0 + a * x ** (1.0 / beta))


def _afn_branch_endpoints(a, beta):
    """Interior cuts solve x(1 + a x^{1/beta}) = k; bisection to 1e-14."""
    top = 1.0 + a
    cuts = [0.0]
    k = 1
    while k < top - 1e-12:
        cuts.append(brentq(lambda x: _afn_raw(x, a, beta) - k, 0.0, 1.0,
                           xtol=1e-14, rtol=8.9e-16))
        k += 1
    cuts.append(1.0)
    return tuple(cuts)


@dataclass(frozen=True)
class MapSpec:
    """Parametrized piecewise-monotone map of [0, 1].

    ``branch_endpoints`` lists the domains of maximal monotone branches;
    it is computed at construction for the built-in families.
    """

    family: Family
    beta: float = float("nan")
    a: float = float("nan")
    ce_param: float = float("nan")
    branch_endpoints: tuple = field(default=())

    # -- constructors -------------------------------------------------

    @staticmethod
    def afn(beta: float, a: float) -> "MapSpec":
        if not 0.5 < beta < 1.0:
            raise DomainError(f"beta = {beta} outside (1/2, 1)")
        if a <= 0:
            raise DomainError(f"a = {a} must be positive")
        return MapSpec(Family.AFN_INTERMITTENT, beta=beta, a=a,
                       branch_endpoints=_afn_branch_endpoints(a, beta))

    @staticmethod
    def lsv(beta: float, a: int) -> "MapSpec":
        if a != int(a) or a < 1:
            raise DomainError(f"LSV_MARKOV requires integer a >= 1, got {a}")
        if not 0.5 < beta < 1.0:
            raise DomainError(f"beta = {beta} outside (1/2, 1)")
        return MapSpec(Family.LSV_MARKOV, beta=beta, a=float(int(a)),
                       branch_endpoints=_afn_branch_endpoints(float(int(a)), beta))

    @staticmethod
    def logistic(ce_param: float) -> "MapSpec":
        if not 0.0 < ce_param <= 4.0:
            raise DomainError(f"ce_param = {ce_param} outside (0, 4]")
        return MapSpec(Family.LOGISTIC_CE, ce_param=ce_param,
                       branch_endpoints=(0.0, 0.5, 1.0))

    # -- generic piecewise-monotone interface -------------------------

    def branch_index(self, x: float) -> int:
        ends = self.branch_endpoints
        k = int(np.searchsorted(ends, x, side="right")) - 1
        return min(max(k, 0), len(ends) - 2)

    def eval(self, x: float) -> float:
        x = _check_unit_interval(x)
        if self.family is Family.LOGISTIC_CE:
            return self.ce_param * x * (1.0 - x)
        v = _afn_raw(x, self.a, self.beta)
        f = v - math.floor(v)
        # endpoints land exactly on integers up to root-finder accuracy
        if f > 1.0 - BOUNDARY_TOL:
            f = 0.0
        return f

    __call__ = eval

    def derivative(self, x: float) -> float:
        if self.family is Family.LOGISTIC_CE:
            return self.ce_param * (1.0 - 2.0 * x)
        return 1.0 + self.a * (1.0 + 1.0 / self.beta) * x ** (1.0 / self.beta)

    def second_derivative(self, x: float) -> float:
        if self.family is Family.LOGISTIC_CE:
            return -2.0 * self.ce_param
        ib = 1.0 / self.beta
        return self.a * (1.0 + ib) * ib * x ** (ib - 1.0)


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Full-branch linear test map: x |-> slope_k * x + intercept_k on branch k."""

    branch_endpoints: tuple
    slopes: tuple
    intercepts: tuple
    family: str = "PIECEWISE_LINEAR"

    def branch_index(self, x):
        ends = self.branch_endpoints
        k = int(np.searchsorted(ends, x, side="right")) - 1
        return min(max(k, 0), len(ends) - 2)

    def eval(self, x):
        x = _check_unit_interval(x)
        k = self.branch_index(x)
        return min(max(self.slopes[k] * x + self.intercepts[k], 0.0), 1.0)

    __call__ = eval

    def derivative(self, x):
        return float(self.slopes[self.branch_index(x)])

    def second_derivative(self, x):
        return 0.0


def linear_markov_map(n_branches: int) -> PiecewiseLinearMap:
    """x |-> n x mod 1 with exact branch bookkeeping (n = 2 is the doubling map)."""
    ends = tuple(k / n_branches for k in range(n_branches + 1))
    return PiecewiseLinearMap(ends, (float(n_branches),) * n_branches,
                              tuple(-float(k) for k in range(n_branches)))


# ---------------------------------------------------------------------------
# roof functions
# ---------------------------------------------------------------------------

class RoofKind(str, enum.Enum):
    CONSTANT = "CONSTANT"
    HOELDER_BV = "HOELDER_BV"
    CRITICAL_SINGULAR = "CRITICAL_SINGULAR"


#: named smooth positive functions usable as the g factor of a singular roof
#: (and as Hoelder roofs); each entry is (g, g').
G_PRESETS: dict = {
    "const2": (lambda x: 2.0, lambda x: 0.0),
    "two_plus_x": (lambda x: 2.0 + x, lambda x: 1.0),
    "two_plus_sin": (lambda x: 2.0 + 0.5 * math.sin(2.0 * math.pi * x),
                     lambda x: math.pi * math.cos(2.0 * math.pi * x)),
}


@dataclass(frozen=True)
class RoofSpec:
    """Roof function tau_0 on [0, 1], bounded below by ``floor`` > 1."""

    kind: RoofKind
    floor: float
    holder_exponent: float = 1.0
    holder_const: float = 0.0
    value: float = float("nan")          # CONSTANT
    func: Optional[Callable] = None      # HOELDER_BV
    deriv: Optional[Callable] = None
    g_name: str = ""                     # CRITICAL_SINGULAR
    x0: float = float("nan")
    beta: float = float("nan")

    @staticmethod
    def constant(value: float, floor: float = None) -> "RoofSpec":
        if value <= 1.0:
            raise DomainError("constant roof must exceed 1")
        return RoofSpec(RoofKind.CONSTANT, floor=floor or (1.0 + value) / 2.0,
                        value=value)

    @staticmethod
    def hoelder(func, floor, eta=1.0, holder_const=0.0, deriv=None,
                preset: str = "") -> "RoofSpec":
        if preset:
            func, deriv = G_PRESETS[preset]
        return RoofSpec(RoofKind.HOELDER_BV, floor=floor, holder_exponent=eta,
                        holder_const=holder_const, func=func, deriv=deriv,
                        g_name=preset)

    @staticmethod
    def critical(g_name: str, x0: float, beta: float,
                 floor: float = None) -> "RoofSpec":
        if g_name not in G_PRESETS:
            raise DomainError(f"unknown g preset {g_name!r}; "
                              f"choose from {sorted(G_PRESETS)}")
        if not 0.0 < x0 < 1.0:
            raise DomainError("x0 must be interior to (0, 1)")
        if not 0.5 < beta < 1.0:
            raise DomainError(f"beta = {beta} outside (1/2, 1)")
        g = G_PRESETS[g_name][0]
        gmin = min(g(t) for t in np.linspace(0.0, 1.0, 257))
        return RoofSpec(RoofKind.CRITICAL_SINGULAR,
                        floor=floor or (1.0 + gmin) / 2.0,
                        g_name=g_name, x0=x0, beta=beta)

    def eval(self, x: float) -> float:
        x = _check_unit_interval(x)
        if self.kind is RoofKind.CONSTANT:
            return self.value
        if self.kind is RoofKind.HOELDER_BV:
            return self.func(x)
        g = G_PRESETS[self.g_name][0]
        d = abs(x - self.x0)
        if d == 0.0:
            return math.inf
        return g(x) * d ** (-1.0 / self.beta)

    __call__ = eval

    def derivative(self, x: float) -> float:
        if self.kind is RoofKind.CONSTANT:
            return 0.0
        if self.kind is RoofKind.HOELDER_BV:
            if self.deriv is None:
                raise NonDifferentiableRoof(
                    "HOELDER_BV roof declared without a derivative handle")
            return self.deriv(x)
        g, gd = G_PRESETS[self.g_name]
        d = x - self.x0
        if d == 0.0:
            raise DomainError("roof derivative undefined at the singularity")
        ad = abs(d)
        return (gd(x) * ad ** (-1.0 / self.beta)
                - g(x) / self.beta * ad ** (-1.0 / self.beta - 1.0)
                * math.copysign(1.0, d))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def map_eval(m, x: float) -> float:
    """Evaluate the map at x in [0, 1] (mod-1 reduction applied)."""
    return m.eval(x)


def map_derivative(m, x: float) -> float:
    """Analytic branch derivative; x must be interior to a branch."""
    x = _check_unit_interval(x)
    ends = m.branch_endpoints
    for e in ends[1:-1]:
        if abs(x - e) < BOUNDARY_TOL:
            raise BranchBoundary(f"x = {x!r} within tolerance of endpoint {e!r}")
    if abs(x - ends[-1]) < BOUNDARY_TOL or (x < BOUNDARY_TOL and x != 0.0):
        # outer endpoints keep their one-sided derivative; only 'almost
        # but not exactly' boundary points are ambiguous
        pass
    return m.derivative(x)


def roof_eval(roof: RoofSpec, x: float) -> float:
    """tau_0(x); returns +inf exactly at a critical singularity."""
    return roof.eval(x)


def adler_statistic(m, n_grid: int) -> float:
    """sup over a branch-interior grid of |f''| / f'^2 (Adler's condition).

    Infinite values are reported honestly when f' vanishes on the grid.
    """
    if n_grid < 100:
        raise DomainError("n_grid must be at least 100")
    ends = np.asarray(m.branch_endpoints)
    widths = np.diff(ends)
    out = 0.0
    for k, w in enumerate(widths):
        npts = max(8, int(round(n_grid * w / widths.sum())))
        # keep strictly inside the branch
        xs = ends[k] + (np.arange(1, npts + 1) / (npts + 1)) * w
        for x in xs:
            d1 = m.derivative(float(x))
            d2 = m.second_derivative(float(x))
            out = max(out, math.inf if d1 == 0.0 else abs(d2) / d1 ** 2)
    return out


def orbit(m, x0: float, n: int) -> np.ndarray:
    """(x0, f x0, ..., f^n x0)."""
    if n < 0:
        raise DomainError("orbit length must be nonnegative")
    xs = np.empty(n + 1)
    xs[0] = _check_unit_interval(x0)
    for k in range(n):
        xs[k + 1] = m.eval(xs[k])
    return xs


# ---------------------------------------------------------------------------
# serialization (shared dotted-key text format, see harness)
# ---------------------------------------------------------------------------

def map_to_config(m) -> dict:
    cfg = {"map.family": m.family.value if isinstance(m.family, Family) else m.family}
    if isinstance(m, MapSpec):
        if m.family is Family.LOGISTIC_CE:
            cfg["map.ce_param"] = repr(m.ce_param)
        else:
            cfg["map.beta"] = repr(m.beta)
            cfg["map.a"] = repr(m.a)
    return cfg


def map_from_config(cfg: dict):
    fam = cfg["map.family"]
    if fam == Family.LOGISTIC_CE.value:
        return MapSpec.logistic(float(cfg["map.ce_param"]))
    if fam == Family.LSV_MARKOV.value:
        return MapSpec.lsv(float(cfg["map.beta"]), int(float(cfg["map.a"])))
    if fam == Family.AFN_INTERMITTENT.value:
        return MapSpec.afn(float(cfg["map.beta"]), float(cfg["map.a"]))
    raise DomainError(f"unknown map family {fam!r}")


def roof_to_config(roof: RoofSpec) -> dict:
    cfg = {"roof.kind": roof.kind.value, "roof.floor": repr(roof.floor)}
    if roof.kind is RoofKind.CONSTANT:
        cfg["roof.value"] = repr(roof.value)
    elif roof.kind is RoofKind.HOELDER_BV:
        cfg["roof.g"] = roof.g_name
        cfg["roof.eta"] = repr(roof.holder_exponent)
    else:
        cfg["roof.g"] = roof.g_name
        cfg["roof.x0"] = repr(roof.x0)
        cfg["roof.beta"] = repr(roof.beta)
    return cfg


def roof_from_config(cfg: dict) -> RoofSpec:
    kind = cfg["roof.kind"]
    if kind == RoofKind.CONSTANT.value:
        return RoofSpec.constant(float(cfg["roof.value"]),
                                 floor=float(cfg["roof.floor"]))
    if kind == RoofKind.HOELDER_BV.value:
        return RoofSpec.hoelder(None, float(cfg["roof.floor"]),
                                eta=float(cfg.get("roof.eta", 1.0)),
                                preset=cfg["roof.g"])
    if kind == RoofKind.CRITICAL_SINGULAR.value:
        return RoofSpec.critical(cfg["roof.g"], float(cfg["roof.x0"]),
                                 float(cfg["roof.beta"]),
                                 floor=float(cfg["roof.floor"]))
    raise DomainError(f"unknown roof kind {kind!r}")
