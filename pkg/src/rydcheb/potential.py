"""Effective core potential, spin-orbit modification, and classical-region analysis.

Everything is expressed in Rydberg units (see constants module).  The
effective potential is

    V_eff(r; l) = -2 Z_eff(r; l)/r - alpha_c (1 - exp(-(r/r_c)^6)) / r^4

with the l-dependent effective charge

    Z_eff(r; l) = 1 + (Z-1) exp(-a1 r) - r exp(-a2 r) (a3*a3_scale + a4 r).

The spin-orbit modification adds, outside the per-channel cutoff r_so(l),

    V_SO(r; j, l) = alpha^2 (1/r) (dV_eff/dr) [j(j+1) - l(l+1) - 3/4] / 2.

The radial prefactor alpha^2 is twice the bare Pauli value; together with
the cutoff radii it forms a phenomenological model whose overall strength
is calibrated against the measured rubidium p-state fine splitting.
Channels without a configured cutoff (r_so == 0) are left unmodified, and
the term applies only to l = 1, 2, 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import FINE_STRUCTURE
from .errors import DomainError, NoBoundRegion
from .params import PotentialParams

# scan resolution used when locating sign changes of the Q function
_CORE_SCAN_POINTS = 2000
_BISECT_REL_TOL = 1e-12
# bound energies live in (-1, 0); the tiny slack below -1 admits the
# hydrogen ground level, which lands on the boundary up to roundoff
ENERGY_FLOOR = -1.0 - 1e-9


@dataclass(frozen=True)
class StateLabel:
    """Bound-state quantum numbers (n, l, j) with j = l +- 1/2."""

    n: int
    l: int
    j: float

    def __post_init__(self):
        if self.n < 1 or self.l < 0 or self.l >= self.n:
            raise DomainError(f"need 0 <= l < n, got n={self.n}, l={self.l}")
        if abs(abs(self.j - self.l) - 0.5) > 1e-12 or self.j <= 0:
            raise DomainError(f"need j = l +- 1/2 > 0, got l={self.l}, j={self.j}")


@dataclass(frozen=True)
class SecondRegion:
    """Inner interval with Q < 0, disjoint from the outer classical region.

    q_mid / q_mid_tenth record Q at the interval midpoint for the requested
    energy and for one tenth of it: the interval sits so deep in the core
    that both are expected to agree to well below a percent.
    """

    r_lo: float
    r_hi: float
    q_mid: float
    q_mid_tenth: float

    @property
    def energy_sensitivity(self) -> float:
        return abs(self.q_mid_tenth - self.q_mid) / abs(self.q_mid)


@dataclass(frozen=True)
class TurningPointReport:
    r_minus: float
    r_plus: float
    second_region: SecondRegion | None = None


def effective_charge(r, l: int, params: PotentialParams):
    """Z_eff(r; l); equals Z at r = 0 and tends to 1 far outside the core."""
    r = np.asarray(r, dtype=float)
    ch = params.channel(l)
    a3 = ch.a3 * ch.a3_scale
    return (1.0 + (params.Z - 1) * np.exp(-r * ch.a1)
            - r * np.exp(-r * ch.a2) * (a3 + r * ch.a4))


def _charge_derivative(r, l: int, params: PotentialParams):
    ch = params.channel(l)
    a3 = ch.a3 * ch.a3_scale
    return (-(params.Z - 1) * ch.a1 * np.exp(-r * ch.a1)
            - np.exp(-r * ch.a2) * (a3 + 2.0 * r * ch.a4)
            + ch.a2 * r * np.exp(-r * ch.a2) * (a3 + r * ch.a4))


def _check_positive_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("potential requires r > 0")
    return r


def effective_potential(r, l: int, params: PotentialParams):
    """V_eff(r; l) in Ry; finite for every r > 0."""
    r = _check_positive_radius(r)
    ch = params.channel(l)
    # -expm1 keeps the polarization factor accurate where (r/r_c)^6 underflows
    pol = -np.expm1(-((r / ch.r_c) ** 6))
    return -2.0 * effective_charge(r, l, params) / r - params.alpha_c * pol / r**4


def effective_potential_derivative(r, l: int, params: PotentialParams):
    """Analytic dV_eff/dr, needed by the spin-orbit term and residual checks."""
    r = _check_positive_radius(r)
    ch = params.channel(l)
    x6 = (r / ch.r_c) ** 6
    pol = -np.expm1(-x6)
    dpol = 4.0 * params.alpha_c * pol / r**5 - 6.0 * params.alpha_c * np.exp(-x6) * x6 / r**5
    return (-2.0 * _charge_derivative(r, l, params) / r
            + 2.0 * effective_charge(r, l, params) / r**2 + dpol)


def effective_potential_second_derivative(r, l: int, params: PotentialParams):
    """Analytic d2V_eff/dr2 (closed form, no finite differences)."""
    r = _check_positive_radius(r)
    ch = params.channel(l)
    a1, a2, a4 = ch.a1, ch.a2, ch.a4
    a3 = ch.a3 * ch.a3_scale
    z = effective_charge(r, l, params)
    zp = _charge_derivative(r, l, params)
    zpp = (a1**2 * (params.Z - 1) * np.exp(-a1 * r)
           + np.exp(-a2 * r) * (2.0 * a2 * a3 + 4.0 * a2 * a4 * r - 2.0 * a4
                                - a2**2 * r * (a3 + a4 * r)))
    x6 = (r / ch.r_c) ** 6
    pol = -np.expm1(-x6)
    ppp = params.alpha_c * (np.exp(-x6) * (18.0 * x6 + 36.0 * x6**2) - 20.0 * pol) / r**6
    return -2.0 * zpp / r + 4.0 * zp / r**2 - 4.0 * z / r**3 + ppp


def _ls_half(l: int, j: float) -> float:
    # <L.S> for spin 1/2
    return (j * (j + 1) - l * (l + 1) - 0.75) / 2.0


def spin_orbit_term(r, l: int, j: float, params: PotentialParams):
    """Bare spin-orbit energy without the core cutoff applied."""
    r = _check_positive_radius(r)
    return (FINE_STRUCTURE**2 * effective_potential_derivative(r, l, params) / r
            * _ls_half(l, j))


def modified_potential(r, l: int, j: float, params: PotentialParams):
    """V_eff plus the spin-orbit term outside r_so(l).

    The term is active only for l = 1..3 on channels with a configured
    cutoff; in particular l = 0, l >= 4, and all-zero reference sets (like
    hydrogen) reduce exactly to the effective potential.
    """
    r = _check_positive_radius(r)
    v = effective_potential(r, l, params)
    r_so = params.channel(l).r_so
    if 1 <= l <= 3 and r_so > 0.0:
        v = np.where(r > r_so, v + spin_orbit_term(r, l, j, params), v)
    return v if v.ndim else float(v)


def spin_orbit_jump(l: int, j: float, params: PotentialParams) -> float:
    """Magnitude of the potential step where the spin-orbit term switches on.

    The cutoff construction is intentionally piecewise; the step at r_so is
    part of the model, and callers may want to log it.
    """
    r_so = params.channel(l).r_so
    if not (1 <= l <= 3) or r_so == 0.0:
        return 0.0
    return abs(float(spin_orbit_term(r_so * (1 + 1e-12), l, j, params)))


def q_function(r, state: StateLabel, energy: float, params: PotentialParams,
               langer: bool = False):
    """Q(r) = centrifugal + V_mod - E; the classical region is where Q < 0.

    With ``langer`` set, the centrifugal coefficient l(l+1) is replaced by
    (l + 1/2)^2.
    """
    r = _check_positive_radius(r)
    cf = (state.l + 0.5) ** 2 if langer else state.l * (state.l + 1)
    out = cf / r**2 + modified_potential(r, state.l, state.j, params) - energy
    return out if np.ndim(out) else float(out)


def q_derivative(r, state: StateLabel, params: PotentialParams,
                 langer: bool = False):
    """Analytic dQ/dr; piecewise like the potential itself (step at r_so)."""
    r = _check_positive_radius(r)
    l, j = state.l, state.j
    cf = (l + 0.5) ** 2 if langer else l * (l + 1)
    dv = effective_potential_derivative(r, l, params)
    r_so = params.channel(l).r_so
    if 1 <= l <= 3 and r_so > 0.0:
        vpp = effective_potential_second_derivative(r, l, params)
        dso = FINE_STRUCTURE**2 * _ls_half(l, j) * (vpp / r - dv / r**2)
        dv = np.where(r > r_so, dv + dso, dv)
    out = -2.0 * cf / r**3 + dv
    return out if np.ndim(out) else float(out)


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _BISECT_REL_TOL * max(abs(lo), abs(hi)):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(f, grid: np.ndarray) -> list[float]:
    vals = f(grid)
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    return [_bisect(f, grid[i], grid[i + 1]) for i in idx]


def _hydrogenic_outer_estimate(l: int, energy: float) -> float:
    if l == 0:
        return 2.0 / -energy
    disc = 1.0 + (l + 0.5) ** 2 * energy
    if disc < 0.0:
        # no outer Coulombic well at this energy; the scan may still find a
        # classical region carved out by the core
        return 2.0 / -energy
    return (1.0 + math.sqrt(disc)) / -energy


def find_turning_points(state: StateLabel, energy: float, params: PotentialParams,
                        langer: bool = False) -> TurningPointReport:
    """Locate the classical region boundaries of Q at the given energy.

    Returns the outer classical interval (r_minus, r_plus), refined to a
    relative tolerance of 1e-12, plus any additional Q < 0 interval found
    below r_minus.  Without the Langer term, s-states have no inner turning
    point and r_minus = 0.
    """
    if not ENERGY_FLOOR < energy < 0.0:
        raise DomainError(f"energy must lie in (-1, 0) Ry, got {energy}")

    def q(r):
        return q_function(r, state, energy, params, langer)

    r_est = _hydrogenic_outer_estimate(state.l, energy)
    grid = np.unique(np.concatenate([
        np.geomspace(1e-4, max(2e-4, 0.2 * r_est), _CORE_SCAN_POINTS),
        np.linspace(max(2e-4, 0.2 * r_est), 3.0 * r_est, _CORE_SCAN_POINTS),
    ]))
    roots = _scan_roots(q, grid)

    unbounded_origin = state.l == 0 and not langer  # classical region reaches r = 0
    if unbounded_origin:
        roots.insert(0, 0.0)
    if len(roots) < 2:
        if np.all(q(grid) >= 0):
            raise NoBoundRegion(f"Q >= 0 everywhere for {state} at E={energy}")
        raise NoBoundRegion(
            f"could not bracket a classical region for {state} at E={energy}")

    r_minus, r_plus = roots[-2], roots[-1]
    second = None
    if len(roots) >= 4:
        second = _second_region_report(roots[0], roots[1], state, energy, params)
    elif not unbounded_origin:
        inner = _scan_second_region(state, energy, params, r_minus, langer)
        if inner is not None:
            second = _second_region_report(inner[0], inner[1], state, energy, params)
    return TurningPointReport(r_minus=r_minus, r_plus=r_plus, second_region=second)


def _scan_second_region(state, energy, params, r_minus, langer=False):
    """Log-spaced scan for a Q < 0 interval strictly inside (0, r_minus)."""
    if r_minus <= 2e-4:
        return None

    def q(r):
        return q_function(r, state, energy, params, langer)

    grid = np.geomspace(1e-4, r_minus * (1 - 1e-9), _CORE_SCAN_POINTS)
    roots = _scan_roots(q, grid)
    if len(roots) < 2:
        return None
    return roots[0], roots[1]


def _second_region_report(r_lo, r_hi, state, energy, params) -> SecondRegion:
    mid = 0.5 * (r_lo + r_hi)
    return SecondRegion(
        r_lo=r_lo,
        r_hi=r_hi,
        q_mid=float(q_function(mid, state, energy, params)),
        q_mid_tenth=float(q_function(mid, state, energy / 10.0, params)),
    )


def detect_second_region(state: StateLabel, energy: float,
                         params: PotentialParams) -> SecondRegion | None:
    """Innermost Q < 0 interval disjoint from the outer classical region, if any.

    Uses the plain (non-Langer) Q.  Present only for the heavier alkalis
    with l = 3; absent for hydrogen-like potentials at every l.
    """
    if state.l < 1:
        raise DomainError("second-region detection applies to l >= 1")
    report = find_turning_points(state, energy, params, langer=False)
    return report.second_region
