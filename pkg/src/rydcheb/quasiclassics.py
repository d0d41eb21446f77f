"""Uniform quasiclassical wavefunctions and quantization.

Two complementary uniform approximations to the radial eigenfunction
U(r) = r R(r) at a bound energy E:

* around the outer turning point r_plus, the Airy-based form

      U_L(r) = C [ (3/2) S_L(r) ]^(1/6) [ sgn(r - r_plus) Q_L(r) ]^(-1/4)
               Ai( sgn(r - r_plus) [ (3/2) S_L(r) ]^(2/3) ),

  where S_L is the action of the Langer-corrected momentum sqrt(-Q_L),
  integrated away from r_plus to either side, and

      C = (-1)^(n-l-1) sqrt( 2 pi / integral dr / sqrt(-Q_L) );

* around the origin for s-states, the Bessel-based form

      U_F(r) = C_F sqrt(S_F(r)) (-Q(r))^(-1/4) J_1(S_F(r)),

  with the plain-momentum action S_F(r) integrated up from r = 0 and
  C_F = (-1)^(n-1) C / sqrt(2).

Requiring both to describe the same s-state fixes the quantization
condition: the full plain action from 0 to r_plus equals n pi, which
determines the energy and hence the quantum defect delta_0.  The same
patching gives the density at the origin analytically (Fermi-Segre form),
|psi(0)|^2 = (Z/pi) (1 - d delta_0/dn) / (n - delta_0)^3.

Action integrals are tabulated once on Chebyshev grids and evaluated
through barycentric interpolation; the stored quantity is the smooth
companion ((3/2) S)^(2/3) on a square-root-mapped grid, so the turning
point and the origin cost no accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .chebyshev import Interpolant, build_grid, interpolate
from .errors import AnomalyError, ConvergenceError, DomainError
from .params import PotentialParams
from .potential import (StateLabel, effective_potential_derivative,
                        find_turning_points, q_derivative, q_function)

# Core-phase calibration of the quasiclassical quantization.  The
# quasiclassical phase accumulates a systematic error where the core
# potential varies on the scale of the local wavelength; rescaling a3 on
# the affected channels absorbs it.  Values are fitted to the measured
# rubidium n=15 defects (s level and d centroid); the matrix eigensolver
# never uses them.  Without the rescale, the raw quantization gives e.g.
# delta_0 = 3.208 for Rb instead of the measured 3.131.
QUASICLASSICAL_A3_RESCALE: dict[str, dict[int, float]] = {
    "Rb": {0: 0.8105368516, 2: 0.9142381893},
}


def _quasiclassical_params(params: PotentialParams, l: int,
                           a3_rescale: float | None) -> PotentialParams:
    """Params with the per-channel quasiclassical a3 recalibration applied."""
    if a3_rescale is None:
        a3_rescale = QUASICLASSICAL_A3_RESCALE.get(params.element, {}).get(min(l, params.l_max), 1.0)
    if a3_rescale == 1.0:
        return params
    idx = min(l, params.l_max)
    ch = params.channels[idx]
    new = replace(ch, a3_scale=ch.a3_scale * a3_rescale)
    channels = params.channels[:idx] + (new,) + params.channels[idx + 1:]
    return replace(params, channels=channels)

_END_PANEL_ORDER = 200   # Gauss-Legendre points on singular end panels
_MID_PANEL_ORDER = 60
_ACTION_POINTS = 400     # Chebyshev points of the inner action table
_TURNING_GUARD = 1e-6    # relative band around r_plus using the analytic limit

# graded panel edges (fractions of the interval, mirrored from both ends)
_LADDER = np.array([1e-12, 1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 1e-3,
                    1e-2, 0.05, 0.15, 0.3, 0.5])


@lru_cache(maxsize=8)
def _gl(order: int):
    return np.polynomial.legendre.leggauss(order)


def _panel_plain(f, a: float, b: float, order: int) -> float:
    x, w = _gl(order)
    r = 0.5 * (b - a) * x + 0.5 * (a + b)
    return 0.5 * (b - a) * float(w @ f(r))


def _panel_sub_lo(f, a: float, b: float, order: int) -> float:
    # r = a + t^2 removes a 1/sqrt(r - a) singularity (and tames sqrt(r - a))
    x, w = _gl(order)
    tmax = math.sqrt(b - a)
    t = 0.5 * tmax * (x + 1.0)
    return 0.5 * tmax * float(w @ (2.0 * t * f(a + t * t)))


def _panel_sub_hi(f, a: float, b: float, order: int) -> float:
    x, w = _gl(order)
    tmax = math.sqrt(b - a)
    t = 0.5 * tmax * (x + 1.0)
    return 0.5 * tmax * float(w @ (2.0 * t * f(b - t * t)))


def integrate_graded(f, a: float, b: float, sub_lo: bool = False,
                     sub_hi: bool = False) -> float:
    """Integrate f over [a, b] on geometrically graded panels.

    End panels optionally use the square-root substitution, which makes
    inverse-square-root endpoint singularities exactly integrable at
    spectral accuracy.
    """
    if b <= a:
        return 0.0
    width = b - a
    fr = _LADDER
    edges = np.unique(np.concatenate([[0.0], fr, 1.0 - fr[::-1], [1.0]]))
    pts = a + width * edges
    total = 0.0
    for i in range(len(pts) - 1):
        lo, hi = pts[i], pts[i + 1]
        if hi <= lo:
            continue
        if i == 0 and sub_lo:
            total += _panel_sub_lo(f, lo, hi, _END_PANEL_ORDER)
        elif i == len(pts) - 2 and sub_hi:
            total += _panel_sub_hi(f, lo, hi, _END_PANEL_ORDER)
        else:
            total += _panel_plain(f, lo, hi, _MID_PANEL_ORDER)
    return total


@dataclass(frozen=True)
class ActionInterpolant:
    """Tabulated action S(r) of one quasiclassical branch.

    ``inner`` holds ((3/2) S)^(2/3) versus u on [0, 1] with
    r = r_lo + (r_plus - r_lo) u**2, anchored at r_plus (langer) or storing
    the complementary integral down from r_plus (fock, so that S(0) = 0
    exactly).  ``outer`` (langer only) holds the same companion of the
    outward action on [r_plus, r_hi].
    """

    branch: str
    state: StateLabel
    energy: float
    r_lo: float
    r_plus: float
    r_hi: float
    total: float                     # action over [r_lo, r_plus]
    inner: Interpolant = field(repr=False)
    outer: Interpolant | None = field(repr=False, default=None)

    def action(self, r):
        """S(r); for the fock branch S(0) = 0, for langer S(r_plus) = 0."""
        r_arr = np.asarray(r, dtype=float)
        scalar = r_arr.ndim == 0
        rq = np.atleast_1d(r_arr).copy()
        if self.branch == "fock":
            if np.any(rq < 0.0) or np.any(rq > self.r_plus):
                raise DomainError("fock action is defined on [0, r_plus]")
            out = self.total - self._inner_action(rq)
        else:
            if np.any(rq < 0.0) or np.any(rq > self.r_hi):
                raise DomainError("langer action is defined on [0, r_hi]")
            out = np.empty_like(rq)
            below = rq <= self.r_plus
            out[below] = self._inner_action(rq[below])
            if (~below).any():
                tau = interpolate(self.outer, rq[~below] - self.r_plus)
                out[~below] = (2.0 / 3.0) * np.maximum(tau, 0.0) ** 1.5
        return float(out[0]) if scalar else out

    def _inner_action(self, rq):
        u = np.sqrt(np.clip((rq - self.r_lo) / (self.r_plus - self.r_lo), 0.0, 1.0))
        tau = interpolate(self.inner, u)
        return (2.0 / 3.0) * np.maximum(tau, 0.0) ** 1.5

    def airy_argument(self, r):
        """sgn(r - r_plus) ((3/2) S)^(2/3): the smooth uniform variable."""
        r_arr = np.asarray(r, dtype=float)
        scalar = r_arr.ndim == 0
        rq = np.atleast_1d(r_arr)
        out = np.empty_like(rq)
        below = rq <= self.r_plus
        u = np.sqrt(np.clip((rq[below] - self.r_lo) / (self.r_plus - self.r_lo), 0.0, 1.0))
        out[below] = -np.maximum(interpolate(self.inner, u), 0.0)
        if (~below).any():
            out[~below] = np.maximum(interpolate(self.outer, rq[~below] - self.r_plus), 0.0)
        return float(out[0]) if scalar else out


def _tau_from_action(s):
    return (1.5 * np.maximum(s, 0.0)) ** (2.0 / 3.0)


def _accumulate_inward(f, nodes: np.ndarray) -> np.ndarray:
    """S_k = integral from nodes[k] to nodes[-1] of f, per-segment Gauss panels."""
    n = len(nodes)
    seg = np.zeros(n - 1)
    for i in range(n - 1):
        a, b = nodes[i], nodes[i + 1]
        if b <= a:
            continue
        if i == 0:
            seg[i] = _panel_sub_lo(f, a, b, _END_PANEL_ORDER)
        elif i == n - 2:
            seg[i] = _panel_sub_hi(f, a, b, _END_PANEL_ORDER)
        else:
            seg[i] = _panel_plain(f, a, b, _MID_PANEL_ORDER)
    out = np.zeros(n)
    out[:-1] = np.cumsum(seg[::-1])[::-1]
    return out


def _check_anomaly(state, energy, params, ignore_inner_region):
    if state.l < 1:
        return
    report = find_turning_points(state, energy, params, langer=False)
    if report.second_region is not None and not ignore_inner_region:
        raise AnomalyError(
            f"{state}: a second classical region "
            f"({report.second_region.r_lo:.4g}, {report.second_region.r_hi:.4g}) "
            "lies inside the core; pass ignore_inner_region=True for the "
            "plain two-turning-point treatment")


def langer_action(state: StateLabel, energy: float, params: PotentialParams,
                  r_hi: float | None = None, ignore_inner_region: bool = False,
                  points: int = _ACTION_POINTS) -> ActionInterpolant:
    """Action of the Langer-corrected momentum, anchored at r_plus.

    Inner branch integrates sqrt(-Q_L) from r down to the turning point
    region boundary r_lo (the inner Langer turning point; the table is flat
    below it).  Outer branch integrates sqrt(Q_L) outward to r_hi
    (defaults to 1.5 r_plus).
    """
    _check_anomaly(state, energy, params, ignore_inner_region)
    tp = find_turning_points(state, energy, params, langer=True)
    r_lo, r_plus = tp.r_minus, tp.r_plus
    if r_hi is None:
        r_hi = 1.5 * r_plus
    if r_hi <= r_plus:
        raise DomainError("r_hi must exceed the outer turning point")

    def momentum(r):
        return np.sqrt(np.maximum(-q_function(r, state, energy, params, langer=True), 0.0))

    u_grid = build_grid(1.0, points)
    r_nodes = r_lo + (r_plus - r_lo) * u_grid.nodes**2
    s_inner = _accumulate_inward(momentum, r_nodes)
    inner = Interpolant(u_grid, _tau_from_action(s_inner))

    def momentum_out(x):
        return np.sqrt(np.maximum(
            q_function(r_plus + x, state, energy, params, langer=True), 0.0))

    # outer table lives in the shifted variable x = r - r_plus
    out_grid = build_grid(r_hi - r_plus, max(8, points // 4))
    x_nodes = out_grid.nodes
    seg = np.zeros(len(x_nodes) - 1)
    for i in range(len(x_nodes) - 1):
        if i == 0:
            seg[i] = _panel_sub_lo(momentum_out, x_nodes[i], x_nodes[i + 1],
                                   _END_PANEL_ORDER)
        else:
            seg[i] = _panel_plain(momentum_out, x_nodes[i], x_nodes[i + 1],
                                  _MID_PANEL_ORDER)
    s_outer = np.concatenate([[0.0], np.cumsum(seg)])
    outer = Interpolant(out_grid, _tau_from_action(s_outer))

    return ActionInterpolant(
        branch="langer", state=state, energy=energy, r_lo=r_lo, r_plus=r_plus,
        r_hi=r_hi, total=float(s_inner[0]), inner=inner, outer=outer,
    )


def fock_action(state: StateLabel, energy: float, params: PotentialParams,
                points: int = _ACTION_POINTS) -> ActionInterpolant:
    """Plain-momentum action integrated up from the origin (s-states).

    Stored as the complementary integral down from r_plus so the anchor
    S(0) = 0 is exact; the small-r law S(r) -> sqrt(8 Z r) emerges from the
    square-root grid map.
    """
    if state.l != 0:
        raise DomainError("the origin-uniform construction is validated for l = 0 only")
    tp = find_turning_points(state, energy, params, langer=False)
    r_plus = tp.r_plus

    def momentum(r):
        return np.sqrt(np.maximum(-q_function(r, state, energy, params, langer=False), 0.0))

    u_grid = build_grid(1.0, points)
    r_nodes = r_plus * u_grid.nodes**2
    s_complement = _accumulate_inward(momentum, r_nodes)
    tau = _tau_from_action(s_complement)
    inner = Interpolant(u_grid, tau)
    # total goes through the same companion transform as the table, so the
    # anchor S(0) = total - complement(0) is exactly zero
    return ActionInterpolant(
        branch="fock", state=state, energy=energy, r_lo=0.0, r_plus=r_plus,
        r_hi=r_plus, total=float((2.0 / 3.0) * tau[0] ** 1.5), inner=inner,
    )


@dataclass(frozen=True)
class UniformWavefunction:
    """A normalized uniform approximant, ready for pointwise evaluation."""

    kind: str                       # "langer" | "fock"
    state: StateLabel
    energy: float
    norm_constant: float            # signed C (langer) or C_F (fock)
    action: ActionInterpolant
    params: PotentialParams


def langer_norm(state: StateLabel, energy: float, params: PotentialParams) -> float:
    """Signed normalization constant C = (-1)^(n-l-1) sqrt(2 pi / period integral).

    The period integral runs over the Langer-corrected classical region,
    whose inverse-momentum integrand has inverse-square-root singularities
    at both turning points.  Within a narrow band around each turning point
    the integrand follows the analytic linear model |dQ/dr| |r - r_t|, so
    the 1e-12 relative residue of the root refinement cannot flip its sign.
    """
    tp = find_turning_points(state, energy, params, langer=True)
    r_lo, r_hi = tp.r_minus, tp.r_plus
    # Integrate up to a small standoff from each turning point and add the
    # standoff slivers analytically from the local linear model of Q; this
    # keeps the refined-root residue (~1e-12 relative) out of the integrand.
    delta = 1e-6 * (r_hi - r_lo)
    slope_lo = abs(q_derivative(r_lo, state, params, langer=True))
    slope_hi = abs(q_derivative(r_hi, state, params, langer=True))

    def inverse_momentum(r):
        q = -np.asarray(q_function(r, state, energy, params, langer=True))
        return 1.0 / np.sqrt(np.maximum(q, 1e-300))

    period = integrate_graded(inverse_momentum, r_lo + delta, r_hi - delta)
    period += 2.0 * math.sqrt(delta / slope_lo) + 2.0 * math.sqrt(delta / slope_hi)
    sign = -1.0 if (state.n - state.l - 1) % 2 else 1.0
    return sign * math.sqrt(2.0 * math.pi / period)


def langer_uniform(state: StateLabel, energy: float, params: PotentialParams,
                   r_hi: float | None = None,
                   ignore_inner_region: bool = False) -> UniformWavefunction:
    """Build the turning-point uniform approximant at the given bound energy."""
    action = langer_action(state, energy, params, r_hi=r_hi,
                           ignore_inner_region=ignore_inner_region)
    return UniformWavefunction(
        kind="langer", state=state, energy=energy,
        norm_constant=langer_norm(state, energy, params),
        action=action, params=params,
    )


def fock_uniform(state: StateLabel, energy: float,
                 params: PotentialParams) -> UniformWavefunction:
    """Build the origin-uniform approximant (l = 0), C_F = (-1)^(n-1) C / sqrt(2)."""
    if state.l != 0:
        raise DomainError("the origin-uniform construction is validated for l = 0 only")
    c_langer = langer_norm(state, energy, params)
    sign = -1.0 if (state.n - 1) % 2 else 1.0
    return UniformWavefunction(
        kind="fock", state=state, energy=energy,
        norm_constant=sign * abs(c_langer) / math.sqrt(2.0),
        action=fock_action(state, energy, params), params=params,
    )


def _langer_q_slope_at_turning(state, energy, params, r_plus):
    # spin-orbit contribution to the slope is ~alpha^2/r^4 out here: negligible
    return (-2.0 * (state.l + 0.5) ** 2 / r_plus**3
            + float(effective_potential_derivative(r_plus, state.l, params)))


def langer_wavefunction(uniform: UniformWavefunction, r):
    """Evaluate the turning-point uniform approximant at r (scalar or array).

    Regular across r_plus by construction; inside a guard band around
    r_plus the 0/0 amplitude ratio is replaced by its analytic limit
    |dQ_L/dr(r_plus)|^(-2/3).  Below the inner boundary of the classical
    region the construction does not apply and NaN is returned.
    """
    if uniform.kind != "langer":
        raise DomainError("need a langer-kind UniformWavefunction")
    act = uniform.action
    state, energy, params = uniform.state, uniform.energy, uniform.params
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    rq = np.atleast_1d(r_arr).astype(float)
    if np.any(rq <= 0.0):
        raise DomainError("need r > 0")

    sigma = act.airy_argument(np.minimum(rq, act.r_hi))
    ql = np.asarray(q_function(rq, state, energy, params, langer=True))
    signed_q = np.sign(rq - act.r_plus) * ql
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.abs(sigma) / signed_q
    guard = np.abs(rq - act.r_plus) < _TURNING_GUARD * act.r_plus
    if guard.any():
        slope = _langer_q_slope_at_turning(state, energy, params, act.r_plus)
        ratio = np.where(guard, abs(slope) ** (-2.0 / 3.0), ratio)
    ratio = np.where(rq < act.r_lo, np.nan, ratio)

    from .specfun import airy_ai
    ai = np.array([airy_ai(s) if np.isfinite(s) else np.nan for s in sigma])
    with np.errstate(invalid="ignore"):
        out = uniform.norm_constant * ratio**0.25 * ai
    return float(out[0]) if scalar else out


def fock_wavefunction(uniform: UniformWavefunction, r):
    """Evaluate the origin-uniform approximant on 0 <= r < r_plus."""
    if uniform.kind != "fock":
        raise DomainError("need a fock-kind UniformWavefunction")
    act = uniform.action
    state, energy, params = uniform.state, uniform.energy, uniform.params
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    rq = np.atleast_1d(r_arr).astype(float)
    if np.any(rq < 0.0) or np.any(rq >= act.r_plus):
        raise DomainError("origin-uniform form is defined on 0 <= r < r_plus")

    out = np.zeros_like(rq)
    pos = rq > 0.0
    if pos.any():
        s = act.action(rq[pos])
        q = -np.asarray(q_function(rq[pos], state, energy, params, langer=False))
        from .specfun import bessel_j
        j1 = np.array([bessel_j(1, float(x)) for x in s])
        out[pos] = uniform.norm_constant * np.sqrt(s) * q**-0.25 * j1
    return float(out[0]) if scalar else out


def _plain_action_total(state, energy, params) -> float:
    tp = find_turning_points(state, energy, params, langer=False)

    def momentum(r):
        return np.sqrt(np.maximum(
            -q_function(r, state, energy, params, langer=False), 0.0))

    return integrate_graded(momentum, tp.r_minus, tp.r_plus,
                            sub_lo=tp.r_minus > 0, sub_hi=True)


def quantize_s_states(n: int, params: PotentialParams,
                      nu_bracket: tuple[float, float] | None = None,
                      a3_rescale: float | None = None) -> tuple[float, float]:
    """Solve the s-state quantization condition for (energy, delta_0).

    The full plain action from the origin to the outer turning point must
    equal n pi.  Root-finding runs on the effective quantum number
    nu = 1/sqrt(-E); the method is quantitatively reliable for n > 7.

    a3_rescale: core-phase calibration factor for a3(0); None picks the
    builtin per-element value (1 when none is known), 1.0 disables it.
    """
    params = _quasiclassical_params(params, 0, a3_rescale)
    state = StateLabel(n=n, l=0, j=0.5)
    target = n * math.pi

    def mismatch(nu):
        return _plain_action_total(state, -1.0 / nu**2, params) - target

    lo, hi = nu_bracket if nu_bracket else (max(1.02, n - 8.0), n + 0.45)
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo * f_hi > 0:
        raise ConvergenceError(
            f"quantization not bracketed for n={n}: mismatch({lo})={f_lo:.3g}, "
            f"mismatch({hi})={f_hi:.3g}")
    nu = brentq(mismatch, lo, hi, xtol=1e-12, rtol=1e-14)
    return -1.0 / nu**2, n - nu


def quantize_wkb(state: StateLabel, params: PotentialParams,
                 ignore_inner_region: bool = False,
                 a3_rescale: float | None = None) -> tuple[float, float]:
    """Two-turning-point quantization with the Langer-corrected momentum (l >= 1).

    Solves action over the outer classical region = (n - l - 1/2) pi.
    Refuses by default when a second classical region hides inside the
    core, since ignoring it is exactly what biases the result there.
    """
    if state.l < 1:
        raise DomainError("use quantize_s_states for l = 0")
    params = _quasiclassical_params(params, state.l, a3_rescale)
    n, l = state.n, state.l
    _check_anomaly(state, -1.0 / max(n - l, 1.0) ** 2, params, ignore_inner_region)
    target = (n - l - 0.5) * math.pi

    def action_at(nu):
        energy = -1.0 / nu**2
        tp = find_turning_points(state, energy, params, langer=True)

        def momentum(r):
            return np.sqrt(np.maximum(
                -q_function(r, state, energy, params, langer=True), 0.0))

        return integrate_graded(momentum, tp.r_minus, tp.r_plus,
                                sub_lo=True, sub_hi=True)

    def mismatch(nu):
        return action_at(nu) - target

    lo, hi = max(l + 0.7, n - 8.0), n + 0.45
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo * f_hi > 0:
        raise ConvergenceError(
            f"quantization not bracketed for {state}: mismatch({lo})={f_lo:.3g}, "
            f"mismatch({hi})={f_hi:.3g}")
    nu = brentq(mismatch, lo, hi, xtol=1e-12, rtol=1e-14)
    return -1.0 / nu**2, n - nu


def defect_guess_for(state: StateLabel, params: PotentialParams) -> float:
    """Cheap quasiclassical defect estimate used to seed the matrix solver."""
    try:
        if state.l == 0:
            return quantize_s_states(state.n, params)[1]
        return quantize_wkb(state, params, ignore_inner_region=True)[1]
    except (ConvergenceError, DomainError):
        return 0.0


def defect_slope(n: int, params: PotentialParams) -> float:
    """Central-difference d delta_0 / dn of the s-state quantum defect."""
    d_lo = quantize_s_states(n - 1, params)[1]
    d_hi = quantize_s_states(n + 1, params)[1]
    return 0.5 * (d_hi - d_lo)


def fermi_segre_density(n: int, delta0: float, ddelta_dn: float, Z: int) -> float:
    """|psi(0)|^2 of an s-state in a_B^-3: (Z/pi) (1 - d delta0/dn)/(n - delta0)^3."""
    if n <= delta0:
        raise DomainError(f"need n > delta0, got n={n}, delta0={delta0}")
    return Z / math.pi * (1.0 - ddelta_dn) / (n - delta0) ** 3
