"""Collocation Hamiltonian assembly and bound-state extraction.

The radial eigenproblem

    [-d^2/dr^2 + l(l+1)/r^2 + V_mod(r; j, l)] U(r) = E U(r)

becomes a dense (k_max-1) x (k_max-1) matrix problem once U is represented
by its values at the interior Chebyshev nodes; the Dirichlet conditions
U(0) = U(r_max) = 0 strip the first and last row and column of the squared
differentiation matrix.

Physical eigenvectors are the window -1 < E < 0 members whose tail beyond
the outer classical turning point is exponentially small; everything else
the dense solver returns is discretization debris and is filtered out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .chebyshev import Interpolant, RadialGrid, build_grid, diff_matrix, quad_integrate
from .errors import ConvergenceError, DomainError, InsufficientDomain
from .params import PotentialParams
from .potential import (ENERGY_FLOOR, StateLabel, TurningPointReport,
                        find_turning_points, modified_potential, q_function)

_RESIDUAL_TOL = 1e-8
_MAX_REFINE_ITER = 500


@dataclass(frozen=True)
class SolverConfig:
    k_max: int = 700
    r_max_factor: float = 1.5        # r_max as a multiple of the outer turning point
    energy_window: tuple[float, float] | None = None
    tail_threshold: float = 1e-6     # physicality filter tolerance

    def __post_init__(self):
        if not 1.0 < self.r_max_factor <= 3.0:
            raise DomainError(f"r_max_factor must be in (1, 3], got {self.r_max_factor}")
        if not 0.0 < self.tail_threshold < 1e-2:
            raise DomainError(f"tail_threshold must be in (0, 1e-2), got {self.tail_threshold}")


@dataclass(frozen=True)
class BoundState:
    """A physical eigenstate on its collocation grid.

    u_values holds the normalized nodal values of U(r) = r R(r) on the full
    grid (boundary zeros included), with the sign fixed so that U > 0 on the
    first interior antinode.
    """

    label: StateLabel
    energy: float
    quantum_defect: float
    grid: RadialGrid
    u_values: np.ndarray = field(repr=False)
    node_count: int
    turning: TurningPointReport
    residual: float
    sampling_margin: float
    origin_slope: float    # dU/dr at r = 0, i.e. the radial function R(0)

    @property
    def interpolant(self) -> Interpolant:
        return Interpolant(self.grid, self.u_values)


def assemble(grid: RadialGrid, state: StateLabel, params: PotentialParams) -> np.ndarray:
    """Interior-node collocation matrix -D2 + diag(centrifugal + V_mod)."""
    d2 = diff_matrix(grid)
    d2 = d2 @ d2
    ri = grid.nodes[1:-1]
    diag = state.l * (state.l + 1) / ri**2 + modified_potential(ri, state.l, state.j, params)
    if not np.all(np.isfinite(diag)):
        raise DomainError("potential not finite at an interior node")
    h = -d2[1:-1, 1:-1]
    h[np.diag_indices_from(h)] += diag
    return h


def solve_window(matrix: np.ndarray, window: tuple[float, float],
                 residual_tol: float = _RESIDUAL_TOL) -> list[tuple[float, np.ndarray]]:
    """All eigenpairs with (real) eigenvalue inside the window, ascending.

    Pairs are refined by shifted inverse iteration until the relative
    residual ||(H - E) v|| / ||v|| drops below residual_tol.
    """
    e_lo, e_hi = window
    vals, vecs = np.linalg.eig(matrix)
    scale = np.abs(vals).max()
    keep = np.abs(vals.imag) <= 1e-10 * scale
    keep &= (vals.real > e_lo) & (vals.real < e_hi)
    out = []
    for i in np.nonzero(keep)[0]:
        energy, vec = refine_eigenpair(matrix, float(vals[i].real), vecs[:, i].real,
                                       residual_tol)
        if e_lo < energy < e_hi:
            out.append((energy, vec))
    out.sort(key=lambda p: p[0])
    return out


def refine_eigenpair(matrix: np.ndarray, energy: float, vec: np.ndarray,
                     residual_tol: float = _RESIDUAL_TOL) -> tuple[float, np.ndarray]:
    """Shifted inverse iteration with factor-and-solve around the current shift."""
    v = vec / np.linalg.norm(vec)
    best = np.inf
    shift = energy
    lu = None
    for it in range(_MAX_REFINE_ITER):
        hv = matrix @ v
        energy = float(v @ hv)
        res = float(np.linalg.norm(hv - energy * v))
        best = min(best, res)
        if res < residual_tol:
            return energy, v
        if lu is None or it % 4 == 3:
            # nudge the shift off the eigenvalue so the factorization stays regular
            shift = energy * (1.0 + 1e-9) + 1e-300
            lu = scipy.linalg.lu_factor(matrix - shift * np.eye(matrix.shape[0]))
        v = scipy.linalg.lu_solve(lu, v)
        v /= np.linalg.norm(v)
    raise ConvergenceError(
        f"eigenpair refinement stalled at residual {best:.3e}", best_residual=best)


def physicality_filter(vec: np.ndarray, grid: RadialGrid, r_plus: float,
                       tail_threshold: float = 1e-6) -> bool:
    """True iff the eigenvector has decayed away at the far end of the grid.

    vec holds interior-node values.  The grid must reach past 1.2 * r_plus
    (InsufficientDomain otherwise) so that a genuinely bound state has room
    to decay; the decay itself is judged at the last interior node, right
    where the Dirichlet condition pins a physical tail to an exponentially
    small value while discretization debris stays of order one.

    On grids barely longer than the classical region even a perfect bound
    state cannot reach tail_threshold, so the threshold is floored at ten
    times the edge value a hydrogenic tail exp(-int sqrt(2/r_plus - 2/r))
    could attain; tail_threshold keeps its configured meaning whenever the
    grid leaves enough room.
    """
    tail_start = 1.2 * r_plus
    interior = grid.nodes[1:-1]
    if not (interior > tail_start).any():
        raise InsufficientDomain(
            f"grid ends at {grid.r_max}, need nodes beyond 1.2 * r_plus = {tail_start}")
    tail = interior[interior > r_plus]
    kappa = np.sqrt(np.maximum(2.0 / r_plus - 2.0 / tail, 0.0))
    feasible = math.exp(-np.trapezoid(kappa, tail)) \
        * max(kappa[-1] * (grid.r_max - tail[-1]), 1e-16)
    threshold = max(tail_threshold, 10.0 * feasible)
    edge = float(abs(vec[-1]))
    return edge < threshold * float(np.abs(vec).max())


def extract_defect(energy: float, n: int) -> float:
    """Quantum defect n - 1/sqrt(-E) of a bound energy in (-1, 0)."""
    if not ENERGY_FLOOR < energy < 0.0:
        raise DomainError(f"energy must lie in (-1, 0) Ry, got {energy}")
    return n - 1.0 / np.sqrt(-energy)


def count_nodes(u: np.ndarray, nodes: np.ndarray, r_plus: float) -> int:
    """Sign changes of U over (0, r_plus), ignoring numerically dead values."""
    mask = (nodes > 0) & (nodes < r_plus)
    vals = u[mask]
    live = np.abs(vals) > 1e-9 * np.abs(vals).max()
    signs = np.sign(vals[live])
    return int(np.count_nonzero(signs[:-1] * signs[1:] < 0))


def sampling_margin(grid: RadialGrid, state: StateLabel, energy: float,
                    params: PotentialParams) -> float:
    """Half local de Broglie wavelength over node spacing, minimized over the well.

    Values above 1 mean even the coarsest part of the grid resolves the
    oscillations of the eigenfunction.
    """
    r = grid.nodes
    mids = 0.5 * (r[1:] + r[:-1])
    ok = mids > 0
    q = np.asarray(q_function(mids[ok], state, energy, params))
    dr = (r[1:] - r[:-1])[ok]
    classical = q < 0
    if not classical.any():
        return np.inf
    half_wavelength = np.pi / np.sqrt(-q[classical])
    return float((half_wavelength / dr[classical]).min())


def default_grid(state: StateLabel, defect_guess: float,
                 config: SolverConfig) -> RadialGrid:
    """Grid reaching r_max_factor times the estimated outer turning point."""
    nu = state.n - defect_guess
    if nu <= 0:
        raise DomainError(f"defect guess {defect_guess} leaves no bound electron")
    r_plus_est = 2.0 * nu**2
    return build_grid(config.r_max_factor * r_plus_est, config.k_max)


def solve_state(state: StateLabel, params: PotentialParams,
                config: SolverConfig = SolverConfig(),
                defect_guess: float | None = None,
                grid: RadialGrid | None = None) -> BoundState:
    """Full pipeline for one (n, l, j): assemble, solve, filter, label, normalize.

    The principal quantum number is always assigned from the node count
    (n = nodes + l + 1), never from the energy window, so a poor defect
    guess cannot mislabel the state.
    """
    if defect_guess is None:
        from .quasiclassics import defect_guess_for
        defect_guess = defect_guess_for(state, params)
    nu = state.n - defect_guess
    if grid is None:
        grid = default_grid(state, defect_guess, config)
    if config.energy_window is not None:
        window = config.energy_window
    else:
        window = (-1.0 / max(nu - 1.5, 0.2) ** 2, -1.0 / (nu + 1.5) ** 2)

    h = assemble(grid, state, params)
    pairs = solve_window(h, window)

    wanted = state.n - state.l - 1
    for energy, vec in pairs:
        r_plus = find_turning_points(state, energy, params).r_plus
        try:
            if not physicality_filter(vec, grid, r_plus, config.tail_threshold):
                continue
        except InsufficientDomain:
            continue
        u = np.zeros(grid.k_max + 1)
        u[1:-1] = vec
        nodes_found = count_nodes(u, grid.nodes, r_plus)
        if nodes_found != wanted:
            continue
        return _finalize(state, energy, u, grid, params, h)
    raise ConvergenceError(
        f"no physical eigenvector with {wanted} nodes inside window {window} "
        f"for {state}; found {[round(e, 6) for e, _ in pairs]}")


def _finalize(state, energy, u, grid, params, matrix) -> BoundState:
    norm = quad_integrate(Interpolant(grid, u * u))
    u = u / np.sqrt(norm)
    # sign convention: positive first interior antinode
    peak = np.abs(u).max()
    for k in range(1, grid.k_max):
        if np.abs(u[k]) > 0.01 * peak and np.abs(u[k + 1]) < np.abs(u[k]):
            if u[k] < 0:
                u = -u
            break
    turning = find_turning_points(state, energy, params)
    hv = matrix @ u[1:-1]
    residual = float(np.linalg.norm(hv - energy * u[1:-1]) / np.linalg.norm(u[1:-1]))
    d1 = diff_matrix(grid)
    return BoundState(
        label=state,
        energy=energy,
        quantum_defect=extract_defect(energy, state.n),
        grid=grid,
        u_values=u,
        node_count=count_nodes(u, grid.nodes, turning.r_plus),
        turning=turning,
        residual=residual,
        sampling_margin=sampling_margin(grid, state, energy, params),
        origin_slope=float(d1[0] @ u),
    )
