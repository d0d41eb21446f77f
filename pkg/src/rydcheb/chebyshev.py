"""Chebyshev grid, barycentric interpolation, spectral differentiation, quadrature.

The radial grid maps the k_max+1 Chebyshev points of the second kind onto
[0, r_max],

    r_k = r_max * (1 - cos(pi k / k_max)) / 2,    k = 0..k_max,

ascending in r and clustered at both ends.  Nodal values define a degree
k_max polynomial interpolant evaluated through the numerically stable
barycentric form with the constant-free weights

    w_k = (-1)**k * (1/2 at the two endpoints, 1 otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    k_max: int
    nodes: np.ndarray
    bary_weights: np.ndarray
    quad_weights: np.ndarray


@dataclass(frozen=True)
class Interpolant:
    """Nodal values of a function on a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.values) != self.grid.k_max + 1:
            raise DomainError(
                f"need {self.grid.k_max + 1} nodal values, got {len(self.values)}")

    def __call__(self, r):
        return interpolate(self, r)


def build_grid(r_max: float, k_max: int) -> RadialGrid:
    """Chebyshev grid on [0, r_max] with barycentric and Clenshaw-Curtis weights."""
    if not r_max > 0:
        raise DomainError(f"r_max must be > 0, got {r_max}")
    if k_max < 2:
        raise DomainError(f"k_max must be >= 2, got {k_max}")
    k = np.arange(k_max + 1)
    # sin^2 form of (1 - cos)/2: exact endpoints, no cancellation
    nodes = r_max * np.sin(0.5 * np.pi * k / k_max) ** 2
    w = np.where((k == 0) | (k == k_max), 0.5, 1.0) * (-1.0) ** k
    return RadialGrid(
        r_max=float(r_max),
        k_max=int(k_max),
        nodes=nodes,
        bary_weights=w,
        quad_weights=_clenshaw_curtis_weights(k_max) * (r_max / 2.0),
    )


def _clenshaw_curtis_weights(n: int) -> np.ndarray:
    """Clenshaw-Curtis weights for n+1 Chebyshev points on [-1, 1] (sum = 2)."""
    theta = np.pi * np.arange(n + 1) / n
    w = np.empty(n + 1)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for j in range(1, n // 2):
            v -= 2.0 * np.cos(2 * j * theta[1:-1]) / (4 * j**2 - 1)
        v -= np.cos(n * theta[1:-1]) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for j in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * j * theta[1:-1]) / (4 * j**2 - 1)
    w[1:-1] = 2.0 * v / n
    return w


def interpolate(f: Interpolant, r):
    """Evaluate the barycentric interpolant at r (scalar or array) in [0, r_max].

    Queries within 1e-14 * r_max of a node return the nodal value exactly,
    which removes the 0/0 hazard of the barycentric quotient.
    """
    grid = f.grid
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    rq = np.atleast_1d(r_arr)
    if np.any(rq < 0.0) or np.any(rq > grid.r_max):
        raise DomainError("interpolation query outside [0, r_max]")

    diff = rq[:, None] - grid.nodes[None, :]
    near = np.abs(diff) < 1e-14 * grid.r_max
    hit = near.any(axis=1)
    # nodes are distinct, so at most one hit per query
    diff[near] = 1.0
    ratios = grid.bary_weights[None, :] / diff
    out = (ratios @ f.values) / ratios.sum(axis=1)
    if hit.any():
        idx = near.argmax(axis=1)
        out[hit] = f.values[idx[hit]]
    return float(out[0]) if scalar else out


def diff_matrix(grid: RadialGrid) -> np.ndarray:
    """First-derivative collocation matrix D1; use D1 @ D1 for the second derivative.

    Off-diagonal entries follow the barycentric form (w_j/w_i)/(r_i - r_j);
    the diagonal is the negated row sum, which enforces exact annihilation
    of constants.
    """
    r = grid.nodes
    w = grid.bary_weights
    dr = r[:, None] - r[None, :]
    np.fill_diagonal(dr, 1.0)
    d = (w[None, :] / w[:, None]) / dr
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def quad_integrate(f: Interpolant) -> float:
    """Clenshaw-Curtis integral of the interpolant over [0, r_max].

    Exact for polynomials of degree <= k_max, spectrally accurate for
    smooth integrands.
    """
    return float(f.grid.quad_weights @ f.values)
