import numpy as np
import pytest

from rydcheb.chebyshev import Interpolant, build_grid, quad_integrate
from rydcheb.eigensolver import (BoundState, SolverConfig, assemble,
                                 count_nodes, extract_defect,
                                 physicality_filter, solve_state, solve_window)
from rydcheb.errors import DomainError, InsufficientDomain
from rydcheb.potential import StateLabel


def test_assemble_shape_and_determinism(hydrogen):
    grid = build_grid(40.0, 120)
    st = StateLabel(2, 0, 0.5)
    h1 = assemble(grid, st, hydrogen)
    h2 = assemble(grid, st, hydrogen)
    assert h1.shape == (119, 119)
    assert np.array_equal(h1, h2)


def test_assemble_reproduces_coulomb_ground_state(hydrogen):
    # U = r e^-r is the exact l=0 ground state at E = -1
    grid = build_grid(40.0, 400)
    h = assemble(grid, StateLabel(1, 0, 0.5), hydrogen)
    u = grid.nodes[1:-1] * np.exp(-grid.nodes[1:-1])
    residual = h @ u - (-1.0) * u
    assert np.abs(residual).max() < 1e-6


def test_hydrogen_window_spectrum(hydrogen):
    # single grid resolves n = 1..10; the acceptance-grade extent keeps the
    # n = 10 level clear of the Dirichlet wall
    grid = build_grid(1.5 * 200.0 * 1.2, 600)
    h = assemble(grid, StateLabel(2, 0, 0.5), hydrogen)
    pairs = solve_window(h, (-1.1, -1.0 / 10.5**2))
    assert pairs == sorted(pairs, key=lambda p: p[0])
    for n in range(1, 11):
        best = min((e for e, _ in pairs), key=lambda e: abs(e + 1.0 / n**2))
        assert abs(best + 1.0 / n**2) * n**2 < 1e-6


def test_hydrogen_l1_has_no_n1_state(hydrogen):
    grid = build_grid(150.0, 500)
    h = assemble(grid, StateLabel(2, 1, 1.5), hydrogen)
    pairs = solve_window(h, (-1.1, -0.02))
    assert min(e for e, _ in pairs) == pytest.approx(-0.25, rel=1e-8)


def test_solve_window_residuals(hydrogen):
    grid = build_grid(150.0, 400)
    h = assemble(grid, StateLabel(2, 0, 0.5), hydrogen)
    for energy, vec in solve_window(h, (-1.1, -0.02)):
        res = np.linalg.norm(h @ vec - energy * vec) / np.linalg.norm(vec)
        assert res < 1e-8


def test_rubidium_window_has_single_level(rb):
    st = StateLabel(15, 0, 0.5)
    target = -1.0 / (15 - 3.13) ** 2
    grid = build_grid(450.0, 600)
    h = assemble(grid, st, rb)
    # half a level spacing on either side
    lo = -1.0 / (15 - 3.13 - 0.5) ** 2
    hi = -1.0 / (15 - 3.13 + 0.5) ** 2
    pairs = solve_window(h, (lo, hi))
    assert len(pairs) == 1
    assert pairs[0][0] == pytest.approx(target, rel=1e-3)


def test_physicality_filter(hydrogen):
    st = StateLabel(5, 0, 0.5)
    grid = build_grid(150.0, 400)
    bound = solve_state(st, hydrogen, SolverConfig(k_max=400),
                        defect_guess=0.0, grid=grid)
    r_plus = bound.turning.r_plus
    assert physicality_filter(bound.u_values[1:-1], grid, r_plus)

    rng = np.random.default_rng(23)
    for _ in range(100):
        vec = rng.standard_normal(grid.k_max - 1)
        assert not physicality_filter(vec, grid, r_plus)

    with pytest.raises(InsufficientDomain):
        physicality_filter(bound.u_values[1:-1], grid, r_plus=140.0)


def test_extract_defect():
    assert extract_defect(-1.0 / (15 - 3.132) ** 2, 15) == pytest.approx(3.132, abs=1e-12)
    for n in (2, 5, 12):
        assert extract_defect(-1.0 / n**2, n) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        extract_defect(-1.5, 3)
    with pytest.raises(DomainError):
        extract_defect(0.1, 3)


def test_bound_state_contract(rb):
    st = StateLabel(15, 2, 2.5)
    bound = solve_state(st, rb, SolverConfig(k_max=600))
    assert isinstance(bound, BoundState)
    assert -1.0 < bound.energy < 0.0
    assert bound.u_values[0] == 0.0 and bound.u_values[-1] == 0.0
    norm = quad_integrate(Interpolant(bound.grid, bound.u_values**2))
    assert norm == pytest.approx(1.0, abs=1e-8)
    assert bound.node_count == st.n - st.l - 1
    assert bound.quantum_defect == pytest.approx(
        st.n - 1.0 / np.sqrt(-bound.energy), abs=1e-14)
    assert bound.residual < 1e-8
    assert bound.sampling_margin > 1.0
    # sign convention: positive on the first interior antinode
    first_peak = np.abs(bound.u_values).max() * 0.01
    k = 1
    while not (abs(bound.u_values[k]) > first_peak
               and abs(bound.u_values[k + 1]) < abs(bound.u_values[k])):
        k += 1
    assert bound.u_values[k] > 0


def test_node_count_law_hydrogen(hydrogen):
    grid = build_grid(360.0, 600)
    for l in (0, 1, 2):
        for n in range(l + 1, 11, 3):
            bound = solve_state(StateLabel(n, l, l + 0.5), hydrogen,
                                SolverConfig(k_max=600), defect_guess=0.0,
                                grid=grid)
            assert bound.node_count == n - l - 1


def test_count_nodes_threshold():
    grid = build_grid(10.0, 50)
    u = np.sin(grid.nodes)               # ~3 interior zeros below r=10
    assert count_nodes(u, grid.nodes, 10.0) == 3
    u_noise = u + 1e-12 * np.cos(50 * grid.nodes)
    assert count_nodes(u_noise, grid.nodes, 10.0) == 3


def test_grid_refinement_stability(hydrogen, rb):
    st = StateLabel(5, 0, 0.5)
    e_coarse = solve_state(st, hydrogen, SolverConfig(k_max=300),
                           defect_guess=0.0, grid=build_grid(150.0, 300)).energy
    e_fine = solve_state(st, hydrogen, SolverConfig(k_max=600),
                         defect_guess=0.0, grid=build_grid(150.0, 600)).energy
    assert abs(e_fine - e_coarse) < 1e-8

    st = StateLabel(15, 0, 0.5)
    e_coarse = solve_state(st, rb, SolverConfig(k_max=700)).energy
    e_fine = solve_state(st, rb, SolverConfig(k_max=1400)).energy
    assert abs(e_fine - e_coarse) < 1e-7


def test_r_max_sufficiency(rb):
    st = StateLabel(15, 0, 0.5)
    d_a = solve_state(st, rb, SolverConfig(k_max=700, r_max_factor=1.5)).quantum_defect
    d_b = solve_state(st, rb, SolverConfig(k_max=700, r_max_factor=2.0)).quantum_defect
    assert abs(d_a - d_b) < 1e-4


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(r_max_factor=0.9)
    with pytest.raises(DomainError):
        SolverConfig(r_max_factor=3.5)
    with pytest.raises(DomainError):
        SolverConfig(tail_threshold=0.5)
