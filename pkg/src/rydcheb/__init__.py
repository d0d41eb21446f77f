"""Bound states of alkali Rydberg atoms on a Chebyshev collocation grid,
cross-validated against uniform quasiclassical approximations."""

__version__ = "0.1.0"

from .chebyshev import Interpolant, RadialGrid, build_grid, diff_matrix, \
    interpolate, quad_integrate
from .eigensolver import BoundState, SolverConfig, assemble, extract_defect, \
    physicality_filter, solve_state, solve_window
from .errors import (AnomalyError, ConvergenceError, DomainError,
                     InsufficientDomain, NoBoundRegion, ParseError,
                     RydchebError, SchemaError)
from .hyperfine import HyperfineResult, doublet_splitting, hyperfine_A, \
    scaled_constant
from .params import (ChannelParams, IsotopeData, PotentialParams,
                     builtin_isotopes, builtin_params_path, get_isotope,
                     load_params, write_params)
from .potential import (SecondRegion, StateLabel, TurningPointReport,
                        detect_second_region, effective_charge,
                        effective_potential, effective_potential_derivative,
                        find_turning_points, modified_potential, q_function,
                        spin_orbit_jump)
from .quasiclassics import (ActionInterpolant, UniformWavefunction,
                            defect_slope, fermi_segre_density, fock_action,
                            fock_uniform, fock_wavefunction, langer_action,
                            langer_norm, langer_uniform, langer_wavefunction,
                            quantize_s_states, quantize_wkb)
from .specfun import airy_ai, bessel_j

__all__ = [name for name in dir() if not name.startswith("_")]
