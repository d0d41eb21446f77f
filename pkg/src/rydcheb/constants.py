"""Unit conventions and pinned physical constants.

Convention used throughout the package:

* lengths in Bohr radii ``a_B``,
* energies in Rydberg units (hydrogen ground state at -1),
* probability densities in ``a_B**-3``.

With the Coulomb potential written as ``V(r) = -2/r`` the hydrogen spectrum
is ``E_n = -1/n**2``, which the validation suite checks explicitly.

SI constants are pinned at fixed precision (CODATA 2018) so that laboratory
-unit outputs are bit-reproducible.
"""

# fine-structure constant (dimensionless)
FINE_STRUCTURE = 7.2973525693e-3

# SI values used to convert the hyperfine contact energy to laboratory units
MU_0 = 4.0e-7 * 3.141592653589793  # vacuum permeability, N/A^2
MU_B = 9.2740100783e-24            # Bohr magneton, J/T
PLANCK_H = 6.62607015e-34          # Planck constant, J s
BOHR_RADIUS_M = 5.29177210903e-11  # Bohr radius, m

# 1 Rydberg expressed as a frequency (c * R_infinity), Hz
RYDBERG_HZ = 3.2898419602508e15
