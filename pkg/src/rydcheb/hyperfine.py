"""Contact hyperfine constants and doublet splittings of s-states.

The magnetic dipole (Fermi contact) constant follows from the electron
density at the nucleus,

    A/h = (2/3) mu_0 g_s g_I~ mu_B^2 |psi(0)|^2 / (a_B^3 h)   [Hz],

with |psi(0)|^2 expressed per Bohr-radius cubed.  Combined with the
Fermi-Segre form of the origin density this makes |A/h| (n - delta_0)^3
independent of n up to the small defect slope, which is the scaling law
the tables in this package report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import BOHR_RADIUS_M, MU_0, MU_B, PLANCK_H
from .errors import DomainError
from .params import IsotopeData


@dataclass(frozen=True)
class HyperfineResult:
    isotope: str
    n: int
    delta0: float
    psi0_sq: float      # a_B^-3
    A_over_h: float     # Hz, signed like g_I~

    @property
    def scaled_ghz(self) -> float:
        return scaled_constant(self)


def hyperfine_A(isotope: IsotopeData, psi0_sq: float) -> float:
    """Contact constant A/h in Hz; carries the sign of the nuclear g-factor."""
    if not psi0_sq > 0:
        raise DomainError(f"need psi0_sq > 0, got {psi0_sq}")
    return (2.0 / 3.0) * MU_0 * isotope.g_s * isotope.g_tilde_I * MU_B**2 \
        * psi0_sq / (BOHR_RADIUS_M**3 * PLANCK_H)


def scaled_constant(result: HyperfineResult) -> float:
    """|A/h| (n - delta_0)^3 in GHz (reported as a magnitude)."""
    return abs(result.A_over_h) * (result.n - result.delta0) ** 3 / 1e9


def doublet_splitting(A_over_h: float, spin: float, j: float, F: float) -> float:
    """Hyperfine level shift of the |I j F> level in Hz.

    Delta E / h = (A/h) [F(F+1) - I(I+1) - j(j+1)] / 2 for |I-j| <= F <= I+j.
    """
    if not abs(spin - j) - 1e-9 <= F <= spin + j + 1e-9:
        raise DomainError(f"F={F} outside |I-j|..I+j for I={spin}, j={j}")
    if abs((F - abs(spin - j)) % 1.0) > 1e-9:
        raise DomainError(f"F={F} not reachable from I={spin}, j={j} in integer steps")
    return A_over_h * (F * (F + 1) - spin * (spin + 1) - j * (j + 1)) / 2.0
