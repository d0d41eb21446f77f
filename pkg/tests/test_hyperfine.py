import math

import pytest

from rydcheb.constants import BOHR_RADIUS_M, MU_0, MU_B, PLANCK_H
from rydcheb.errors import DomainError
from rydcheb.hyperfine import (HyperfineResult, doublet_splitting, hyperfine_A,
                               scaled_constant)
from rydcheb.params import get_isotope
from rydcheb.quasiclassics import defect_slope, fermi_segre_density, \
    quantize_s_states

RB87 = get_isotope("87Rb")
RB85 = get_isotope("85Rb")


def _pipeline(isotope, n, params):
    _, d0 = quantize_s_states(n, params)
    slope = defect_slope(n, params)
    psi0 = fermi_segre_density(n, d0, slope, params.Z)
    res = HyperfineResult(isotope=isotope.label, n=n, delta0=d0, psi0_sq=psi0,
                          A_over_h=hyperfine_A(isotope, psi0))
    return res


def test_scaled_constants_match_spectroscopy_scale(rb):
    res87 = _pipeline(RB87, 20, rb)
    assert scaled_constant(res87) == pytest.approx(17.223, rel=1e-3)
    res85 = _pipeline(RB85, 20, rb)
    assert scaled_constant(res85) == pytest.approx(5.082, rel=1e-3)


def test_isotope_ratio_is_g_factor_ratio():
    # only the nuclear g-factor differs between the isotopes
    psi0 = 2.5e-3
    ratio = hyperfine_A(RB85, psi0) / hyperfine_A(RB87, psi0)
    assert ratio == pytest.approx(0.00029364000 / 0.0009951414, rel=1e-12)


def test_sign_follows_nuclear_g_factor():
    a = hyperfine_A(RB87, 1e-3)
    assert a < 0.0
    res = HyperfineResult("87Rb", 20, 3.13, 1e-3, a)
    assert scaled_constant(res) > 0.0


def test_scaling_law_across_n(rb):
    a = scaled_constant(_pipeline(RB87, 20, rb))
    b = scaled_constant(_pipeline(RB87, 30, rb))
    assert abs(a - b) / a < 0.005


def test_hydrogen_like_toy_scaling():
    # delta0 = 0: A is exactly proportional to n^-3
    for n in (10, 20):
        psi0 = fermi_segre_density(n, 0.0, 0.0, 1)
        res = HyperfineResult("toy", n, 0.0, psi0, hyperfine_A(RB87, psi0))
        assert scaled_constant(res) == pytest.approx(
            abs(hyperfine_A(RB87, 1.0 / math.pi)) / 1e9, rel=1e-12)


def test_dimensional_audit():
    # SI prefactor times the closed-form density reproduces the tabulated
    # 17.22 GHz scale from constants alone
    prefactor = (2.0 / 3.0) * MU_0 * RB87.g_s * abs(RB87.g_tilde_I) * MU_B**2 \
        / (PLANCK_H * BOHR_RADIUS_M**3) * (37.0 / math.pi)
    assert prefactor / 1e9 == pytest.approx(17.223, rel=1e-3)


def test_doublet_splitting_arithmetic():
    a = 1.0e6
    # I = 3/2, j = 1/2: F = 2 sits A above the center, F = 1 sits 5A/4 below;
    # the gap is 2 A
    up = doublet_splitting(a, 1.5, 0.5, 2.0)
    dn = doublet_splitting(a, 1.5, 0.5, 1.0)
    assert up - dn == pytest.approx(2.0 * a, rel=1e-12)
    # center of gravity: sum (2F+1) dE = 0
    total = sum((2 * F + 1) * doublet_splitting(a, 1.5, 0.5, F) for F in (1.0, 2.0))
    assert total == pytest.approx(0.0, abs=1e-6)
    assert doublet_splitting(0.0, 2.5, 0.5, 3.0) == 0.0


def test_doublet_domain_errors():
    with pytest.raises(DomainError):
        doublet_splitting(1.0, 1.5, 0.5, 3.0)
    with pytest.raises(DomainError):
        doublet_splitting(1.0, 1.5, 0.5, 1.5)
    with pytest.raises(DomainError):
        hyperfine_A(RB87, -1.0)
