import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reeb_dbar import CutoffFamily, DomainError, phi, psi, rho0, support_annulus
from reeb_dbar.cutoffs import smoothstep
from reeb_dbar.properties import (check_cutoff_telescoping, check_partition_sums,
                                  check_scaling_identities)


def test_smoothstep_profile():
    assert smoothstep(0.0) == 0.0 and smoothstep(1.0) == 1.0
    assert smoothstep(0.5) == pytest.approx(0.5, abs=1e-16)
    u = np.linspace(-1, 2, 301)
    s = smoothstep(u)
    assert np.all(np.diff(s) >= 0)
    assert np.allclose(smoothstep(1 - u) + s, 1.0, atol=1e-15)


def test_family_validation():
    with pytest.raises(DomainError):
        CutoffFamily(R=1.0, eps=1.0)            # R + eps = R / lam
    with pytest.raises(DomainError):
        CutoffFamily(R_out=1.2)                 # R_out inside the plateau
    with pytest.raises(DomainError):
        CutoffFamily(R_out=2.0)                 # R_out reaches R / lam
    with pytest.raises(DomainError):
        CutoffFamily(lam=1.0)


def test_rho0_examples(family):
    assert rho0(family, 0j) == 1.0
    assert rho0(family, family.R_out + 1) == 0.0
    mid = 0.5 * (family.plateau + family.R_out)
    assert rho0(family, mid) == pytest.approx(0.5, abs=1e-15)


def test_phi_examples(family, rng):
    xi = rng.normal(size=50) + 1j * rng.normal(size=50)
    assert np.array_equal(phi(family, 0, xi), rho0(family, xi))
    assert np.array_equal(phi(family, 1, xi), phi(family, 0, 0.5 * xi))
    assert phi(family, 1, 2 * family.plateau) == 1.0
    with pytest.raises(DomainError):
        phi(family, -1, 1.0)


def test_support_annulus(family, rng):
    assert support_annulus(family) == (1.25, 3.5)
    r1, r2 = support_annulus(family)
    inner = r1 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    outer = (r2 + 10 * rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    assert np.all(psi(family, 1, inner) == 0)
    assert np.all(psi(family, 1, outer) == 0)
    with pytest.raises(DomainError):
        support_annulus(family, 2)


def test_partition_to_one(family):
    total = sum(psi(family, j, 10.0) for j in range(11))
    assert total == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=100)
@given(st.floats(0.0, 50.0), st.integers(1, 6))
def test_psi_vanishes_on_previous_disc(r, j):
    family = CutoffFamily()
    if r <= family.inner_radius(j):
        assert psi(family, j, r) == 0.0
    if r >= family.outer_radius(j):
        assert psi(family, j, r) == 0.0
    assert psi(family, j, r) >= 0.0


@pytest.mark.parametrize("fam", [CutoffFamily(), CutoffFamily(0.8, 0.2, 1.5, 0.5)])
def test_identities(fam):
    for res in (check_scaling_identities(fam), check_cutoff_telescoping(fam),
                check_partition_sums(fam)):
        assert res.passed, res
