import numpy as np
import pytest

from reeb_dbar import DomainError, FoliationParams, Point, ResidualBundle, builtin_form, dbar_fd
from reeb_dbar.approximation import SampleGrid, fundamental_grid
from reeb_dbar.geometry import builtin_form as bf
from reeb_dbar.verify import dbar_fd_array, residual_fields, residual_report


def test_dbar_examples():
    assert abs(dbar_fd(lambda z, t: np.conj(z), Point(0.3 + 0.1j, 0.2)) - 1) < 1e-10
    assert abs(dbar_fd(lambda z, t: z * z, Point(0.3 + 0.1j, 0.2))) < 1e-8
    zzbar = lambda z, t: z * np.conj(z)
    # d(z zbar)/dzbar = z; the value zbar = 1 - 2i is the holomorphic derivative d/dz,
    # recovered as conj(dbar(conj h))
    assert abs(dbar_fd(zzbar, Point(1 + 2j, 0.0), 1e-4) - (1 + 2j)) < 1e-6
    dz = np.conj(dbar_fd(lambda z, t: np.conj(zzbar(z, t)), Point(1 + 2j, 0.0), 1e-4))
    assert abs(dz - (1 - 2j)) < 1e-6


def test_dbar_second_order():
    h = lambda z, t: np.exp(np.conj(z)) * np.sin(z) + t
    p = Point(0.4 - 0.3j, 0.5)
    exact = np.exp(np.conj(p.z)) * np.sin(p.z)
    errs = [abs(dbar_fd(h, p, s) - exact) for s in (1e-2, 5e-3, 2.5e-3)]
    for a, b in zip(errs[:-1], errs[1:]):
        assert 3.5 < a / b < 4.5


def test_dbar_domain_errors():
    with pytest.raises(DomainError):
        dbar_fd(lambda z, t: z, Point(1e-4, 0.0), 1e-4)
    with pytest.raises(DomainError):
        dbar_fd(lambda z, t: z, Point(1.0, 0.0), 0.0)


def test_dbar_array_batched_once():
    calls = []

    def h(z, t):
        calls.append(np.shape(z))
        return np.conj(z) * t

    z = np.array([1.0, 2j, -1 + 1j])
    t = np.array([0.5, 1.0, -2.0])
    assert np.allclose(dbar_fd_array(h, z, t), t)
    assert calls == [(4, 3)]


def test_residual_zero(params):
    g = fundamental_grid(0.5)
    b = residual_report(bf("zero"), lambda z, t: 0 * z, g, params, H=lambda z, t: 0 * z)
    assert (b.pde, b.invariance, b.holo) == (0, 0, 0)
    assert b.grid.startswith("fundamental")


def test_residual_exact_pair(params):
    g = fundamental_grid(0.5)
    g0 = bf("g0")
    b = residual_report(builtin_form("exact_g0"), g0.evaluator(params), g, params)
    assert b.pde < 1e-6
    assert b.invariance < 1e-12


def test_residual_noninvariant(params):
    g = fundamental_grid(0.5)
    b = residual_report(bf("zero"), lambda z, t: z, g, params)
    assert b.invariance == pytest.approx(np.max(np.abs(0.5 * g.z - g.z)))
    assert b.invariance > 0


def test_residual_fields_shape(params):
    g = fundamental_grid(0.5)
    pde, inv = residual_fields(bf("zero"), lambda z, t: z, g, params)
    assert pde.shape == inv.shape == g.z.shape


def test_residual_empty_grid(params):
    with pytest.raises(DomainError):
        residual_report(bf("zero"), lambda z, t: z, SampleGrid(np.zeros(0, complex), np.zeros(0)),
                        params)


def test_bundle_nonnegative():
    with pytest.raises(DomainError):
        ResidualBundle(-1.0, 0.0, 0.0, "g")
