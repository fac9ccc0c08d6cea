import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reeb_dbar import (DomainError, EquivariantFunction, FoliationParams, Point, builtin_form,
                       combine, dbar_fd, eval_equivariant, fundamental_index, gamma_pow)
from reeb_dbar.geometry import builtin_names, fundamental_indices

from conftest import random_fundamental


def test_params_validation():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(DomainError):
            FoliationParams(bad)


def test_gamma_pow_examples(params):
    assert gamma_pow(Point(1 + 0j, 0.5), 0, params) == Point(1 + 0j, 0.5)
    assert gamma_pow(Point(2 + 0j, 0.0), 1, params) == Point(1 + 0j, 0.0)
    assert gamma_pow(Point(1 + 1j, 1.0), -2, params) == Point(4 + 4j, 4.0)


@given(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
       st.floats(-1e3, 1e3), st.integers(-20, 20))
def test_gamma_pow_roundtrip(z, t, k):
    params = FoliationParams(0.5)
    q = gamma_pow(gamma_pow(Point(z, t), k, params), -k, params)
    assert q.z == pytest.approx(z, rel=1e-15, abs=1e-300)
    assert q.t == pytest.approx(t, rel=1e-15, abs=1e-300)


def test_fundamental_index_examples(params):
    assert fundamental_index(Point(1 + 0j, 0.0), params) == 0
    assert fundamental_index(Point(0j, 1.0), params) == 0
    assert fundamental_index(Point(4 + 0j, 0.0), params) == 2
    assert fundamental_index(Point(0.3 + 0j, 0.0), params) == -1
    with pytest.raises(DomainError):
        fundamental_index(Point(0j, 0.0), params)


@settings(max_examples=200)
@given(st.floats(1e-6, 1e6), st.floats(0, 2 * np.pi), st.floats(-1.5, 1.5),
       st.floats(0.05, 0.95))
def test_fundamental_index_lands_in_annulus(r, az, polar, lam):
    params = FoliationParams(lam)
    p = Point(r * np.cos(polar) * np.exp(1j * az), r * np.sin(polar))
    x = np.log(p.rho) / np.log(lam)
    if abs(x - round(x)) < 1e-9:
        return  # annulus boundary: the index is decided by round-off
    k = fundamental_index(p, params)
    rho = gamma_pow(p, k, params).rho
    assert lam * (1 - 1e-12) < rho <= 1 + 1e-12
    for m in range(-3, 4):
        assert fundamental_index(gamma_pow(p, m, params), params) == k - m


def test_fundamental_indices_vectorized(params):
    z = np.array([1, 4, 0.3, 0.0]) + 0j
    t = np.array([0.0, 0.0, 0.0, 1.0])
    assert list(fundamental_indices(z, t, params)) == [0, 2, -1, 0]


def test_constant_weight_zero(params):
    F = EquivariantFunction(0, lambda z, t: np.full(np.broadcast(z, t).shape, 7.0 + 0j))
    for p in [Point(3 + 1j, 2.0), Point(1e-5j, 0.0), Point(0j, -40.0)]:
        assert eval_equivariant(F, p, params) == 7


def test_builtin_values(params):
    a = builtin_form("a")
    assert eval_equivariant(a, Point(2 + 0j, 0.0), params) == pytest.approx(0.5, abs=1e-15)
    assert builtin_form("omega0").at(1 + 0j, 1.0, params) == pytest.approx(0.5, abs=1e-15)
    assert builtin_form("exact_g0").at(1 + 0j, 1.0, params) == pytest.approx(0.25, abs=1e-15)
    g0 = builtin_form("g0")
    assert g0.at(0.5 * (1 + 2j), 0.15, params) == pytest.approx(g0.at(1 + 2j, 0.3, params),
                                                               abs=1e-15)
    w = builtin_form("omega0")
    z0, t0 = 1 + 1j, 1.0
    assert w.at(0.5 * z0, 0.5 * t0, params) == pytest.approx(2 * w.at(z0, t0, params), rel=1e-14)


def test_builtin_weights():
    assert builtin_form("omega0").coeff.weight == 1
    assert builtin_form("exact_g0").coeff.weight == 1
    assert builtin_form("a").weight == 1
    assert builtin_form("g0").weight == 0
    assert set(builtin_names()) == {"omega0", "exact_g0", "a", "g0", "zero"}


def test_unknown_builtin_lists_names():
    with pytest.raises(DomainError, match="omega0"):
        builtin_form("nope")


def test_origin_errors(params):
    with pytest.raises(DomainError, match="unbounded"):
        builtin_form("a").at(0j, 0.0, params)
    with pytest.raises(DomainError):
        builtin_form("g0").at(0j, 0.0, params)


@pytest.mark.parametrize("name", ["omega0", "exact_g0", "a", "g0"])
def test_equivariance_of_builtins(name, rng):
    lam = 0.5
    params = FoliationParams(lam)
    obj = builtin_form(name)
    F = getattr(obj, "coeff", obj)
    z, t = random_fundamental(rng, 100)
    err = np.abs(lam ** F.weight * F.at(lam * z, lam * t, params) - F.at(z, t, params))
    assert err.max() < 1e-12


@pytest.mark.parametrize("lam", [0.3, 0.7, 0.9])
def test_extension_matches_closed_form(lam, rng):
    # the closed forms are globally equivariant, so the extension reproduces them everywhere
    params = FoliationParams(lam)
    z = rng.normal(size=50) * 10 + 1j * rng.normal(size=50)
    t = rng.normal(size=50) * 3
    w = builtin_form("omega0")
    assert np.allclose(w.at(z, t, params), z / (np.abs(z) ** 2 + t * t), rtol=1e-12)


def test_exact_g0_is_dbar_g0(rng, params):
    g0 = builtin_form("g0").evaluator(params)
    e = builtin_form("exact_g0")
    z, t = random_fundamental(rng, 100)
    for zi, ti in zip(z, t):
        assert abs(dbar_fd(g0, Point(zi, ti), 1e-4) - e.at(zi, ti, params)) < 1e-6


def test_form_algebra(params):
    w, e = builtin_form("omega0"), builtin_form("exact_g0")
    f = 2.5 * w + e - e
    assert f.at(1 + 0j, 1.0, params) == pytest.approx(1.25)
    g = combine([(1j, w)])
    assert g.at(1 + 0j, 1.0, params) == pytest.approx(0.5j)
    with pytest.raises(DomainError):
        from reeb_dbar import LeafwiseForm01
        LeafwiseForm01(builtin_form("g0"))
