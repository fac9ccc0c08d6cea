"""Property suite: cutoff identities, I_N constancy, telescoping, H^00 rigidity.

Each check returns a :class:`PropertyResult` with the measured value and the
threshold it is held to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutoffs import CutoffFamily, phi, psi, scale_pow
from .geometry import EquivariantFunction, FoliationParams, LeafwiseForm01, builtin_form
from .quadrature import (PartialTransforms, PolarQuadSpec, area_integral, cauchy_transform,
                         taylor_coefficients)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    value: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value < self.threshold)


def _rng(seed):
    return np.random.default_rng(seed)


def _random_xi(rng, n, r_max):
    r = r_max * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def check_scaling_identities(family: CutoffFamily, n: int = 1000, j_max: int = 6,
                             seed: int = 0, threshold: float = 1e-14) -> PropertyResult:
    """``phi_j(xi) = phi_0(lam^j xi)`` and, for j >= 1, ``psi_j(lam xi) = psi_{j+1}(xi)``."""
    rng = _rng(seed)
    lam = family.lam
    js = rng.integers(0, j_max + 1, n)
    err = 0.0
    for j in np.unique(js):
        xi = _random_xi(rng, int(np.sum(js == j)), 1.2 * family.outer_radius(int(j) + 1))
        scaled = scale_pow(lam, int(j), xi)
        err = max(err, np.max(np.abs(phi(family, int(j), xi) - phi(family, 0, scaled))))
        if j >= 1:
            err = max(err, np.max(np.abs(psi(family, int(j), lam * xi)
                                         - psi(family, int(j) + 1, xi))))
    return PropertyResult("cutoff_scaling", float(err), threshold,
                          f"{n} samples, j <= {j_max}")


def check_cutoff_telescoping(family: CutoffFamily, n: int = 1000, n_max: int = 20,
                             seed: int = 1, threshold: float = 1e-14) -> PropertyResult:
    """``sum_{n<=N} (psi_0(lam^{n+1} xi) - psi_0(lam^n xi)) = psi_0(lam^{N+1} xi) - psi_0(xi)``."""
    rng = _rng(seed)
    lam = family.lam
    Ns = rng.integers(0, n_max + 1, n)
    xi = _random_xi(rng, n, family.outer_radius(n_max + 1))
    err = 0.0
    for i in range(n):
        N = int(Ns[i])
        k = np.arange(N + 1)
        lhs = np.sum(psi(family, 0, lam ** (k + 1) * xi[i]) - psi(family, 0, lam ** k * xi[i]))
        rhs = psi(family, 0, lam ** (N + 1) * xi[i]) - psi(family, 0, xi[i])
        err = max(err, abs(float(lhs - rhs)))
    return PropertyResult("cutoff_telescoping", err, threshold, f"{n} samples, N <= {n_max}")


def check_partition_sums(family: CutoffFamily, n: int = 1000, n_max: int = 10,
                         seed: int = 2, threshold: float = 1e-14) -> PropertyResult:
    """``sum_{j<=N} psi_j = phi_N`` pointwise, and ``psi_j >= 0``."""
    rng = _rng(seed)
    xi = _random_xi(rng, n, family.outer_radius(n_max + 1))
    err = 0.0
    total = np.zeros(n)
    negative = 0.0
    for N in range(n_max + 1):
        p = psi(family, N, xi)
        negative = max(negative, float(np.max(-p)))
        total = total + p
        err = max(err, float(np.max(np.abs(total - phi(family, N, xi)))))
    return PropertyResult("partition_sums", max(err, negative), threshold,
                          f"N <= {n_max}; min psi_j = {-negative:.3g}")


def I_N(f: LeafwiseForm01, N: int, family: CutoffFamily, n_r: int = 256,
        n_theta: int = 256) -> complex:
    """``(1/2 i pi) Int psi_N(xi) f(xi, 0) / xi dxi ^ dxibar`` on the support annulus of psi_N."""
    params = FoliationParams(family.lam)
    annulus = (family.inner_radius(N), family.outer_radius(N))
    spec = PolarQuadSpec(n_r, n_theta, annulus[1])

    def integrand(xi):
        return psi(family, N, xi) * f.at(xi, np.zeros(xi.shape), params) / xi

    return area_integral(integrand, spec, annulus=annulus)


def check_I_N_constancy(family: CutoffFamily, f: LeafwiseForm01 | None = None,
                        n_max: int = 5, threshold: float = 1e-8) -> PropertyResult:
    f = f or builtin_form("omega0")
    values = [I_N(f, N, family) for N in range(1, n_max + 1)]
    err = max(abs(v - values[0]) for v in values[1:])
    return PropertyResult("I_N_constancy", float(err), threshold,
                          f"I_1 = {values[0].real:.12g}{values[0].imag:+.3g}j, N <= {n_max}")


def telescoping_gap(f: LeafwiseForm01, N: int, z: complex, t: float, family: CutoffFamily,
                    spec: PolarQuadSpec) -> float:
    """``|sum_{j<=N} (h_j o gamma - h_j) - C[psi_{N+1} f]|`` at one point.

    Every ``h_j`` is integrated directly at the requested point (no use of
    the scaling relations between the ``h_j``).
    """
    lam = family.lam
    P = PartialTransforms(f, family, spec, canonicalize=False)
    z_arr, t_arr = np.array([lam * z, z]), np.array([lam * t, t])
    lhs = 0j
    for j in range(N + 1):
        v = P(j, z_arr, t_arr)
        lhs += v[0] - v[1]
    g = P.integrand(N + 1)
    support = family.outer_radius(N + 1)
    rhs = cauchy_transform(g, t, z, spec.with_r_max(support + abs(z)), support_radius=support)
    return abs(lhs - rhs)


def check_telescoping(family: CutoffFamily, spec: PolarQuadSpec = PolarQuadSpec(),
                      f: LeafwiseForm01 | None = None, n_points: int = 10, n_max: int = 3,
                      seed: int = 3, threshold: float = 1e-5) -> PropertyResult:
    f = f or builtin_form("omega0")
    rng = _rng(seed)
    zs = _random_xi(rng, n_points, 1.5)
    ts = rng.uniform(-1.0, 1.0, n_points)
    err = 0.0
    for z, t in zip(zs, ts):
        for N in range(n_max + 1):
            err = max(err, telescoping_gap(f, N, complex(z), float(t), family, spec))
    return PropertyResult("telescoping", float(err), threshold,
                          f"{n_points} points, N <= {n_max}")


def rigid_example() -> EquivariantFunction:
    """A nonconstant weight-0 function holomorphic in z on every leaf ``t != 0``."""
    def fund(z, t):
        u = z / t
        return u + 0.5 * u * u
    return EquivariantFunction(0, fund, "z/t + (z/t)^2/2")


def first_coefficient(F: EquivariantFunction, t: float, params: FoliationParams) -> complex:
    """Taylor coefficient ``f_1(t)`` of ``z -> F(z, t)`` at 0, on a circle of radius ``|t|``."""
    h = F.evaluator(params)
    return complex(taylor_coefficients(h, t, 0.0, abs(t), 1)[1])


def check_rigidity(lam: float, t0: float = 0.7, k_max: int = 5,
                   threshold: float = 1e-8, growth_tol: float = 1e-2) -> PropertyResult:
    """``lam^-1 f_1(t) = f_1(lam t)`` and ``|f_1(lam^k t0)| / |f_1(t0)| = lam^-k``."""
    params = FoliationParams(lam)
    F = rigid_example()
    f1 = [first_coefficient(F, lam ** k * t0, params) for k in range(k_max + 1)]
    rel = max(abs(f1[k] / lam - f1[k + 1]) / abs(f1[k + 1]) for k in range(k_max))
    growth = max(abs(abs(f1[k]) / abs(f1[0]) * lam ** k - 1.0) for k in range(1, k_max + 1))
    # report the relation error; growth must also stay within its own tolerance
    value = rel if growth < growth_tol else float("inf")
    return PropertyResult("H00_rigidity", float(value), threshold,
                          f"growth deviation {growth:.3g} (tolerance {growth_tol:g})")


def suggested_J_max(lam: float, target: float = 2.0 ** -4) -> int:
    """Smallest J with ``lam^J <= target``: the coboundary's polynomial part scales like lam^J."""
    return max(1, int(np.ceil(np.log(target) / np.log(lam))))


def run_all(family: CutoffFamily, spec: PolarQuadSpec = PolarQuadSpec()) -> list[PropertyResult]:
    return [
        check_scaling_identities(family),
        check_cutoff_telescoping(family),
        check_partition_sums(family),
        check_I_N_constancy(family),
        check_telescoping(family, spec),
        check_rigidity(family.lam),
    ]
