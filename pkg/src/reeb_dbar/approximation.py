"""Sup-seminorms, the translation-invariant metric and Runge truncation.

Only the order-zero seminorms are implemented: the objects compared here
(``h_j`` against its Taylor truncation ``v_j``) are leafwise holomorphic, and
for those the sup-norm topology already controls every leafwise derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cutoffs import CutoffFamily
from .errors import DomainError, TruncationError
from .geometry import LeafwiseForm01
from .quadrature import PartialTransforms, PolarQuadSpec, taylor_coefficients

# fraction of the holomorphy radius of h_j used for the expansion circle
CONTOUR_FRACTION = 0.75
CONTOUR_NODES = 128
DEGREE_CAP = 64


@dataclass(frozen=True)
class GridSpec:
    """Tensor polar grid of a section disc, sampled on a t-window."""

    n_radial: int = 64
    n_angular: int = 64
    n_t: int = 17
    t_window: float = 1.0

    def __post_init__(self):
        if self.n_radial < 2 or self.n_angular < 1 or self.n_t < 1:
            raise DomainError("grid needs n_radial >= 2, n_angular >= 1, n_t >= 1")
        if not self.t_window >= 0:
            raise DomainError("t_window must be nonnegative")

    def t_samples(self) -> np.ndarray:
        if self.n_t == 1:
            return np.zeros(1)
        return np.linspace(-self.t_window, self.t_window, self.n_t)


@dataclass(frozen=True)
class SampleGrid:
    z: np.ndarray
    t: np.ndarray
    label: str = ""

    @property
    def size(self) -> int:
        return int(self.z.size)


def disc_grid(radius: float, spec: GridSpec = GridSpec(), t_samples=None) -> SampleGrid:
    """Polar nodes on the closed disc ``|z| <= radius`` (boundary included) times t-samples."""
    r = np.linspace(0.0, radius, spec.n_radial)
    theta = 2.0 * np.pi * np.arange(spec.n_angular) / spec.n_angular
    zs = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    ts = spec.t_samples() if t_samples is None else np.asarray(t_samples, float)
    z = np.tile(zs, ts.size)
    t = np.repeat(ts, zs.size)
    return SampleGrid(z, t, f"disc(r={radius:g})")


def fundamental_grid(lam: float, n_rho: int = 2, polar=(-60.0, -30.0, 0.0, 30.0, 60.0),
                     n_azimuth: int = 3) -> SampleGrid:
    """Points of the fundamental annulus ``lam < rho <= 1``.

    ``rho`` runs over ``n_rho`` values ending at 1, the polar angle (measured
    from the leaf plane, in degrees) fixes ``t = rho sin(angle)``.
    """
    rhos = lam + (1.0 - lam) * np.arange(1, n_rho + 1) / n_rho
    pol = np.deg2rad(np.asarray(polar, float))
    az = 0.3 + 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    R, P, A = np.meshgrid(rhos, pol, az, indexing="ij")
    z = (R * np.cos(P) * np.exp(1j * A)).ravel()
    t = (R * np.sin(P)).ravel()
    return SampleGrid(z, t, f"fundamental(lam={lam:g})")


@dataclass(frozen=True)
class CompactExhaustion:
    """Nested compacts ``K_n``: discs of radius ``lam**-n * R`` times a t-window.

    Level ``n`` (n = 0, 1, ...) carries weight ``2**-(n+1)``.
    """

    R: float = 1.0
    lam: float = 0.5
    levels: int = 4
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        if self.levels < 1:
            raise DomainError("exhaustion needs at least one level")
        if not (0.0 < self.lam < 1.0) or self.R <= 0:
            raise DomainError("exhaustion needs 0 < lam < 1 and R > 0")

    @classmethod
    def from_family(cls, family: CutoffFamily, levels: int = 4,
                    grid: GridSpec | None = None) -> "CompactExhaustion":
        return cls(family.R, family.lam, levels, grid or GridSpec())

    def radius(self, n: int) -> float:
        return self.R * self.lam ** -n

    def weight(self, n: int) -> float:
        return 2.0 ** -(n + 1)

    def level_grid(self, n: int, t_samples=None) -> SampleGrid:
        return disc_grid(self.radius(n), self.grid, t_samples)

    def weight_sum(self) -> float:
        return sum(self.weight(n) for n in range(self.levels))


class PolyInZ:
    """``v(z, t) = sum_k c_k(t) z^k`` with coefficients computed per t on demand."""

    def __init__(self, degree: int, coeff_fn: Callable[[float], np.ndarray], *,
                 bound: float = 0.0, label: str = "v"):
        if degree < 0:
            raise DomainError("polynomial degree must be nonnegative")
        self.degree = int(degree)
        self._coeff_fn = coeff_fn
        self._cache: dict[float, np.ndarray] = {}
        self.bound = float(bound)
        self.label = label

    @classmethod
    def constant_coeffs(cls, coeffs, label: str = "v") -> "PolyInZ":
        c = np.asarray(coeffs, complex)
        return cls(len(c) - 1, lambda t: c, label=label)

    def coefficients(self, t: float) -> np.ndarray:
        key = float(t)
        c = self._cache.get(key)
        if c is None:
            c = np.asarray(self._coeff_fn(key), complex)[: self.degree + 1]
            if len(self._cache) > 65536:
                self._cache.clear()
            self._cache[key] = c
        return c

    def __call__(self, z, t) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        out = np.empty(z.shape, complex)
        for tv in np.unique(t):
            sel = t == tv
            out[sel] = np.polynomial.polynomial.polyval(z[sel], self.coefficients(tv))
        return out


def _eval(f, grid: SampleGrid) -> np.ndarray:
    return np.asarray(f(grid.z, grid.t), complex)


def sup_seminorm(f, grid: SampleGrid) -> float:
    """Order-zero seminorm: max of ``|f|`` over the grid nodes."""
    if grid.size == 0:
        raise DomainError("sup over an empty grid")
    return float(np.max(np.abs(_eval(f, grid))))


def delta_metric(f, g, exhaustion: CompactExhaustion) -> float:
    """``sum_n 2^-(n+1) min(1, sup_{K_n} |f - g|)`` over the exhaustion levels."""
    total = 0.0
    for n in range(exhaustion.levels):
        grid = exhaustion.level_grid(n)
        d = float(np.max(np.abs(_eval(f, grid) - _eval(g, grid))))
        total += exhaustion.weight(n) * min(1.0, d)
    return total


def expansion_radius(family: CutoffFamily, j: int) -> float:
    """Radius of the circle used to expand ``h_j`` about 0 (inside its holomorphy disc)."""
    return CONTOUR_FRACTION * family.inner_radius(j)


def truncate_runge(f: LeafwiseForm01 | None, j: int, family: CutoffFamily,
                   spec: PolarQuadSpec, exhaustion: CompactExhaustion,
                   t_samples=None, *, partials: PartialTransforms | None = None,
                   h: Callable | None = None, degree_cap: int = DEGREE_CAP,
                   n_nodes: int = CONTOUR_NODES) -> PolyInZ:
    """Minimal-degree Taylor truncation ``v_j`` of ``h_j`` with ``sup_{K_{j-1}} |h_j - v_j| < 2^-j``.

    ``h`` overrides the evaluator of ``h_j`` (otherwise built from ``f``).
    """
    if j < 1:
        raise DomainError("only h_j with j >= 1 are truncated")
    if degree_cap >= n_nodes:
        raise DomainError("degree cap must be below the number of contour nodes")
    if h is None:
        if partials is None:
            partials = PartialTransforms(f, family, spec)
        h = partials.evaluator(j)
    radius = expansion_radius(family, j)
    ts = exhaustion.grid.t_samples() if t_samples is None else np.asarray(t_samples, float)
    grid = disc_grid(exhaustion.radius(j - 1), exhaustion.grid, t_samples=[0.0])
    target = 2.0 ** -j

    err = np.zeros(degree_cap + 1)
    for tv in ts:
        coeffs = taylor_coefficients(h, tv, 0.0, radius, degree_cap, n_nodes)
        vals = np.asarray(h(grid.z, np.full(grid.size, tv)), complex)
        partial = np.zeros(grid.size, complex)
        zpow = np.ones(grid.size, complex)
        for d in range(degree_cap + 1):
            partial += coeffs[d] * zpow
            zpow *= grid.z
            err[d] = max(err[d], float(np.max(np.abs(vals - partial))))
    ok = np.flatnonzero(err < target)
    if ok.size == 0:
        raise TruncationError(
            f"no truncation of h_{j} up to degree {degree_cap} reaches {target:g}",
            achieved=float(err.min()), degree=degree_cap)
    degree = int(ok[0])
    return PolyInZ(degree, lambda t: taylor_coefficients(h, t, 0.0, radius, degree, n_nodes),
                   bound=float(err[degree]), label=f"v_{j}")
