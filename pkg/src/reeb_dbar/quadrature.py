"""Singularity-free quadrature for Cauchy transforms and contour integrals.

The leafwise Cauchy transform used throughout is

    C[g](z) = (1 / 2 i pi) * Int g(xi) / (xi - z) dxi ^ dxibar
            = (-1 / pi) * Int g(xi) / (xi - z) dA(xi),

which solves ``dbar C[g] = g``.  With ``xi = z + r e^{i theta}`` the kernel
cancels against the Jacobian and

    C[g](z) = (-1 / pi) Int_0^rmax Int_0^2pi g(z + r e^{i theta}) e^{-i theta} dtheta dr.

The theta integral uses the trapezoid rule, the r integral Gauss-Legendre
panels.  Integrands that are themselves singular at ``xi = 0`` (the
coefficients of invariant forms blow up like ``1/rho`` there) are split with
a smooth partition of unity into a piece centred on the origin and a piece
centred on ``z``, each integrated on a radially graded grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .cutoffs import CutoffFamily, psi, smoothstep
from .errors import CoverageError, DomainError
from .geometry import FoliationParams, LeafwiseForm01, _fundamental_index

# targets with |z| <= HOLE_FRACTION * inner radius of supp(psi_j) use the
# shared origin-centred grid on the support annulus
HOLE_FRACTION = 0.9
PANEL_ORDER = 16
_CHUNK = 64


@dataclass(frozen=True)
class PolarQuadSpec:
    n_r: int = 256
    n_theta: int = 256
    r_max: float = 4.0

    def __post_init__(self):
        if self.n_r < 8 or self.n_theta < 8:
            raise DomainError("PolarQuadSpec needs n_r >= 8 and n_theta >= 8")
        if not self.r_max > 0:
            raise DomainError("PolarQuadSpec needs r_max > 0")

    def with_r_max(self, r_max: float) -> "PolarQuadSpec":
        return replace(self, r_max=float(r_max))

    def refined(self, factor: int = 2) -> "PolarQuadSpec":
        return replace(self, n_r=self.n_r * factor, n_theta=self.n_theta * factor)


@lru_cache(maxsize=32)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_rule(a: float, b: float, n: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return a + (x + 1.0) * half, w * half


def graded_rule(r_min: float, r_max: float, n_r: int, order: int = PANEL_ORDER,
                cap: float | None = None):
    """Composite Gauss rule on [0, r_max], geometrically refined towards 0.

    Panels double in width starting from ``r_min`` until they reach the
    uniform width ``cap`` (default ``r_max * order / n_r``), after which they
    stay uniform.
    """
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    if cap is None:
        cap = r_max * order / n_r
    r_min = min(max(r_min, 1e-300), cap, r_max)
    breaks = [0.0, r_min]
    while breaks[-1] < r_max:
        breaks.append(min(breaks[-1] + min(breaks[-1], cap), r_max))
    return _panels(breaks, order)


def _panels(breaks, order):
    rs, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b > a:
            r, w = gauss_rule(a, b, order)
            rs.append(r)
            ws.append(w)
    return np.concatenate(rs), np.concatenate(ws)


def _split_rule(r_min, r_fine, fine_cap, r_max, n_r, order=PANEL_ORDER):
    """Geometric panels from ``r_min``; width <= fine_cap below ``r_fine``."""
    cap = r_max * order / n_r
    breaks = [0.0, min(r_min, fine_cap, r_max)]
    while breaks[-1] < r_max:
        b = breaks[-1]
        breaks.append(min(b + min(b, fine_cap if b < r_fine else cap), r_max))
    return _panels(breaks, order)


def _angles(n_theta):
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return np.exp(1j * theta), 2.0 * np.pi / n_theta


def _centred_sum(g, center, r, wr, n_theta):
    """(-1/pi) sum over the polar grid at ``center`` of g(xi) * e^{-i theta}."""
    e, dtheta = _angles(n_theta)
    xi = center + r[:, None] * e[None, :]
    vals = g(xi) * np.conj(e)[None, :]
    return -(wr @ vals.sum(axis=1)) * dtheta / np.pi


def cauchy_transform(g: Callable, t: float, z: complex, spec: PolarQuadSpec, *,
                     support_radius: float | None = None,
                     singular_origin: bool = False) -> complex:
    """Cauchy transform ``C[g(., t)](z)`` of a compactly supported integrand.

    ``g(xi, t)`` must vanish for ``|xi| > support_radius`` (when given, the
    radius is checked against ``spec.r_max``).  Set ``singular_origin`` when
    ``g`` is only locally integrable at ``xi = 0``.
    """
    z = complex(z)
    t = float(t)
    if support_radius is not None and spec.r_max < support_radius + abs(z) - 1e-12:
        raise CoverageError(
            f"r_max = {spec.r_max} does not cover support radius {support_radius} "
            f"seen from z = {z} (need >= {support_radius + abs(z)})"
        )
    gt = lambda xi: g(xi, t)
    if not singular_origin:
        r, wr = gauss_rule(0.0, spec.r_max, spec.n_r)
        return complex(_centred_sum(gt, z, r, wr, spec.n_theta))

    d = abs(z)
    if d == 0.0:
        if t == 0.0:
            raise DomainError("Cauchy transform of an origin-singular integrand at (0, 0)")
        r, wr = graded_rule(abs(t) / 8, spec.r_max, spec.n_r)
        return complex(_centred_sum(gt, 0.0, r, wr, spec.n_theta))

    # partition of unity: chi = 1 on |xi| <= d/2, 0 on |xi| >= 3d/4
    chi = lambda xi: smoothstep((0.75 * d - np.abs(xi)) / (0.25 * d))
    scale = min(d, abs(t)) if t != 0.0 else d
    e, dtheta = _angles(spec.n_theta)
    r, wr = graded_rule(scale / 8, 0.75 * d, spec.n_r)
    xi = r[:, None] * e[None, :]
    inner = -(wr * r) @ (chi(xi) * gt(xi) / (xi - z)).sum(axis=1) * dtheta / np.pi
    r, wr = _split_rule(d / 16, 2.0 * d, d / 16, spec.r_max, spec.n_r)
    outer = _centred_sum(lambda x: (1.0 - chi(x)) * gt(x), z, r, wr, spec.n_theta)
    return complex(inner + outer)


class FarField:
    """Cauchy transform of a density on an annulus, for targets in its hole.

    For ``|z| < r_in`` the kernel is smooth on the support, so one
    origin-centred grid serves every target.  Large target batches use the
    convergent expansion ``1/(xi - z) = sum z^k / xi^(k+1)``, which is exact
    summation of the same quadrature up to round-off.
    """

    def __init__(self, density: Callable, r_in: float, r_out: float, spec: PolarQuadSpec):
        r, wr = gauss_rule(r_in, r_out, spec.n_r)
        e, dtheta = _angles(spec.n_theta)
        xi = r[:, None] * e[None, :]
        self.r_in = r_in
        self._r = r
        weights = -(wr * r * dtheta / np.pi)[:, None] * density(xi)
        self._ring_dft = None
        self._grid_weights = weights
        self.xi = xi.ravel()
        self.weights = weights.ravel()
        self._moments = None

    def moments(self, n_terms: int) -> np.ndarray:
        """Taylor coefficients at 0 of the transform, up to ``n_terms - 1``."""
        if self._moments is None or len(self._moments) < n_terms:
            # sum_l w e^{-i m theta_l} is a DFT along each ring, so the moment
            # sums of the polar grid are a ring DFT followed by a radial sum
            if self._ring_dft is None:
                self._ring_dft = np.fft.fft(self._grid_weights, axis=1)
            m = np.arange(1, n_terms + 1)
            rows = self._ring_dft[:, m % self._grid_weights.shape[1]]
            self._moments = np.sum(self._r[:, None] ** -m[None, :] * rows, axis=0)
        return self._moments[:n_terms]

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, complex)
        flat = z.ravel()
        if flat.size == 0:
            return np.zeros(z.shape, complex)
        ratio = np.max(np.abs(flat)) / self.r_in
        if ratio >= 1.0:
            raise DomainError("far-field evaluation requested inside the support")
        n_terms = 1 if ratio == 0 else int(np.ceil(np.log(1e-17) / np.log(ratio))) + 1
        cached = self._moments is not None and len(self._moments) >= n_terms
        if cached or n_terms <= 2 * flat.size:
            out = np.polynomial.polynomial.polyval(flat, self.moments(n_terms))
        else:
            out = np.empty(flat.size, complex)
            for i in range(0, flat.size, _CHUNK):
                zc = flat[i:i + _CHUNK]
                out[i:i + _CHUNK] = (self.weights[None, :] / (self.xi[None, :] - zc[:, None])).sum(axis=1)
        return out.reshape(z.shape)


class PartialTransforms:
    """The partial solutions ``h_j = C[psi_j f]`` of one form, with caching.

    ``h_j`` solves ``dbar h_j = psi_j f`` on the covering space; for j >= 1
    it is holomorphic in z on the disc where psi_j vanishes.
    """

    def __init__(self, f: LeafwiseForm01, family: CutoffFamily, spec: PolarQuadSpec,
                 canonicalize: bool = True):
        self.f = f
        self.canonicalize = canonicalize
        self.family = family
        self.spec = spec
        self.params = FoliationParams(family.lam)
        self._far = {}

    def integrand(self, j: int) -> Callable:
        fam, f, params = self.family, self.f, self.params
        return lambda xi, t: psi(fam, j, xi) * f.at(xi, t, params)

    def far_field(self, j: int, t: float) -> FarField:
        key = (j, float(t))
        ff = self._far.get(key)
        if ff is None:
            if len(self._far) > 4096:
                self._far.clear()
            g = self.integrand(j)
            ff = FarField(lambda xi: g(xi, t), self.family.inner_radius(j),
                          self.family.outer_radius(j), self.spec)
            self._far[key] = ff
        return ff

    def in_hole(self, j: int, z) -> np.ndarray:
        if j == 0:
            return np.zeros(np.shape(z), bool)
        return np.abs(z) <= HOLE_FRACTION * self.family.inner_radius(j)

    def canonical(self, j: int, z, t):
        """Rewrite ``h_j(z, t)`` as ``h_j'(z', t')`` with ``lam < |t'| <= 1`` when possible.

        Uses ``h_j(lam z, lam t) = h_{j+1}(z, t)`` (valid for j >= 1), so every
        point of a gamma-orbit shares the far-field grids of one t-slice.
        """
        j_out = np.full(z.shape, j, np.int64)
        if j == 0 or not self.canonicalize:
            return j_out, z, t
        k = np.zeros(z.shape, np.int64)
        nz = t != 0
        if np.any(nz):
            k[nz] = _fundamental_index(np.zeros(np.count_nonzero(nz), complex), t[nz],
                                       self.family.lam)
        k = np.minimum(k, j - 1)
        s = self.family.lam ** k.astype(float)
        return j - k, z * s, t * s

    def __call__(self, j: int, z, t) -> np.ndarray:
        if j < 0:
            raise DomainError("partial index must be nonnegative")
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        shape = z.shape
        jj, zz, tt = self.canonical(j, z.ravel(), t.ravel())
        tt = np.round(tt, 14)
        out = np.empty(zz.shape, complex)
        for jv in np.unique(jj):
            on_j = jj == jv
            hole = on_j & self.in_hole(int(jv), zz)
            for tv in np.unique(tt[hole]):
                sel = hole & (tt == tv)
                out[sel] = self.far_field(int(jv), tv)(zz[sel])
            rest = np.flatnonzero(on_j & ~hole)
            if rest.size:
                g = self.integrand(int(jv))
                support = self.family.outer_radius(int(jv))
                for i in rest:
                    zi, ti = complex(zz[i]), float(tt[i])
                    spec = self.spec.with_r_max(support + abs(zi))
                    out[i] = cauchy_transform(g, ti, zi, spec, support_radius=support,
                                              singular_origin=(jv == 0))
        return out.reshape(shape)

    def evaluator(self, j: int):
        return lambda z, t: self(j, z, t)


def h_partial(f: LeafwiseForm01, j: int, z, t, family: CutoffFamily,
              spec: PolarQuadSpec) -> np.ndarray:
    """``h_j(z, t) = C[psi_j f(., t)](z)``; the integration radius is sized to supp psi_j."""
    out = PartialTransforms(f, family, spec)(j, z, t)
    return out if out.ndim else complex(out)


def contour_coefficient(h: Callable, t: float, center: complex, radius: float, n: int,
                        kind: str = "taylor", n_nodes: int = 64) -> complex:
    """Taylor (``a_n``) or Laurent (``b_n``) coefficient from a circle integral.

    a_n = (1/2 i pi) Int h / (xi - c)^(n+1) dxi,  b_n = (1/2 i pi) Int (xi - c)^(n-1) h dxi,
    discretized with the trapezoid rule on ``n_nodes`` equispaced nodes.
    """
    if kind == "taylor":
        if n < 0:
            raise DomainError("Taylor index must be >= 0")
        power = -n
    elif kind == "laurent":
        if n < 1:
            raise DomainError("Laurent index must be >= 1")
        power = n
    else:
        raise DomainError(f"unknown coefficient kind {kind!r}")
    e, _ = _angles(n_nodes)
    vals = np.asarray(h(center + radius * e, np.full(n_nodes, float(t))), complex)
    return complex(np.mean(vals * (radius * e) ** power))


def taylor_coefficients(h: Callable, t: float, center: complex, radius: float,
                        degree: int, n_nodes: int = 64) -> np.ndarray:
    """All Taylor coefficients ``a_0 .. a_degree`` from one set of circle samples."""
    if degree >= n_nodes:
        raise DomainError("need more contour nodes than the requested degree")
    e, _ = _angles(n_nodes)
    vals = np.asarray(h(center + radius * e, np.full(n_nodes, float(t))), complex)
    c = np.fft.fft(vals)[: degree + 1] / n_nodes
    return c / radius ** np.arange(degree + 1)


def area_integral(integrand: Callable, spec: PolarQuadSpec, *,
                  annulus: tuple[float, float] | None = None,
                  support_radius: float | None = None) -> complex:
    """``(1/2 i pi) Int integrand dxi ^ dxibar = (-1/pi) Int integrand dA`` on a polar grid at 0.

    Restricting to ``annulus = (r_in, r_out)`` puts every radial node on the
    support when the integrand is known to vanish elsewhere.
    """
    if support_radius is not None and support_radius > spec.r_max + 1e-12:
        raise CoverageError(f"r_max = {spec.r_max} < support radius {support_radius}")
    if annulus is None:
        r, wr = gauss_rule(0.0, spec.r_max, spec.n_r)
    else:
        a, b = annulus
        if b > spec.r_max + 1e-12:
            raise CoverageError(f"r_max = {spec.r_max} < annulus outer radius {b}")
        r, wr = gauss_rule(a, b, spec.n_r)
    e, dtheta = _angles(spec.n_theta)
    xi = r[:, None] * e[None, :]
    vals = integrand(xi)
    return complex(-(wr * r) @ vals.sum(axis=1) * dtheta / np.pi)
