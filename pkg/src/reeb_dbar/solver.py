"""Decomposition of invariant (0,1)-forms into class coefficient plus exact part.

Pipeline for a form ``f dzbar``:

1. ``c = I(f) / I(omega0)`` with the obstruction functional ``I``;
2. ``f' = f - c omega0`` has ``I(f') = 0``;
3. ``htilde = h_0 + sum_{j<=J} (h_j - v_j)`` solves ``dbar htilde = f'`` near the
   fundamental domain but is not gamma-invariant;
4. ``H = htilde o gamma - htilde`` is leafwise holomorphic with ``H(0, 0) = I(f')``;
5. ``K = sum_n H o gamma^n`` solves ``K - K o gamma = H``;
6. ``h = htilde + K`` is invariant and ``dbar h = f'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .approximation import (CompactExhaustion, GridSpec, PolyInZ, SampleGrid,
                            fundamental_grid, truncate_runge)
from .cutoffs import CutoffFamily, psi, support_annulus
from .errors import ConvergenceError, DomainError, NotRemovableError, ObstructionError
from .geometry import (EquivariantFunction, FoliationParams, LeafwiseForm01, as_form,
                       builtin_form, combine)
from .quadrature import PartialTransforms, PolarQuadSpec, area_integral, contour_coefficient
from .verify import ResidualBundle, dbar_fd_array, residual_fields

MODES = ("direct", "polyseries")


@dataclass(frozen=True)
class SolverConfig:
    family: CutoffFamily = field(default_factory=CutoffFamily)
    quad: PolarQuadSpec = field(default_factory=PolarQuadSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    J_max: int = 4
    tol: float = 1e-6
    residual_tol: float = 1e-3
    mode: str = "direct"
    n_consecutive: int = 5
    max_terms: int = 200
    degree_cap: int = 64
    fd_step: float = 1e-4
    fundamental_n_rho: int = 2
    fundamental_polar: tuple = (-60.0, -30.0, 0.0, 30.0, 60.0)
    fundamental_n_azimuth: int = 3

    def __post_init__(self):
        if self.J_max < 1:
            raise DomainError("J_max must be >= 1")
        if self.mode not in MODES:
            raise DomainError(f"unknown K-series mode {self.mode!r}; use one of {MODES}")
        if not (self.tol > 0 and self.residual_tol > 0 and self.fd_step > 0):
            raise DomainError("tolerances and the finite-difference step must be positive")
        if self.n_consecutive < 1 or self.max_terms < self.n_consecutive:
            raise DomainError("need 1 <= n_consecutive <= max_terms")

    @property
    def params(self) -> FoliationParams:
        return FoliationParams(self.family.lam)

    def fundamental_grid(self) -> SampleGrid:
        return fundamental_grid(self.family.lam, self.fundamental_n_rho,
                                self.fundamental_polar, self.fundamental_n_azimuth)


# obstruction ---------------------------------------------------------------

def obstruction(f: LeafwiseForm01, family: CutoffFamily, spec: PolarQuadSpec) -> complex:
    """``I(f) = (1/2 i pi) Int psi_1(z) f(z, 0) / z dz ^ dzbar`` on the support annulus of psi_1."""
    params = FoliationParams(family.lam)
    annulus = support_annulus(family, 1)

    def integrand(xi):
        return psi(family, 1, xi) * f.at(xi, np.zeros(xi.shape), params) / xi

    return area_integral(integrand, spec, annulus=annulus)


def obstruction_1d(family: CutoffFamily, n: int = 2000) -> float:
    """``-2 Int_{R1}^{R2} psi_1(r) / r dr``, the value of ``I(omega0)``, by 1-D Gauss-Legendre."""
    from .quadrature import gauss_rule

    r1, r2 = support_annulus(family, 1)
    r, w = gauss_rule(r1, r2, n)
    return float(-2.0 * np.sum(w * psi(family, 1, r) / r))


# h-tilde and its coboundary ------------------------------------------------

class HTilde:
    """``htilde = h_0 + sum_{j=1}^{J} (h_j - v_j)``, a non-invariant solution of ``dbar htilde = f``."""

    def __init__(self, partials: PartialTransforms, vs: list[PolyInZ]):
        if not vs:
            raise DomainError("HTilde needs at least one truncation v_1")
        self.partials = partials
        self.vs = list(vs)

    @property
    def J(self) -> int:
        return len(self.vs)

    @property
    def lam(self) -> float:
        return self.partials.family.lam

    def __call__(self, z, t) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        out = self.partials(0, z, t)
        for j, v in enumerate(self.vs, start=1):
            out = out + self.partials(j, z, t) - v(z, t)
        return out


def assemble_htilde(f: LeafwiseForm01, J_max: int, family: CutoffFamily, spec: PolarQuadSpec,
                    exhaustion: CompactExhaustion | None = None, t_samples=None,
                    degree_cap: int = 64) -> HTilde:
    if J_max < 1:
        raise DomainError("J_max must be >= 1")
    partials = PartialTransforms(f, family, spec)
    exhaustion = exhaustion or CompactExhaustion.from_family(family, levels=J_max)
    vs = [truncate_runge(f, j, family, spec, exhaustion, t_samples, partials=partials,
                         degree_cap=degree_cap) for j in range(1, J_max + 1)]
    return HTilde(partials, vs)


class Coboundary:
    """``H = htilde o gamma - htilde``.

    For an :class:`HTilde` the default evaluation uses the telescoped form
    ``H = h_{J+1} - sum_j (v_j o gamma - v_j)`` (the h_0 difference is
    ``h_1``, each ``h_j o gamma`` is ``h_{j+1}``), which avoids the origin
    singularity of ``h_0`` and is defined at (0, 0).  ``telescoped=False``
    forces the literal difference.
    """

    def __init__(self, htilde: Callable, params: FoliationParams, telescoped: bool = True):
        self.htilde = htilde
        self.params = params
        self.telescoped = telescoped and isinstance(htilde, HTilde)

    @property
    def vs(self):
        return getattr(self.htilde, "vs", None)

    def __call__(self, z, t) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        lam = self.params.lam
        if not self.telescoped:
            return np.asarray(self.htilde(lam * z, lam * t) - self.htilde(z, t), complex)
        ht = self.htilde
        out = ht.partials(ht.J + 1, z, t)
        for v in ht.vs:
            out = out - (v(lam * z, lam * t) - v(z, t))
        return out


def coboundary(htilde: Callable, params: FoliationParams, telescoped: bool = True) -> Coboundary:
    return Coboundary(htilde, params, telescoped)


# Hartogs extension ---------------------------------------------------------

def hartogs_extend(f: Callable, center: complex, radius: float, t: float,
                   tol: float = 1e-8, n_nodes: int = 64) -> complex:
    """Value at the puncture of a leafwise holomorphic function, as its circle mean.

    The first Laurent coefficient ``b_1`` is checked first; ``|b_1| > tol``
    means a pole or essential singularity.
    """
    b1 = contour_coefficient(f, t, center, radius, 1, kind="laurent", n_nodes=n_nodes)
    if abs(b1) > tol:
        raise NotRemovableError(
            f"singularity at {center} is not removable (|b_1| = {abs(b1):.3g})", laurent=b1)
    return contour_coefficient(f, t, center, radius, 0, kind="taylor", n_nodes=n_nodes)


# cohomological equation ----------------------------------------------------

class KSeries:
    """Evaluator of ``K = sum_n H o gamma^n`` with a decay monitor.

    Terms of a batch share one stopping index: the loop stops once the
    largest term of the batch stays below ``tol`` for ``n_consecutive``
    successive terms.
    """

    def __init__(self, H: Callable, params: FoliationParams, tol: float, mode: str,
                 vs: list[PolyInZ] | None, n_consecutive: int, max_terms: int):
        self.H = H
        self.params = params
        self.tol = tol
        self.mode = mode
        self.vs = vs
        self.n_consecutive = n_consecutive
        self.max_terms = max_terms
        self.terms_used = 0

    def _poly_term(self, z, t, n):
        """``sum_j (v_j(gamma^n p) - v_j(gamma^{n+1} p))``, term n of the reduced double series."""
        lam = self.params.lam
        s0, s1 = lam ** n, lam ** (n + 1)
        out = np.zeros(z.shape, complex)
        for v in self.vs:
            out += v(s0 * z, s0 * t) - v(s1 * z, s1 * t)
        return out

    def __call__(self, z, t) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        lam = self.params.lam
        total = np.zeros(z.shape, complex)
        poly_total = np.zeros(z.shape, complex)
        quiet = 0
        for n in range(self.max_terms):
            s = lam ** n
            term = np.asarray(self.H(s * z, s * t), complex)
            if self.mode == "polyseries":
                # H = H_poly + remainder; the polynomial part is summed as its own series
                p = self._poly_term(z, t, n)
                poly_total += p
                term = term - p
                size = max(np.max(np.abs(term), initial=0.0), np.max(np.abs(p), initial=0.0))
            else:
                size = float(np.max(np.abs(term), initial=0.0))
            total += term
            quiet = quiet + 1 if size < self.tol else 0
            if quiet >= self.n_consecutive:
                self.terms_used = max(self.terms_used, n + 1)
                return total + poly_total
        hint = " (try mode='polyseries' for a cross-check)" if self.mode == "direct" else ""
        raise ConvergenceError(
            f"K-series terms still >= {self.tol:g} after {self.max_terms} terms{hint}")


def origin_value(H: Callable, radius: float = 0.5, tol: float = 1e-8) -> complex:
    """``H(0, 0)`` through the Hartogs extension at t = 0."""
    return hartogs_extend(H, 0.0, radius, 0.0, tol=tol)


def solve_cohomological(H: Callable, params: FoliationParams, tol: float = 1e-6,
                        mode: str = "direct", v_js: list[PolyInZ] | None = None, *,
                        n_consecutive: int = 5, max_terms: int = 200,
                        origin_radius: float = 0.5) -> KSeries:
    """Solve ``K - K o gamma = H`` for leafwise holomorphic ``H`` with ``H(0, 0) = 0``."""
    if mode not in MODES:
        raise DomainError(f"unknown K-series mode {mode!r}; use one of {MODES}")
    h00 = origin_value(H, origin_radius)
    if abs(h00) > tol:
        raise ObstructionError(
            f"H(0, 0) = {h00:.6g} is not zero: the class does not vanish", estimate=h00)
    if mode == "polyseries":
        v_js = v_js if v_js is not None else getattr(H, "vs", None)
        if not v_js:
            raise DomainError("polyseries mode needs the truncations v_j")
    return KSeries(H, params, tol, mode, v_js, n_consecutive, max_terms)


# decomposition -------------------------------------------------------------

@dataclass
class SolveReport:
    class_coeff: complex
    primitive: Callable
    residuals: dict
    diagnostics: dict
    raw: Callable = field(repr=False)
    htilde: HTilde = field(repr=False)
    H: Coboundary = field(repr=False)
    K: KSeries = field(repr=False)
    bundle: ResidualBundle = field(repr=False)
    fields: dict = field(repr=False, default_factory=dict)

    def accepted(self, residual_tol: float) -> bool:
        return all(v < residual_tol for v in self.residuals.values())


def decompose(f: LeafwiseForm01, config: SolverConfig = SolverConfig()) -> SolveReport:
    """Write ``f = c omega0 + dbar h`` with ``h`` gamma-invariant."""
    f = as_form(f)
    family, spec, params = config.family, config.quad, config.params
    omega0 = builtin_form("omega0")
    I_f = obstruction(f, family, spec)
    I_w = obstruction(omega0, family, spec)
    c = I_f / I_w
    reduced = combine([(1.0, f), (-c, omega0)])

    exhaustion = CompactExhaustion.from_family(family, levels=config.J_max, grid=config.grid)
    htilde = assemble_htilde(reduced, config.J_max, family, spec, exhaustion,
                             degree_cap=config.degree_cap)
    H = coboundary(htilde, params)
    K = solve_cohomological(H, params, config.tol, config.mode, htilde.vs,
                            n_consecutive=config.n_consecutive, max_terms=config.max_terms)

    def raw(z, t):
        return htilde(z, t) + K(z, t)

    primitive = EquivariantFunction(0, raw, "h").evaluator(params)
    grid = config.fundamental_grid()
    pde, inv = residual_fields(reduced, raw, grid, params, config.fd_step)
    holo = np.abs(dbar_fd_array(H, grid.z, grid.t, config.fd_step))
    bundle = ResidualBundle(float(pde.max()), float(inv.max()), float(holo.max()), grid.label)
    residuals = {"pde": bundle.pde, "invariance": bundle.invariance, "holo_H": bundle.holo}
    diagnostics = {
        "J_max": config.J_max,
        "K_terms": K.terms_used,
        "mode": config.mode,
        "degrees": [v.degree for v in htilde.vs],
        "runge_bounds": [v.bound for v in htilde.vs],
        "I_f": I_f,
        "I_omega0": I_w,
        "grid": bundle.grid,
    }
    return SolveReport(c, primitive, residuals, diagnostics, raw, htilde, H, K, bundle,
                       {"grid": grid, "pde": pde, "invariance": inv})
