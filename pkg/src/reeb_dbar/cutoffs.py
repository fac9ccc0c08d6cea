"""Scaled radial cutoffs ``rho0``, ``phi_j`` and ``psi_j``.

``rho0`` is a smooth radial bump equal to 1 on ``|x| <= R + eps`` and 0 on
``|x| >= R_out``.  ``phi_j(x) = rho0(lam**j x)`` and ``psi_0 = phi_0``,
``psi_j = phi_j - phi_{j-1}``, so the ``psi_j`` form a partition of unity
with ``psi_j(lam x) = psi_{j+1}(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _sigma(u):
    u = np.asarray(u, float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smoothstep(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, and smoothstep(1/2) = 1/2."""
    u = np.clip(np.asarray(u, float), 0.0, 1.0)
    a = _sigma(u)
    b = _sigma(1.0 - u)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffFamily:
    R: float = 1.0
    eps: float = 0.25
    R_out: float = 1.75
    lam: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise DomainError(f"lam must lie in (0, 1), got {self.lam}")
        if self.R <= 0 or self.eps <= 0:
            raise DomainError("R and eps must be positive")
        if not self.R + self.eps < self.R / self.lam:
            raise DomainError(
                f"nesting condition R + eps < R / lam violated "
                f"({self.R + self.eps} >= {self.R / self.lam})"
            )
        if not (self.R + self.eps < self.R_out < self.R / self.lam):
            raise DomainError(
                f"need R + eps < R_out < R / lam, got R_out = {self.R_out}"
            )

    @property
    def plateau(self) -> float:
        return self.R + self.eps

    def inner_radius(self, j: int) -> float:
        """Radius of the disc on which psi_j vanishes (j >= 1)."""
        return self.plateau * self.lam ** -(j - 1)

    def outer_radius(self, j: int) -> float:
        """Support radius of phi_j and psi_j."""
        return self.R_out * self.lam ** -j


def rho0(family: CutoffFamily, x) -> np.ndarray:
    r = np.abs(np.asarray(x))
    return smoothstep((family.R_out - r) / (family.R_out - family.plateau))


def scale_pow(lam: float, j: int, xi) -> np.ndarray:
    """``lam**j * xi`` by j successive multiplications.

    Scaling step by step makes ``scale_pow(lam, j, lam * xi)`` and
    ``scale_pow(lam, j + 1, xi)`` bitwise equal, so the cutoff scaling
    relations hold without round-off even where the profile is steep.
    """
    out = np.asarray(xi)
    for _ in range(j):
        out = out * lam
    return out


def phi(family: CutoffFamily, j: int, xi) -> np.ndarray:
    if j < 0:
        raise DomainError("cutoff index must be nonnegative")
    return rho0(family, scale_pow(family.lam, j, xi))


def psi(family: CutoffFamily, j: int, xi) -> np.ndarray:
    if j == 0:
        return phi(family, 0, xi)
    return phi(family, j, xi) - phi(family, j - 1, xi)


def support_annulus(family: CutoffFamily, j: int = 1) -> tuple[float, float]:
    """Annulus ``R1 <= |xi| <= R2`` containing the support of psi_1."""
    if j != 1:
        raise DomainError("only the annulus of psi_1 is defined")
    return family.plateau, family.R_out / family.lam
