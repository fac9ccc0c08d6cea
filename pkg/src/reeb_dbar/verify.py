"""Finite-difference Wirtinger derivatives and residual bundles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .geometry import FoliationParams, LeafwiseForm01, Point

DEFAULT_STEP = 1e-4


def dbar_fd_array(h: Callable, z, t, step: float = DEFAULT_STEP) -> np.ndarray:
    """Central-difference ``dh/dzbar = (h_x + i h_y) / 2`` at many points, one batched call of ``h``."""
    if not step > 0:
        raise DomainError("finite-difference step must be positive")
    z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
    offsets = np.array([step, -step, 1j * step, -1j * step])
    zs = z[None, ...] + offsets.reshape((4,) + (1,) * z.ndim)
    ts = np.broadcast_to(t, zs.shape)
    if np.any((zs == 0) & (ts == 0)):
        raise DomainError("finite-difference stencil touches (0, 0)")
    vals = np.asarray(h(zs, ts), complex)
    dx = (vals[0] - vals[1]) / (2 * step)
    dy = (vals[2] - vals[3]) / (2 * step)
    return 0.5 * (dx + 1j * dy)


def dbar_fd(h: Callable, p: Point, step: float = DEFAULT_STEP) -> complex:
    """Central-difference Wirtinger derivative ``dh/dzbar`` at one point."""
    return complex(dbar_fd_array(h, np.asarray(p.z, complex), np.asarray(p.t, float), step))


@dataclass(frozen=True)
class ResidualBundle:
    pde: float
    invariance: float
    holo: float
    grid: str

    def __post_init__(self):
        if min(self.pde, self.invariance, self.holo) < 0:
            raise DomainError("residuals are nonnegative")


def residual_fields(f: LeafwiseForm01, h: Callable, grid, params: FoliationParams,
                    step: float = DEFAULT_STEP) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise ``|dbar h - f|`` and ``|h o gamma - h|`` on the grid."""
    z = np.asarray(grid.z, complex)
    t = np.asarray(grid.t, float)
    if z.size == 0:
        raise DomainError("residuals over an empty grid")
    lam = params.lam
    pde = np.abs(dbar_fd_array(h, z, t, step) - f.at(z, t, params))
    # one batched call for h(p) and h(gamma p)
    both = np.asarray(h(np.stack([z, lam * z]), np.stack([t, lam * t])), complex)
    return pde, np.abs(both[1] - both[0])


def residual_report(f: LeafwiseForm01, h: Callable, grid, params: FoliationParams,
                    H: Callable | None = None, step: float = DEFAULT_STEP) -> ResidualBundle:
    """Suprema over ``grid`` of ``|dbar h - f|``, ``|h o gamma - h|`` and (if given) ``|dbar H|``."""
    pde, inv = residual_fields(f, h, grid, params, step)
    holo = np.abs(dbar_fd_array(H, grid.z, grid.t, step)) if H is not None else np.zeros(1)
    label = getattr(grid, "label", "") or f"{np.size(grid.z)} points"
    return ResidualBundle(float(pde.max()), float(inv.max()), float(holo.max()), label)
