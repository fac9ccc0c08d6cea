"""Foliated Dolbeault cohomology of the complex affine Reeb foliation, numerically."""

from .approximation import (CompactExhaustion, GridSpec, PolyInZ, delta_metric,
                            fundamental_grid, sup_seminorm, truncate_runge)
from .cutoffs import CutoffFamily, phi, psi, rho0, support_annulus
from .errors import (ConfigError, ConvergenceError, CoverageError, DomainError,
                     NotRemovableError, ObstructionError, ReebError, TruncationError)
from .geometry import (EquivariantFunction, FoliationParams, LeafwiseForm01, Point,
                       builtin_form, combine, eval_equivariant, fundamental_index, gamma_pow)
from .quadrature import (PolarQuadSpec, area_integral, cauchy_transform, contour_coefficient,
                         h_partial, taylor_coefficients)
from .solver import (SolveReport, SolverConfig, assemble_htilde, coboundary, decompose,
                     hartogs_extend, obstruction, solve_cohomological)
from .verify import ResidualBundle, dbar_fd, residual_report

__version__ = "0.1.0"
