"""Covering-space model of the affine Reeb foliation.

Points of the covering space are pairs ``(z, t)`` with ``z`` complex (the leaf
coordinate) and ``t`` real (the transverse coordinate), ``(z, t) != (0, 0)``.
The deck transformation is ``gamma(z, t) = (lam * z, lam * t)``.

Objects on the quotient are represented as equivariant functions: an
evaluator defined on the fundamental annulus ``lam < rho <= 1`` (with
``rho = sqrt(|z|^2 + t^2)``) together with an integer weight ``w``.  The
extension to the whole covering space is forced by
``lam**w * F(lam z, lam t) = F(z, t)``.

All evaluators in this package take numpy arrays ``z`` (complex) and ``t``
(real) that broadcast against each other, and return complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]

DEFAULT_LAMBDA = 0.5


@dataclass(frozen=True)
class FoliationParams:
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise DomainError(f"contraction ratio must lie in (0, 1), got {self.lam}")


@dataclass(frozen=True)
class Point:
    z: complex
    t: float

    @property
    def rho(self) -> float:
        return float(np.hypot(abs(self.z), self.t))


def rho(z, t):
    """Euclidean norm sqrt(|z|^2 + t^2), vectorized."""
    return np.hypot(np.abs(z), t)


def gamma_pow(p: Point, k: int, params: FoliationParams) -> Point:
    """Apply the deck transformation ``k`` times (``k`` may be negative)."""
    s = params.lam ** k
    return Point(complex(p.z) * s, float(p.t) * s)


def _fundamental_index(z, t, lam):
    r = rho(z, t)
    if np.any(r == 0):
        raise DomainError("(0, 0) is not a point of the covering space")
    log_lam = np.log(lam)
    k = np.ceil(np.log(r) / -log_lam).astype(np.int64)
    # fix round-off at the annulus boundaries
    for _ in range(2):
        scaled = r * lam ** k.astype(float)
        k = np.where(scaled > 1.0, k + 1, k)
        scaled = r * lam ** k.astype(float)
        k = np.where(scaled <= lam, k - 1, k)
    return k


def fundamental_index(p: Point, params: FoliationParams) -> int:
    """The unique ``k`` with ``lam < rho(gamma^k p) <= 1``."""
    return int(_fundamental_index(np.asarray(p.z), np.asarray(p.t, float), params.lam))


def eval_equivariant(F: "EquivariantFunction", p: Point, params: FoliationParams) -> complex:
    """Value of the extended function at one point."""
    return complex(F.at(np.asarray(p.z, complex), np.asarray(p.t, float), params))


def fundamental_indices(z, t, params: FoliationParams) -> np.ndarray:
    """Vectorized :func:`fundamental_index`."""
    z = np.asarray(z, complex)
    t = np.asarray(t, float)
    return _fundamental_index(z, t, params.lam)


@dataclass(frozen=True)
class EquivariantFunction:
    """A gamma-equivariant scalar field of integer weight.

    ``fund_eval(z, t)`` only needs to be correct on the fundamental annulus;
    values elsewhere are produced by :meth:`at` from the functional relation.
    """

    weight: int
    fund_eval: Evaluator = field(compare=False)
    name: str = "F"

    def __post_init__(self):
        if self.weight < 0:
            raise DomainError("weight must be a nonnegative integer")

    def at(self, z, t, params: FoliationParams) -> np.ndarray:
        z, t = np.broadcast_arrays(np.asarray(z, complex), np.asarray(t, float))
        if np.any((z == 0) & (t == 0)):
            if self.weight > 0:
                raise DomainError(
                    f"weight-{self.weight} function {self.name!r} is unbounded near (0, 0)"
                )
            raise DomainError("(0, 0) is not a point of the covering space")
        k = _fundamental_index(z, t, params.lam)
        s = params.lam ** k.astype(float)
        return np.asarray(s ** self.weight * self.fund_eval(z * s, t * s), complex)

    def evaluator(self, params: FoliationParams) -> Evaluator:
        return lambda z, t: self.at(z, t, params)


@dataclass(frozen=True)
class LeafwiseForm01:
    """The invariant leafwise (0,1)-form ``coeff(z, t) dzbar``."""

    coeff: EquivariantFunction

    def __post_init__(self):
        if self.coeff.weight != 1:
            raise DomainError("a (0,1)-form coefficient must have weight 1")

    @property
    def name(self) -> str:
        return self.coeff.name

    def at(self, z, t, params: FoliationParams) -> np.ndarray:
        return self.coeff.at(z, t, params)

    def evaluator(self, params: FoliationParams) -> Evaluator:
        return self.coeff.evaluator(params)

    def __add__(self, other: "LeafwiseForm01") -> "LeafwiseForm01":
        return combine([(1.0, self), (1.0, other)])

    def __sub__(self, other: "LeafwiseForm01") -> "LeafwiseForm01":
        return combine([(1.0, self), (-1.0, other)])

    def __rmul__(self, c: complex) -> "LeafwiseForm01":
        return combine([(c, self)])


def combine(terms) -> LeafwiseForm01:
    """Linear combination ``sum c_i * form_i`` of (0,1)-forms."""
    terms = [(complex(c), as_form(f)) for c, f in terms]

    def fund(z, t):
        out = np.zeros(np.broadcast(z, t).shape, complex)
        for c, f in terms:
            if c != 0:
                out = out + c * f.coeff.fund_eval(z, t)
        return out

    name = " + ".join(f"{_fmt_scalar(c)}*{f.name}" for c, f in terms) or "0"
    return LeafwiseForm01(EquivariantFunction(1, fund, name))


def _fmt_scalar(c: complex) -> str:
    return f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}j)"


# built-in catalogue --------------------------------------------------------

def _omega0(z, t):
    return z / (z * np.conj(z) + t * t)


def _a(z, t):
    return 1.0 / np.sqrt((z * np.conj(z)).real + t * t) + 0j


def _g0(z, t):
    zz = (z * np.conj(z)).real
    return zz / (zz + t * t) + 0j


def _exact_g0(z, t):
    zz = (z * np.conj(z)).real
    return z * t * t / (zz + t * t) ** 2


def _zero(z, t):
    return np.zeros(np.broadcast(z, t).shape, complex)


_CATALOGUE = {
    "omega0": lambda: LeafwiseForm01(EquivariantFunction(1, _omega0, "omega0")),
    "exact_g0": lambda: LeafwiseForm01(EquivariantFunction(1, _exact_g0, "exact_g0")),
    "a": lambda: EquivariantFunction(1, _a, "a"),
    "g0": lambda: EquivariantFunction(0, _g0, "g0"),
    "zero": lambda: LeafwiseForm01(EquivariantFunction(1, _zero, "zero")),
}


def builtin_names() -> list[str]:
    return sorted(_CATALOGUE)


def builtin_form(name: str):
    """Look up a catalogue object by name.

    ``omega0`` and ``exact_g0`` (= dbar of ``g0``) are (0,1)-forms; ``a`` is the
    weight-1 function ``1/rho`` and ``g0 = |z|^2 / rho^2`` is weight 0.
    """
    try:
        return _CATALOGUE[name]()
    except KeyError:
        raise DomainError(
            f"unknown built-in {name!r}; available: {', '.join(builtin_names())}"
        ) from None


def as_form(obj) -> LeafwiseForm01:
    """Accept a form or a weight-1 function and return a form."""
    if isinstance(obj, LeafwiseForm01):
        return obj
    if isinstance(obj, EquivariantFunction):
        return LeafwiseForm01(obj)
    raise TypeError(f"cannot interpret {obj!r} as a (0,1)-form")
