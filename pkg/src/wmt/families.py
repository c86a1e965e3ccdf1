"""Closed-form profile families and their exact values.

Two explicit families drive every cross-check:

* the concentrating family psi_k(t) = (min(t, k)/sqrt(k))^(1-beta), which has
  unit weighted energy for every k >= 1 and beta, and whose exponential
  functional reduces (independently of beta) to 1 + k int_0^1 e^{k(s^2-s)} ds;
* the Carleson-Chang test function f (linear / square-root / constant pieces)
  and its power phi = f^(1-beta), whose functional value is the beta-free
  constant e + 2 e^{-1} int_0^1 e^{s^2} ds and whose weighted energy is
  2^(beta-1) + (1-beta)/4 int_1^{e^2} (m+1)^beta m^(-beta-1) dm <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .core import WeightParams, make_weight_params
from .errors import DomainError
from .profiles import GridSpec, Profile1D, double_graded_segment

#: Breakpoints of the Carleson-Chang function: linear until 2, square root
#: until e^2 + 1, constant e beyond.
CC_BREAK = 2.0
CC_PLATEAU_START = math.e**2 + 1.0
CC_PLATEAU_VALUE = math.e

#: Grading exponents are capped to keep power-graded nodes representable.
_MAX_GRADING = 60.0


def _singular_grading(beta: float, base: float) -> float:
    # The profile behaves like t^(1-beta) near 0; the first-cell energy
    # error scales like (t_1)^(1-beta), so clustering must strengthen as
    # beta -> 1 to hold the quadrature error near 1e-7.
    return float(min(_MAX_GRADING, max(base, 3.2 / (1.0 - beta))))


def moser_reduced_values(t, k: float, p: WeightParams) -> np.ndarray:
    """psi_k(t) = (min(t, k)/sqrt(k))^(1-beta)."""
    t = np.asarray(t, dtype=float)
    return (np.minimum(t, k) / math.sqrt(k)) ** (1.0 - p.beta)


def moser_grid(k: float, p: WeightParams, spec: GridSpec | None = None) -> np.ndarray:
    """Grid for psi_k: both ends of [0, k] clustered, plus a tail segment.

    Clustering at 0 controls the energy of the singular-derivative region;
    clustering at the breakpoint k controls the exponential integral, whose
    integrand is O(1) there.
    """
    spec = spec or GridSpec()
    n_core = max(32, (2 * spec.n) // 3)
    n_tail = max(8, spec.n - n_core)
    core = double_graded_segment(
        0.0, k, n_core, g_left=_singular_grading(p.beta, spec.grading), g_right=6.0
    )
    tail = np.linspace(k, k + spec.tail_span, n_tail + 1)
    return np.concatenate([core, tail[1:]])


def moser_profile(k: float, p: WeightParams, spec: GridSpec | None = None) -> Profile1D:
    """Sampled psi_k on a grid containing the breakpoint t = k."""
    if not k >= 1.0:
        raise DomainError(f"concentration parameter k must be >= 1, got {k}")
    grid = moser_grid(k, p, spec)
    values = moser_reduced_values(grid, k, p)
    values[0] = 0.0
    return Profile1D(grid=grid, values=values)


def moser_value(k: float) -> float:
    """Exact functional value 1 + k int_0^1 e^{k(s^2 - s)} ds.

    The integrand is symmetric about s = 1/2 with endpoint mass, so the
    integral is taken as twice the adaptive quadrature over [0, 1/2].
    """
    if not k >= 1.0:
        raise DomainError(f"concentration parameter k must be >= 1, got {k}")
    val, _ = integrate.quad(
        lambda s: math.exp(k * (s * s - s)), 0.0, 0.5,
        epsabs=1e-13, epsrel=1e-13, limit=400,
    )
    return 1.0 + 2.0 * k * val


@dataclass(frozen=True)
class MoserFamily:
    """Concentrating family member with parameter k >= 1."""

    k: float
    params: WeightParams

    def __post_init__(self):
        if not self.k >= 1.0:
            raise DomainError(f"k must be >= 1, got {self.k}")

    def reduced_values(self, t) -> np.ndarray:
        return moser_reduced_values(t, self.k, self.params)

    def profile(self, spec: GridSpec | None = None) -> Profile1D:
        return moser_profile(self.k, self.params, spec)

    def value(self) -> float:
        return moser_value(self.k)


def cc_f_values(t) -> np.ndarray:
    """The Carleson-Chang function: t/2, then sqrt(t-1), then constant e."""
    t = np.asarray(t, dtype=float)
    return np.select(
        [t <= CC_BREAK, t <= CC_PLATEAU_START],
        [0.5 * t, np.sqrt(np.maximum(t - 1.0, 0.0))],
        default=CC_PLATEAU_VALUE,
    )


def cc_grid(p: WeightParams, spec: GridSpec | None = None) -> np.ndarray:
    """Grid containing both breakpoints, clustered at 0 and near the kinks."""
    spec = spec or GridSpec()
    n1 = max(32, (3 * spec.n) // 8)
    n2 = max(32, (3 * spec.n) // 8)
    n3 = max(8, spec.n - n1 - n2)
    seg1 = double_graded_segment(
        0.0, CC_BREAK, n1, g_left=_singular_grading(p.beta, spec.grading), g_right=3.0
    )
    seg2 = double_graded_segment(CC_BREAK, CC_PLATEAU_START, n2, g_left=3.0, g_right=3.0)
    seg3 = np.linspace(CC_PLATEAU_START, CC_PLATEAU_START + spec.tail_span, n3 + 1)
    return np.concatenate([seg1, seg2[1:], seg3[1:]])


def carleson_chang_f(spec: GridSpec | None = None) -> Profile1D:
    """Sampled f itself (the beta = 0 witness)."""
    grid = cc_grid(make_weight_params(0.0), spec)
    return Profile1D(grid=grid, values=cc_f_values(grid))


def cc_phi(p: WeightParams, spec: GridSpec | None = None) -> Profile1D:
    """Sampled phi = f^(1-beta); phi behaves like t^(1-beta) near 0."""
    grid = cc_grid(p, spec)
    values = cc_f_values(grid) ** (1.0 - p.beta)
    values[0] = 0.0
    return Profile1D(grid=grid, values=values)


class CcNorm(NamedTuple):
    i1: float
    i2: float
    total: float


def cc_weighted_norm(p: WeightParams) -> CcNorm:
    """Weighted energy of phi = f^(1-beta), split at the first breakpoint.

    i1 = 2^(beta-1) in closed form; i2 by adaptive quadrature of
    (1-beta)/4 int_1^{e^2} (m+1)^beta m^(-beta-1) dm.  total <= 1 for every
    beta in [0, 1), with equality at beta = 0.
    """
    b = p.beta
    i1 = 2.0 ** (b - 1.0)
    integral, _ = integrate.quad(
        lambda m: (m + 1.0) ** b / m ** (b + 1.0), 1.0, math.e**2,
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    i2 = 0.25 * (1.0 - b) * integral
    return CcNorm(i1=i1, i2=i2, total=i1 + i2)


@dataclass(frozen=True)
class CarlesonChangFunction:
    """phi = f^(1-beta) with its breakpoints and plateau value."""

    params: WeightParams
    breakpoints: tuple[float, float, float] = (0.0, CC_BREAK, CC_PLATEAU_START)

    def profile(self, spec: GridSpec | None = None) -> Profile1D:
        return cc_phi(self.params, spec)

    def plateau_value(self) -> float:
        return CC_PLATEAU_VALUE ** (1.0 - self.params.beta)
