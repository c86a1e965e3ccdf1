"""Problem constants and the disc <-> half-line change of variables.

The weighted problem lives on the unit disc with energy weight
|log|x||^beta.  Substituting |x| = exp(-t/2) and rescaling by
alpha_beta^(1/(2 gamma)) maps radial functions on (0, 1] to profiles on
[0, inf); in these variables the exponential functional becomes
int_0^inf exp(psi^(2 gamma)(t) - t) dt and the weighted Dirichlet energy
becomes int_0^inf |psi'|^2 t^beta / (1 - beta) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .profiles import Profile1D, RadialFunction

#: Area of the unit disc; normalizes the disc-side exponential functional.
DISC_AREA = math.pi


@dataclass(frozen=True)
class WeightParams:
    """Fixed constants of the weighted problem for one exponent beta.

    gamma = 1/(1 - beta) and alpha_beta = 2*(2*pi*(1 - beta))^(1/(1 - beta));
    beta = 0 recovers gamma = 1 and the classical constant 4*pi.
    """

    beta: float
    gamma: float
    alpha_beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")
        if not math.isfinite(self.gamma) or self.gamma < 1.0:
            raise DomainError("gamma must be finite and >= 1")

    @property
    def reduced_scale(self) -> float:
        """alpha_beta^(1/(2 gamma)), the profile rescaling factor.

        Evaluated as 2^((1-beta)/2) * sqrt(2 pi (1-beta)), which stays
        accurate near beta = 1 where alpha_beta itself underflows.
        """
        return 2.0 ** (0.5 * (1.0 - self.beta)) * math.sqrt(
            2.0 * math.pi * (1.0 - self.beta)
        )


def make_weight_params(beta: float) -> WeightParams:
    """Constants for exponent beta in [0, 1)."""
    beta = float(beta)
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta}")
    gamma = 1.0 / (1.0 - beta)
    alpha = 2.0 * (2.0 * math.pi * (1.0 - beta)) ** gamma
    return WeightParams(beta=beta, gamma=gamma, alpha_beta=alpha)


def to_reduced(u: RadialFunction, p: WeightParams, boundary_tol: float = 1e-12) -> Profile1D:
    """Half-line profile psi(t) = alpha_beta^(1/(2 gamma)) * u(exp(-t/2)).

    The grid is induced from the sample radii via t = -2 log r, so the two
    representations share nodes and round trips are exact at nodes.
    """
    if abs(float(u.values[0])) > boundary_tol:
        raise DomainError("u(1) must vanish (beyond tolerance)")
    t = -2.0 * np.log(u.radii)
    t[0] = 0.0
    values = p.reduced_scale * u.values
    values[0] = 0.0
    return Profile1D(grid=t, values=values)


def from_reduced(psi: Profile1D, p: WeightParams) -> RadialFunction:
    """Radial samples u(r) = alpha_beta^(-1/(2 gamma)) * psi(-2 log r).

    Grid nodes with t below the float spacing of r = 1 (about 4e-16) map to
    the same radius and are dropped.
    """
    radii = np.exp(-0.5 * psi.grid)
    radii[0] = 1.0
    keep = np.empty(radii.size, dtype=bool)
    keep[0] = True
    keep[1:] = radii[1:] < np.minimum.accumulate(radii)[:-1]
    radii = radii[keep]
    values = psi.values[keep] / p.reduced_scale
    values[0] = 0.0
    return RadialFunction(radii=radii, values=values)
