"""Growth inequalities, tail bounds, and concentration diagnostics.

The quantities here revolve around the crossing point a: the first t >= 1
where |psi|^(2 gamma)(t) - t + 2 log t changes sign.  Left of a the
exponential integrand is dominated by 1/t^2 (head -> 1 along concentrating
families); right of a the tail is controlled by the weighted tail bound
exp(1 - a)/(1 - gamma delta) * exp(P + gamma P delta/(1 - gamma delta)) with
P = psi(a)^(2 gamma) and delta the tail energy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sp_optimize

from .core import WeightParams
from .errors import DomainError
from .functionals import (
    QuadratureConfig,
    abs_power,
    functional_i_interval,
    gamma_energy,
    gamma_energy_interval,
)
from .profiles import Profile1D

logger = logging.getLogger(__name__)

#: Concentration-level cap 1 + e, independent of beta.
CONCENTRATION_CAP = 1.0 + math.e


def concentration_level_cap() -> float:
    """Upper bound on the functional value along concentrating sequences."""
    return CONCENTRATION_CAP


def holder_growth(
    psi: Profile1D, p: WeightParams, a: float, t: float
) -> tuple[float, float]:
    """Both sides of the growth inequality on [a, t].

    Returns (lhs, rhs) with lhs = psi(t) - psi(a) and
    rhs = (Gamma on [a, t])^(1/2) * (t^(1-beta) - a^(1-beta))^(1/2);
    Cauchy-Schwarz guarantees lhs <= rhs.
    """
    if a < 0.0 or t < a:
        raise DomainError("need 0 <= a <= t")
    lhs = psi.evaluate(t) - psi.evaluate(a)
    energy = gamma_energy_interval(psi, p, a, t)
    width = max(t ** (1.0 - p.beta) - a ** (1.0 - p.beta), 0.0)
    rhs = math.sqrt(energy) * math.sqrt(width)
    return lhs, rhs


def cc_tail_bound(c: float, delta: float) -> float:
    """Tail bound exp(c^2 delta / 4 + 1) for unit-measure exponential tails.

    Valid for any phi with phi(0) = 0 and unweighted Dirichlet energy <= delta:
    int_a^inf exp(c phi(t) - t) dt <= exp(c^2 delta / 4 + 1), uniformly in a >= 0.
    """
    if not c > 0.0:
        raise DomainError("need c > 0")
    if not delta > 0.0:
        raise DomainError("need delta > 0")
    expo = c * c * delta / 4.0 + 1.0
    return math.inf if expo > 709.0 else math.exp(expo)


def weighted_tail_bound(
    phi_at_a: float, delta: float, a: float, p: WeightParams
) -> float:
    """Tail bound exp(1-a)/(1-gd) * exp(P + g P d/(1-gd)), P = phi(a)^(2 gamma).

    Applies to nonnegative profiles with total weighted energy at most 1 and
    tail energy delta on [a, inf) satisfying gamma*delta < 1.
    """
    if not a > 0.0:
        raise DomainError("need a > 0")
    if phi_at_a < 0.0:
        raise DomainError("need phi(a) >= 0")
    if delta < 0.0:
        raise DomainError("need delta >= 0")
    gd = p.gamma * delta
    if gd >= 1.0:
        raise DomainError(f"bound requires gamma*delta < 1, got {gd}")
    big_p = phi_at_a ** (2.0 * p.gamma)
    expo = 1.0 - a + big_p + p.gamma * big_p * delta / (1.0 - gd)
    if expo > 709.0:
        return math.inf
    return math.exp(expo) / (1.0 - gd)


def _crossing_g(psi: Profile1D, p: WeightParams, t: np.ndarray) -> np.ndarray:
    vals = np.interp(t, psi.grid, psi.values)
    return abs_power(vals, 2.0 * p.gamma) - t + 2.0 * np.log(t)


def crossing_point(
    psi: Profile1D,
    p: WeightParams,
    scan_step: float = 1e-2,
    g_tol: float = 1e-10,
) -> float | None:
    """First root in [1, t_max] of |psi|^(2 gamma)(t) - t + 2 log t.

    The sign function is negative on [0, 1) for feasible profiles, so the
    scan starts at 1; absence of a sign change is returned as None (the
    profile does not concentrate).  A grid scan brackets the first sign
    change, then bisection polishes the root to |g| <= g_tol.
    """
    if psi.t_max <= 1.0:
        return None
    ts = np.arange(1.0, psi.t_max + scan_step, scan_step)
    ts[-1] = min(ts[-1], psi.t_max)
    g = _crossing_g(psi, p, ts)
    if g[0] >= 0.0:
        return float(ts[0])
    pos = np.nonzero(g >= 0.0)[0]
    if pos.size == 0:
        top = float(np.max(g))
        if -1e-6 < top < 0.0:
            logger.info("crossing scan: tangency suspected (max g = %.3e)", top)
        return None
    hi_idx = int(pos[0])
    lo, hi = float(ts[hi_idx - 1]), float(ts[hi_idx])
    root = sp_optimize.brentq(
        lambda t: float(_crossing_g(psi, p, np.asarray(t))),
        lo,
        hi,
        xtol=1e-14,
        rtol=4.0 * np.finfo(float).eps,
    )
    residual = float(_crossing_g(psi, p, np.asarray(root)))
    if abs(residual) > g_tol:
        # Polish by bisection; brentq already gives near machine precision,
        # so this only guards pathological slopes.
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            val = float(_crossing_g(psi, p, np.asarray(mid)))
            if abs(val) <= g_tol:
                return mid
            if val < 0.0:
                lo = mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
    return float(root)


@dataclass(frozen=True)
class ConcentrationDiagnostics:
    """Head/tail split of the functional at the crossing point.

    Fields that require a crossing point are None when it is absent.
    k_quantity and tail_bound additionally require gamma*delta < 1.
    """

    crossing_a: float | None
    tail_energy_delta: float | None
    k_quantity: float | None
    head_integral: float
    tail_integral: float
    tail_bound: float | None
    gamma_m: float | None
    wq_bound: float | None

    def to_json_dict(self) -> dict:
        return {
            "crossing_a": self.crossing_a,
            "tail_energy_delta": self.tail_energy_delta,
            "k_quantity": self.k_quantity,
            "head_integral": self.head_integral,
            "tail_integral": self.tail_integral,
            "tail_bound": self.tail_bound,
            "gamma_m": self.gamma_m,
            "wq_bound": self.wq_bound,
        }


def diagnose(
    psi: Profile1D, p: WeightParams, q: QuadratureConfig | None = None
) -> ConcentrationDiagnostics:
    """Concentration diagnostics of a profile.

    With a crossing point a: delta is the tail energy on [a, inf),
    K = (P - a) + gamma P delta/(1 - gamma delta) with P = psi(a)^(2 gamma),
    and for unit-energy profiles delta is checked against the bound
    1 - (1 - 2 log a / a)^(1/gamma).
    """
    a = crossing_point(psi, p)
    if a is None:
        head = functional_i_interval(psi, p, 0.0, math.inf, q)
        return ConcentrationDiagnostics(
            crossing_a=None,
            tail_energy_delta=None,
            k_quantity=None,
            head_integral=head,
            tail_integral=0.0,
            tail_bound=None,
            gamma_m=None,
            wq_bound=None,
        )
    head = functional_i_interval(psi, p, 0.0, a, q)
    tail = functional_i_interval(psi, p, a, math.inf, q)
    delta = gamma_energy_interval(psi, p, a, math.inf)
    gd = p.gamma * delta
    gamma_m = 1.0 - gd
    big_p = float(abs_power(np.asarray(psi.evaluate(a)), 2.0 * p.gamma))
    k_quantity = None
    bound = None
    if gamma_m > 0.0:
        k_quantity = (big_p - a) + p.gamma * big_p * delta / gamma_m
        bound = weighted_tail_bound(psi.evaluate(a), delta, a, p)
    wq_bound = None
    total_energy = gamma_energy(psi, p)
    # Sampled unit-energy families carry O(1e-7) interpolation excess.
    if total_energy <= 1.0 + 1e-5:
        inner = 1.0 - 2.0 * math.log(a) / a
        if inner > 0.0:
            wq_bound = 1.0 - inner ** (1.0 / p.gamma)
            if delta > wq_bound + 1e-6:
                logger.warning(
                    "tail energy %.6g exceeds its crossing bound %.6g", delta, wq_bound
                )
    return ConcentrationDiagnostics(
        crossing_a=a,
        tail_energy_delta=delta,
        k_quantity=k_quantity,
        head_integral=head,
        tail_integral=tail,
        tail_bound=bound,
        gamma_m=gamma_m,
        wq_bound=wq_bound,
    )


def km_envelope(x: float, p: WeightParams) -> tuple[float, float]:
    """Envelope terms controlling K along concentrating sequences.

    Returns (term_log, term_linear) with q = 1 - (1 - 2 log x / x)^(1/gamma):
    term_log = log(x) * q and term_linear = -2 log(x) + gamma * x * q.
    Both vanish as x -> infinity.
    """
    if not x > math.e:
        raise DomainError("need x > e")
    y = 2.0 * math.log(x) / x
    if 1.0 - y <= 0.0:
        raise DomainError("need 2 log(x)/x < 1")
    # 1 - (1-y)^(1/gamma) via expm1/log1p to avoid cancellation for tiny y.
    q = -math.expm1(math.log1p(-y) / p.gamma)
    term_log = math.log(x) * q
    term_linear = -2.0 * math.log(x) + p.gamma * x * q
    return term_log, term_linear
