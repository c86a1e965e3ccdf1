"""Randomized verification suites for the growth and tail inequalities.

Each suite draws independent instances from a seeded generator, evaluates
both sides of one inequality, and reports the worst signed margin
(lhs - rhs; positive means violated).  The CLI `bounds` subcommand and the
acceptance tests run these with >= 1000 trials per suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sp_optimize

from .core import WeightParams, make_weight_params
from .errors import DomainError
from .families import moser_profile
from .functionals import functional_i_interval, gamma_energy, gamma_energy_interval
from .inequalities import cc_tail_bound, holder_growth, weighted_tail_bound
from .profiles import GridSpec, Profile1D, make_graded_grid

#: Relative slack granted to quadrature/bound comparisons.
REL_SLACK = 1e-9


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    violations: int
    worst_margin: float

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def random_profile(
    rng: np.random.Generator,
    n_cells_range: tuple[int, int] = (32, 128),
    t_max_range: tuple[float, float] = (5.0, 40.0),
    nonneg: bool = False,
    target_energy: float | None = None,
    p: WeightParams | None = None,
) -> Profile1D:
    """Random piecewise-linear profile, optionally scaled to a target energy.

    target_energy refers to the weighted energy for the given params
    (unweighted energy when p is the beta = 0 instance).
    """
    n = int(rng.integers(n_cells_range[0], n_cells_range[1] + 1))
    t_max = float(rng.uniform(*t_max_range))
    grading = float(rng.uniform(1.0, 2.5))
    grid = make_graded_grid(t_max, n, grading)
    steps = rng.normal(0.0, 1.0, n) * np.sqrt(np.diff(grid))
    values = np.concatenate([[0.0], np.cumsum(steps)])
    if nonneg:
        values = np.abs(values)
        values[0] = 0.0
    psi = Profile1D(grid=grid, values=values)
    if target_energy is not None:
        energy = gamma_energy(psi, p if p is not None else make_weight_params(0.0))
        if energy <= 0.0:
            values = values.copy()
            values[1:] += 1e-3
            psi = Profile1D(grid=grid, values=values)
            energy = gamma_energy(psi, p if p is not None else make_weight_params(0.0))
        psi = psi.with_values(values * math.sqrt(target_energy / energy))
    return psi


def exp_linear_tail_integral(phi: Profile1D, c: float, a: float) -> float:
    """Exact int_a^inf exp(c phi(t) - t) dt for piecewise-linear phi.

    The exponent is linear on each cell, so every cell integrates in closed
    form; the constant tail contributes exp(c*plateau - max(a, t_max)).
    """
    if a < 0.0:
        raise DomainError("need a >= 0")
    lo = np.clip(phi.grid[:-1], a, phi.t_max)
    hi = np.clip(phi.grid[1:], a, phi.t_max)
    live = hi > lo
    slopes = phi.slopes[live]
    lo, hi = lo[live], hi[live]
    m = c * slopes - 1.0
    q = c * (phi.values[:-1][live] - slopes * phi.grid[:-1][live])
    out = np.empty_like(m)
    small = np.abs(m) < 1e-12
    # Sum exponents before exponentiating: the cell-end values c*phi - t are
    # bounded even when the split factors exp(q) * exp(m t) overflow.
    out[~small] = (
        np.exp(q[~small] + m[~small] * hi[~small])
        - np.exp(q[~small] + m[~small] * lo[~small])
    ) / m[~small]
    out[small] = np.exp(q[small] + m[small] * lo[small]) * (hi[small] - lo[small])
    total = float(np.sum(out))
    total += math.exp(c * phi.plateau - max(a, phi.t_max))
    return total


def _suite_holder(rng: np.random.Generator, trials: int) -> SuiteResult:
    worst = -math.inf
    violations = 0
    for _ in range(trials):
        beta = float(rng.uniform(0.0, 0.95))
        p = make_weight_params(beta)
        psi = random_profile(rng)
        a = float(rng.uniform(0.0, psi.t_max))
        t = float(rng.uniform(a, psi.t_max))
        lhs, rhs = holder_growth(psi, p, a, t)
        margin = lhs - rhs
        worst = max(worst, margin)
        if margin > REL_SLACK * (1.0 + abs(rhs)):
            violations += 1
        # Growth bound at the nodes (a = 0 endpoint case).
        energy = gamma_energy(psi, p)
        node_bound = math.sqrt(energy) * psi.grid ** (0.5 * (1.0 - beta))
        node_margin = float(np.max(psi.values - node_bound))
        worst = max(worst, node_margin)
        if node_margin > REL_SLACK * (1.0 + math.sqrt(energy)):
            violations += 1
    return SuiteResult("holder_growth", trials, violations, worst)


def _suite_cc_tail(rng: np.random.Generator, trials: int) -> SuiteResult:
    worst = -math.inf
    violations = 0
    p0 = make_weight_params(0.0)
    for _ in range(trials):
        delta = float(rng.uniform(0.05, 2.0))
        phi = random_profile(rng, target_energy=float(rng.uniform(0.3, 1.0)) * delta, p=p0)
        c = float(rng.uniform(0.05, 5.0))
        a = float(rng.uniform(0.0, 20.0))
        lhs = exp_linear_tail_integral(phi, c, a)
        rhs = cc_tail_bound(c, delta)
        margin = lhs - rhs
        worst = max(worst, margin)
        if margin > REL_SLACK * rhs:
            violations += 1
    return SuiteResult("cc_tail_bound", trials, violations, worst)


def _suite_weighted_tail(rng: np.random.Generator, trials: int) -> SuiteResult:
    worst = -math.inf
    violations = 0
    done = 0
    while done < trials:
        beta = float(rng.uniform(0.0, 0.9))
        p = make_weight_params(beta)
        psi = random_profile(
            rng, nonneg=True, target_energy=float(rng.uniform(0.3, 1.0)), p=p
        )
        # Choose a so the tail energy satisfies gamma*delta < 1.
        target_tail = float(rng.uniform(0.1, 0.9)) / p.gamma
        cell_energy = psi.slopes**2 * np.diff(psi.grid ** (beta + 1.0)) / (
            (beta + 1.0) * (1.0 - beta)
        )
        tail_cum = np.concatenate([np.cumsum(cell_energy[::-1])[::-1], [0.0]])
        idx = int(np.searchsorted(-tail_cum, -target_tail))
        a = float(psi.grid[min(max(idx, 1), psi.grid.size - 2)])
        delta = gamma_energy_interval(psi, p, a, math.inf)
        if p.gamma * delta >= 1.0 or a <= 0.0:
            continue
        lhs = functional_i_interval(psi, p, a, math.inf)
        rhs = weighted_tail_bound(psi.evaluate(a), delta, a, p)
        margin = lhs - rhs
        worst = max(worst, margin)
        if margin > REL_SLACK * rhs:
            violations += 1
        done += 1
    return SuiteResult("weighted_tail_bound", trials, violations, worst)


def _suite_wq(rng: np.random.Generator, trials: int) -> SuiteResult:
    """Tail-energy bound at the crossing point along the concentrating family."""
    worst = -math.inf
    violations = 0
    spec = GridSpec()
    for _ in range(trials):
        beta = float(rng.uniform(0.0, 0.8))
        p = make_weight_params(beta)
        k = float(10 ** rng.uniform(math.log10(4.0), 4.0))
        # Crossing point of t^2/k - t + 2 log t, bracketed in [1, k].
        g = lambda t: t * t / k - t + 2.0 * math.log(t)
        a = sp_optimize.brentq(g, 1.0, k, xtol=1e-12)
        psi = moser_profile(k, p, spec)
        delta = gamma_energy_interval(psi, p, a, math.inf)
        bound = 1.0 - (1.0 - 2.0 * math.log(a) / a) ** (1.0 / p.gamma)
        margin = delta - (bound + 1e-6)
        worst = max(worst, margin)
        if margin > 0.0:
            violations += 1
    return SuiteResult("wq_tail_energy", trials, violations, worst)


def _suite_elementary_power(rng: np.random.Generator, trials: int) -> SuiteResult:
    """(1 + g y)^p <= 1 + m^p y^p for m > g > 0, p in (1, 4], y >= y0(m, g, p)."""
    worst = -math.inf
    violations = 0
    ys = np.geomspace(1e-4, 1e8, 2400)
    for _ in range(trials):
        g = float(rng.uniform(0.05, 3.0))
        m = g * float(1.0 + rng.uniform(0.05, 2.0))
        pw = float(rng.uniform(1.0 + 1e-6, 4.0))
        with np.errstate(over="ignore"):
            lhs = (1.0 + g * ys) ** pw
            rhs = 1.0 + (m * ys) ** pw
        ok = lhs <= rhs * (1.0 + 1e-12)
        if not ok[-1]:
            violations += 1
            worst = max(worst, float((lhs[-1] - rhs[-1]) / rhs[-1]))
            continue
        bad = np.nonzero(~ok)[0]
        y0 = ys[bad[-1] + 1] if bad.size else ys[0]
        checks = 10 ** rng.uniform(math.log10(y0), 8.0, size=8)
        with np.errstate(over="ignore"):
            margin = float(
                np.max((1.0 + g * checks) ** pw - (1.0 + (m * checks) ** pw))
            )
        worst = max(worst, margin)
        if margin > 1e-9 * (1.0 + (m * float(np.max(checks))) ** pw):
            violations += 1
    return SuiteResult("elementary_power_growth", trials, violations, worst)


def _suite_elementary_concave(rng: np.random.Generator, trials: int) -> SuiteResult:
    """(1 - x)^mu >= 1 - (mu + 1) x on (0, x0(mu)] with x0 found by scan."""
    worst = -math.inf
    violations = 0
    xs = np.geomspace(1e-9, 1.0 - 1e-9, 2000)
    for _ in range(trials):
        mu = float(rng.uniform(1e-3, 5.0))
        ok = (1.0 - xs) ** mu >= 1.0 - (mu + 1.0) * xs - 1e-15
        bad = np.nonzero(~ok)[0]
        x0 = xs[bad[0] - 1] if bad.size else xs[-1]
        checks = 10 ** rng.uniform(-9.0, math.log10(x0), size=8)
        margin = float(np.max((1.0 - (mu + 1.0) * checks) - (1.0 - checks) ** mu))
        worst = max(worst, margin)
        if margin > 1e-12:
            violations += 1
    return SuiteResult("elementary_concave_lower", trials, violations, worst)


def run_inequality_suites(seed: int = 0, trials: int = 1000) -> dict[str, SuiteResult]:
    """Run every suite with independent substreams; see SuiteResult."""
    root = np.random.SeedSequence(seed)
    streams = [np.random.default_rng(s) for s in root.spawn(6)]
    suites = (
        _suite_holder,
        _suite_cc_tail,
        _suite_weighted_tail,
        _suite_wq,
        _suite_elementary_power,
        _suite_elementary_concave,
    )
    results = {}
    for fn, rng in zip(suites, streams):
        res = fn(rng, trials)
        results[res.name] = res
    return results
