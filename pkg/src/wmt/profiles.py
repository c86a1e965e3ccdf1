"""Piecewise-linear half-line profiles and sampled radial functions.

``Profile1D`` is the working representation throughout: nodal values on a
strictly increasing grid starting at t = 0, linear interpolation between
nodes, and a constant extension to the right of the last node.  The constant
tail means the derivative vanishes there, so the tail contributes nothing to
the weighted energy and its exponential integral has a closed form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError
from .serialize import dump_to

TAIL_CONSTANT = "constant"


def _readonly(x) -> np.ndarray:
    arr = np.array(x, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Profile1D:
    """Piecewise-linear profile psi(t) on [0, t_max], constant beyond.

    Invariants: grid strictly increasing with t_0 = 0, psi(0) = 0 exactly,
    all values finite.
    """

    grid: np.ndarray
    values: np.ndarray
    tail: str = TAIL_CONSTANT

    def __post_init__(self):
        grid = _readonly(self.grid)
        values = _readonly(self.values)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.tail != TAIL_CONSTANT:
            raise DomainError(f"unsupported tail rule: {self.tail!r}")
        if grid.ndim != 1 or grid.size < 2:
            raise DomainError("grid must be 1-D with at least two nodes")
        if values.shape != grid.shape:
            raise DomainError("grid and values must have equal length")
        if grid[0] != 0.0:
            raise DomainError("grid must start at t = 0")
        if not np.all(np.diff(grid) > 0.0):
            raise DomainError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("profile values must be finite")
        if values[0] != 0.0:
            raise DomainError("profile must vanish at t = 0")

    @property
    def n_cells(self) -> int:
        return self.grid.size - 1

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])

    @property
    def plateau(self) -> float:
        """Constant value taken for t >= t_max."""
        return float(self.values[-1])

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.grid)

    def evaluate(self, t):
        """Interpolate at t (scalar or array); constant for t > t_max."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0):
            raise DomainError("profile is defined for t >= 0 only")
        out = np.interp(t_arr, self.grid, self.values)
        if t_arr.ndim == 0:
            return float(out)
        return out

    def cell_slope(self, i: int) -> float:
        """Slope (psi_{i+1} - psi_i)/(t_{i+1} - t_i) of cell i."""
        if not 0 <= i < self.n_cells:
            raise IndexError(f"cell index {i} out of range [0, {self.n_cells})")
        return float(
            (self.values[i + 1] - self.values[i]) / (self.grid[i + 1] - self.grid[i])
        )

    def with_values(self, values) -> "Profile1D":
        return Profile1D(grid=self.grid, values=values)


@dataclass(frozen=True)
class RadialFunction:
    """Radial samples u(r) on (0, 1], radii strictly decreasing from r = 1.

    Invariants: u(1) = 0, radii in (0, 1], values finite.
    """

    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = _readonly(self.radii)
        values = _readonly(self.values)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        if radii.ndim != 1 or radii.size < 2 or values.shape != radii.shape:
            raise DomainError("radii and values must be 1-D of equal length >= 2")
        if radii[0] != 1.0:
            raise DomainError("radii must start at r = 1")
        if not np.all(np.diff(radii) < 0.0):
            raise DomainError("radii must be strictly decreasing")
        if radii[-1] <= 0.0:
            raise DomainError("radii must stay positive")
        if not np.all(np.isfinite(values)):
            raise DomainError("values must be finite")
        if abs(values[0]) > 1e-12:
            raise DomainError("boundary condition u(1) = 0 violated")

    @property
    def n_cells(self) -> int:
        return self.radii.size - 1


def make_graded_grid(t_max: float, n: int, grading: float = 1.0) -> np.ndarray:
    """Power-graded nodes t_i = t_max * (i/n)^grading, i = 0..n.

    grading > 1 clusters nodes near t = 0 where the weight t^beta has an
    unbounded derivative.
    """
    if not (np.isfinite(t_max) and t_max > 0.0):
        raise DomainError(f"t_max must be positive and finite, got {t_max}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not (np.isfinite(grading) and grading >= 1.0):
        raise DomainError(f"grading must be >= 1, got {grading}")
    s = np.arange(int(n) + 1, dtype=float) / float(n)
    nodes = t_max * s**grading
    nodes[0] = 0.0
    nodes[-1] = t_max
    if not np.all(np.diff(nodes) > 0.0):
        raise DomainError("grading too strong for this n: nodes collapsed")
    return nodes


def double_graded_segment(
    a: float, b: float, n: int, g_left: float = 1.0, g_right: float = 1.0
) -> np.ndarray:
    """Nodes on [a, b] clustered toward both endpoints.

    The segment is split at its midpoint; each half is power-graded toward
    its outer end (exponents g_left / g_right).
    """
    if not b > a:
        raise DomainError("need b > a")
    if n < 2:
        raise DomainError("need at least two cells")
    if min(g_left, g_right) < 1.0:
        raise DomainError("grading exponents must be >= 1")
    nl = n // 2
    nr = n - nl
    mid = 0.5 * (a + b)
    sl = np.arange(nl + 1, dtype=float) / nl
    left = a + (mid - a) * sl**g_left
    sr = np.arange(nr + 1, dtype=float) / nr
    right = b - (b - a) * 0.5 * (1.0 - sr) ** g_right
    left[0], left[-1] = a, mid
    right[0], right[-1] = mid, b
    # Offsets below the float spacing of an endpoint collapse onto it;
    # drop the duplicates rather than fail.
    nodes = np.unique(np.concatenate([left, right[1:]]))
    if nodes.size < 3:
        raise DomainError("grading too strong for this n: nodes collapsed")
    return nodes


def refine_midpoints(psi: Profile1D) -> Profile1D:
    """Insert cell midpoints; represents the same piecewise-linear function.

    Midpoints of cells at the float-resolution limit coincide with a node
    and are dropped.
    """
    mids = 0.5 * (psi.grid[:-1] + psi.grid[1:])
    grid = np.unique(np.concatenate([psi.grid, mids]))
    return Profile1D(grid=grid, values=psi.evaluate(grid))


def resample(psi: Profile1D, grid: np.ndarray) -> Profile1D:
    """Re-sample the profile (with its tail rule) onto a new grid."""
    return Profile1D(grid=grid, values=psi.evaluate(np.asarray(grid, dtype=float)))


@dataclass(frozen=True)
class GridSpec:
    """Node budget and clustering strength for family-profile grids.

    tail_span is the length of the constant-value segment kept on the grid
    past a family's last breakpoint (beyond it the tail is analytic).
    """

    n: int = 16384
    grading: float = 8.0
    tail_span: float = 45.0

    def __post_init__(self):
        if self.n < 16:
            raise DomainError("grid spec needs n >= 16")
        if self.grading < 1.0:
            raise DomainError("grading must be >= 1")
        if not self.tail_span > 0.0:
            raise DomainError("tail_span must be positive")


# --- JSON document: {"beta": _, "grid": [...], "values": [...], "tail": "constant"} ---


def profile_to_json_dict(psi: Profile1D, beta: float) -> dict:
    return {
        "beta": float(beta),
        "grid": psi.grid,
        "values": psi.values,
        "tail": psi.tail,
    }


def profile_from_json_dict(doc) -> tuple[Profile1D, float]:
    if not isinstance(doc, dict):
        raise DomainError("profile document must be a JSON object")
    missing = {"beta", "grid", "values", "tail"} - set(doc)
    if missing:
        raise DomainError(f"profile document missing keys: {sorted(missing)}")
    beta = doc["beta"]
    if not isinstance(beta, (int, float)) or not 0.0 <= float(beta) < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta!r}")
    if doc["tail"] != TAIL_CONSTANT:
        raise DomainError(f"unsupported tail rule: {doc['tail']!r}")
    try:
        psi = Profile1D(grid=np.asarray(doc["grid"], dtype=float),
                        values=np.asarray(doc["values"], dtype=float))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"invalid profile document: {exc}") from exc
    return psi, float(beta)


def save_profile(psi: Profile1D, beta: float, path: str | Path) -> None:
    dump_to(path, profile_to_json_dict(psi, beta))


def load_profile(path: str | Path) -> tuple[Profile1D, float]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DomainError(f"not valid JSON: {path}") from exc
    return profile_from_json_dict(doc)
