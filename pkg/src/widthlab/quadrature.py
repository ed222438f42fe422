"""Inner products and norms in L2(mu) via probability-normalized grids.

Supported measures are the uniform distribution on ``[-1,1]^d`` and the
standard Gaussian on ``R^d``; schemes are tensor-product Gauss rules
(Legendre for the cube, Hermite for the Gaussian) and seeded Monte Carlo.
All weights sum to 1 so that ``inner_product`` is literally an expectation,
matching the analysis this package verifies (no stray ``2^d`` factors).

Function handles are deterministic callables mapping points to reals.  They
may be vectorized (``(n, d) -> (n,)``); scalar-only callables are looped over
rows transparently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caps import active_cap
from .errors import (
    CapExceeded,
    DimensionMismatch,
    ParameterOutOfRange,
    UnsupportedCombination,
    WrongMeasure,
)
from .lattice import MultiIndex
from .trig import eval_T

UNIFORM_CUBE = "uniform_cube"
GAUSSIAN = "gaussian"
TENSOR_GAUSS = "tensor_gauss"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class QuadratureSpec:
    """Declarative description of a grid; hashable so results can cite it."""

    measure: str
    scheme: str
    dimension: int
    nodes_per_dim: int | None = None
    sample_count: int | None = None
    seed: int | tuple[int, ...] | None = None

    def label(self) -> str:
        if self.scheme == TENSOR_GAUSS:
            return f"{self.measure}:tensor_gauss({self.nodes_per_dim})^{self.dimension}"
        return f"{self.measure}:monte_carlo({self.sample_count},seed={self.seed})^{self.dimension}"


@dataclass(frozen=True)
class Grid:
    """Realized nodes/weights for a :class:`QuadratureSpec`."""

    spec: QuadratureSpec
    nodes: np.ndarray  # (n, d)
    weights: np.ndarray  # (n,), sums to 1

    @property
    def dimension(self) -> int:
        return self.spec.dimension


def _gauss_1d(measure: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    if measure == UNIFORM_CUBE:
        x, w = np.polynomial.legendre.leggauss(n)
        return x, w / 2.0
    # standard normal: substitute x = sqrt(2) t in the physicists' rule
    t, w = np.polynomial.hermite.hermgauss(n)
    return math.sqrt(2.0) * t, w / math.sqrt(math.pi)


def make_grid(spec: QuadratureSpec, cap: int | None = None) -> Grid:
    """Materialize the nodes and weights for ``spec``.

    Raises
    ------
    UnsupportedCombination
        Unknown measure/scheme names or missing scheme parameters.
    CapExceeded
        Tensor grids with ``nodes_per_dim^d`` beyond the active cap.
    """
    if spec.measure not in (UNIFORM_CUBE, GAUSSIAN):
        raise UnsupportedCombination(f"unknown measure {spec.measure!r}")
    if spec.dimension < 1:
        raise ParameterOutOfRange(f"dimension must be >= 1, got {spec.dimension}")
    d = spec.dimension

    if spec.scheme == TENSOR_GAUSS:
        n = spec.nodes_per_dim
        if n is None or n < 1:
            raise UnsupportedCombination("tensor_gauss requires nodes_per_dim >= 1")
        if n**d > active_cap(cap):
            raise CapExceeded(f"tensor grid {n}^{d} exceeds cap {active_cap(cap)}")
        x1, w1 = _gauss_1d(spec.measure, n)
        mesh = np.meshgrid(*([x1] * d), indexing="ij")
        nodes = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        wmesh = np.meshgrid(*([w1] * d), indexing="ij")
        weights = np.ones(n**d)
        for wm in wmesh:
            weights = weights * wm.reshape(-1)
    elif spec.scheme == MONTE_CARLO:
        if spec.sample_count is None or spec.sample_count < 1:
            raise UnsupportedCombination("monte_carlo requires sample_count >= 1")
        if spec.seed is None:
            raise UnsupportedCombination("monte_carlo requires an explicit seed")
        if spec.sample_count > active_cap(cap):
            raise CapExceeded(f"sample count {spec.sample_count} exceeds cap")
        rng = np.random.default_rng(spec.seed)
        if spec.measure == UNIFORM_CUBE:
            nodes = rng.uniform(-1.0, 1.0, size=(spec.sample_count, d))
        else:
            nodes = rng.standard_normal(size=(spec.sample_count, d))
        weights = np.full(spec.sample_count, 1.0 / spec.sample_count)
    else:
        raise UnsupportedCombination(f"unknown scheme {spec.scheme!r}")

    nodes.setflags(write=False)
    weights.setflags(write=False)
    assert abs(weights.sum() - 1.0) <= 1e-12
    return Grid(spec=spec, nodes=nodes, weights=weights)


def tensor_gauss_grid(measure: str, d: int, nodes_per_dim: int, cap=None) -> Grid:
    """Convenience constructor for the common tensor-product case."""
    return make_grid(
        QuadratureSpec(measure, TENSOR_GAUSS, d, nodes_per_dim=nodes_per_dim), cap=cap
    )


def evaluate_on(f, nodes: np.ndarray) -> np.ndarray:
    """Evaluate a function handle on an ``(n, d)`` node array.

    Tries the vectorized calling convention first and falls back to a row
    loop for scalar-only callables (including constants).
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.shape[0]
    try:
        vals = np.asarray(f(nodes), dtype=float)
    except Exception:
        vals = None
    if vals is not None and vals.shape == (n,):
        return vals
    return np.array([float(f(p)) for p in nodes], dtype=float)


def inner_product(f, g, grid: Grid) -> float:
    """``<f, g>_mu = E[f g]`` approximated on the grid."""
    fv = evaluate_on(f, grid.nodes)
    gv = evaluate_on(g, grid.nodes)
    return float(np.sum(grid.weights * fv * gv))


def l2_norm(f, grid: Grid) -> float:
    fv = evaluate_on(f, grid.nodes)
    return float(np.sqrt(np.sum(grid.weights * fv * fv)))


def l2_error(f, g, grid: Grid) -> float:
    """``||f - g||_mu`` on the grid."""
    fv = evaluate_on(f, grid.nodes)
    gv = evaluate_on(g, grid.nodes)
    diff = fv - gv
    return float(np.sqrt(np.sum(grid.weights * diff * diff)))


def trig_coefficient(f, K: MultiIndex, grid: Grid) -> float:
    """Expansion coefficient ``<f, T_K>`` on the uniform cube.

    Raises
    ------
    WrongMeasure
        The trigonometric system is orthonormal only for the cube measure.
    """
    if grid.spec.measure != UNIFORM_CUBE:
        raise WrongMeasure("trig coefficients require the uniform cube measure")
    if len(K) != grid.dimension:
        raise DimensionMismatch(f"index {K} vs grid dimension {grid.dimension}")
    fv = evaluate_on(f, grid.nodes)
    tv = np.asarray(eval_T(K, grid.nodes))
    return float(np.sum(grid.weights * fv * tv))
