"""Lower-bound experiments for random-feature spans.

The core quantity: given a family ``phi_1..phi_N`` of (near-)orthonormal
functions and ``r`` random features, the average squared projection residual
``(1/N) sum_i (|phi_i|^2 - |Pi phi_i|^2)`` is at least ``1 - r(1+kappa)/N``
in expectation, where ``kappa`` is the family's coherence.  Hard families
realizing this on the cube are trig basis slices (lattice balls and the
symmetric sine family), with an explicit scaled sine as the single hard
function; a greedily packed family of ridge sines plays the same role in
Gaussian space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    NotUnitNorm,
    PackingFailed,
    ParameterOutOfRange,
    WrongMeasure,
)
from .approx import c_ks
from .fitter import _design_matrix, _weighted_lstsq
from .lattice import MultiIndex, enumerate_ball
from .quadrature import GAUSSIAN, Grid, evaluate_on
from .trig import SQRT2, eval_T


@dataclass(frozen=True)
class FunctionFamily:
    """Labeled function handles with declared/measured orthogonality data."""

    labels: list
    members: list[Callable]
    dimension: int
    declared_orthonormal: bool = False
    coherence: float | None = None

    def __post_init__(self):
        if len(self.labels) != len(self.members):
            raise ParameterOutOfRange("one label per member required")
        if self.coherence is not None and self.coherence < 0:
            raise ParameterOutOfRange(f"coherence must be >= 0, got {self.coherence}")

    def __len__(self) -> int:
        return len(self.members)


def _value_matrix(family: FunctionFamily, grid: Grid) -> np.ndarray:
    return np.column_stack([evaluate_on(m, grid.nodes) for m in family.members])


def _gram(family: FunctionFamily, grid: Grid) -> np.ndarray:
    vals = _value_matrix(family, grid)
    return vals.T @ (grid.weights[:, None] * vals)


def coherence(family: FunctionFamily, grid: Grid) -> float:
    """Root of the sum of squared off-diagonal Gram entries, on the grid.

    Zero for orthogonal families; requires unit-norm members (within 1e-6).
    """
    gram = _gram(family, grid)
    if np.max(np.abs(np.diag(gram) - 1.0)) > 1e-6:
        raise NotUnitNorm("family members must have unit grid norm for coherence")
    off = gram - np.diag(np.diag(gram))
    return float(np.sqrt(np.sum(off**2)))


def randict_bound(r: int, N: int, kappa: float) -> float:
    """Expected-average-residual lower bound ``1 - r(1+kappa)/N``.

    May be negative, in which case it is vacuous but still valid.
    """
    if N < 1 or r < 0 or kappa < 0:
        raise ParameterOutOfRange("need N >= 1, r >= 0, kappa >= 0")
    return 1.0 - r * (1.0 + kappa) / N


@dataclass(frozen=True)
class ProjectionReport:
    """Squared projection residuals of each family member on a feature span."""

    labels: list
    residuals: np.ndarray
    mean_residual: float
    r: int
    N: int
    bound: float

    def to_json_dict(self) -> dict:
        return {
            "labels": [list(l) if isinstance(l, tuple) else l for l in self.labels],
            "residuals": [float(v) for v in self.residuals],
            "mean_residual": self.mean_residual,
            "r": self.r, "N": self.N, "bound": self.bound,
        }


def projection_residuals(features, family: FunctionFamily, grid: Grid,
                         rcond: float = 1e-10) -> ProjectionReport:
    """Residuals ``|phi_i|^2 - |Pi phi_i|^2`` for every member at once.

    One multi-right-hand-side least squares against the feature design matrix
    gives exactly the per-member ``fit_span`` residuals; tiny negative values
    from grid noise are clipped to zero.  ``r = 0`` returns the squared
    member norms.
    """
    targets = _value_matrix(family, grid)
    if len(features) == 0:
        residuals = np.sum(grid.weights[:, None] * targets**2, axis=0)
    else:
        design = _design_matrix(features, grid.nodes)
        _, norms = _weighted_lstsq(design, targets, grid.weights, rcond)
        residuals = norms**2
    residuals = np.maximum(residuals, 0.0)
    kappa = family.coherence
    if kappa is None:
        kappa = coherence(family, grid)
    return ProjectionReport(
        labels=list(family.labels), residuals=residuals,
        mean_residual=float(np.mean(residuals)), r=len(features), N=len(family),
        bound=randict_bound(len(features), len(family), kappa),
    )


def check_boas_bellman(g, family: FunctionFamily, grid: Grid) -> tuple[float, float]:
    """Measured (lhs, rhs) of ``sum_i <g, phi_i>^2 <= |g|^2 (max |phi_i|^2 + kappa)``.

    Works for non-unit members: norms and off-diagonal coherence are taken
    from the measured Gram matrix.
    """
    vals = _value_matrix(family, grid)
    g_vals = evaluate_on(g, grid.nodes)
    inner = vals.T @ (grid.weights * g_vals)
    lhs = float(np.sum(inner**2))
    gram = vals.T @ (grid.weights[:, None] * vals)
    off = gram - np.diag(np.diag(gram))
    kappa = float(np.sqrt(np.sum(off**2)))
    g_norm_sq = float(np.sum(grid.weights * g_vals**2))
    rhs = g_norm_sq * (float(np.max(np.diag(gram))) + kappa)
    return lhs, rhs


def _basis_member(K: MultiIndex) -> Callable:
    return lambda nodes, _K=K: eval_T(_K, nodes)


def hard_family_ball(k: float, d: int, cap=None) -> FunctionFamily:
    """The orthonormal basis slice ``{T_K : |K| <= k}``; N = Q_{k,d}, kappa = 0."""
    ball = enumerate_ball(k, d, cap)
    return FunctionFamily(labels=list(ball), members=[_basis_member(K) for K in ball],
                          dimension=d, declared_orthonormal=True, coherence=0.0)


def hard_family_symmetric(ell: int, d: int) -> FunctionFamily:
    """All ``sqrt(2) sin(pi sum_{i in S} x_i)`` over size-``ell`` subsets S.

    Each member is the basis function of the 0/1 indicator index of S, so the
    family is orthonormal with N = C(d, ell), and coordinate permutations
    act on it by relabeling subsets.
    """
    if not 1 <= ell <= d:
        raise ParameterOutOfRange(f"need 1 <= ell <= d, got ell={ell}, d={d}")
    labels, members = [], []
    for S in itertools.combinations(range(d), ell):
        K = tuple(1 if i in S else 0 for i in range(d))
        labels.append(S)
        members.append(_basis_member(K))
    return FunctionFamily(labels=labels, members=members, dimension=d,
                          declared_orthonormal=True, coherence=0.0)


@dataclass(frozen=True)
class HardFunction:
    """An explicit Lipschitz function that random spans fit badly."""

    epsilon: float
    ell: int
    dimension: int
    lip_bound: float

    def evaluate(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        vals = 4.0 * SQRT2 * self.epsilon * np.sin(
            math.pi * np.sum(pts[:, : self.ell], axis=1)
        )
        return float(vals[0]) if single else vals

    __call__ = evaluate


def explicit_hard_function(epsilon: float, ell: int, d: int) -> HardFunction:
    """``f(x) = 4 sqrt(2) eps sin(pi (x_1 + ... + x_ell))``, Lipschitz ``4 pi eps sqrt(2 ell)``.

    Equals ``4 eps`` times the first member of the symmetric hard family, so
    its cube norm is ``4 eps`` and fitting it within ``eps`` forces width
    about a quarter of the family size.
    """
    if not 1 <= ell <= d:
        raise ParameterOutOfRange(f"need 1 <= ell <= d, got ell={ell}, d={d}")
    if epsilon <= 0:
        raise ParameterOutOfRange(f"epsilon must be positive, got {epsilon}")
    return HardFunction(epsilon=epsilon, ell=ell, dimension=d,
                        lip_bound=4.0 * math.pi * epsilon * math.sqrt(2.0 * ell))


@dataclass(frozen=True)
class LbParameters:
    """Hard-instance sizes achievable at Lipschitz budget L and error eps."""

    ell: int
    k_nonexplicit: float
    degenerate: bool


def lb_parameters(lipschitz: float, epsilon: float, d: int) -> LbParameters:
    """Sine-family size ``ell`` and ball radius ``k`` for Lipschitz targets.

    ``ell = min(ceil(d/2), floor(L^2 / (32 pi^2 eps^2)))`` and
    ``k = L / (18 eps)``; ``ell = 0`` flags a degenerate (too-easy) regime
    rather than raising.
    """
    if lipschitz <= 0 or epsilon <= 0:
        raise ParameterOutOfRange("lipschitz and epsilon must be positive")
    if d < 1:
        raise ParameterOutOfRange(f"dimension must be >= 1, got {d}")
    ell = min(math.ceil(d / 2), math.floor(lipschitz**2 / (32.0 * math.pi**2 * epsilon**2)))
    return LbParameters(ell=ell, k_nonexplicit=lipschitz / (18.0 * epsilon),
                        degenerate=ell == 0)


@dataclass(frozen=True)
class SobolevLbParameters:
    """Hard-instance sizes for targets with H^s norm at most gamma."""

    k: float
    ell: int
    max_scaled_norm_sq: float  # max over the ball of |4 eps T_K|_{H^s}^2


def sobolev_lb_parameters(gamma: float, epsilon: float, s: int, d: int,
                          cap=None) -> SobolevLbParameters:
    """Ball radius and sine-family size for Sobolev-ball hard instances.

    Requires ``gamma^2 / eps^2 >= 16 (s+1)``.  Also certifies on the spot
    that every candidate ``f = 4 eps T_K`` with ``|K| <= k`` satisfies
    ``|f|_{H^s}^2 = 16 eps^2 c_{K,s} <= gamma^2``, i.e. the hard functions
    really lie in the Sobolev ball.
    """
    if s < 1 or int(s) != s:
        raise ParameterOutOfRange(f"Sobolev order must be a positive integer, got {s}")
    if gamma <= 0 or epsilon <= 0 or d < 1:
        raise ParameterOutOfRange("gamma, epsilon must be positive and d >= 1")
    if gamma**2 / epsilon**2 < 16.0 * (s + 1):
        raise ParameterOutOfRange(
            f"need gamma^2/eps^2 >= 16(s+1) = {16 * (s + 1)}, got {gamma**2 / epsilon**2}"
        )
    k = gamma ** (1.0 / s) / (math.pi * 4.0 ** (1.0 / s) * epsilon ** (1.0 / s)
                              * (s + 1.0) ** (1.0 / (2.0 * s)))
    ell = min(math.ceil(d / 2),
              math.floor(gamma ** (2.0 / s) / (math.pi**2 * 16.0 ** (1.0 / s)
                                               * epsilon ** (2.0 / s) * (s + 1.0) ** (1.0 / s))))
    worst = max(16.0 * epsilon**2 * c_ks(K, s) for K in enumerate_ball(k, d, cap))
    if worst > gamma**2 * (1.0 + 1e-12):
        raise ParameterOutOfRange(
            f"certification failed: max |4 eps T_K|_{{H^s}}^2 = {worst} > gamma^2 = {gamma**2}"
        )
    return SobolevLbParameters(k=k, ell=ell, max_scaled_norm_sq=worst)


def gaussian_hard_family(L: float, N: int, d: int, seed, grid: Grid,
                         min_separation: float = 1e-6,
                         pool_factor: int = 32) -> FunctionFamily:
    """Greedily packed ridge sines ``sin(L <v, x>)`` in Gaussian space.

    Directions come from a seeded pool of uniform sphere points, grown one at
    a time by farthest-point selection under the axial metric
    ``1 - |<u, v>|`` (``v`` and ``-v`` give the same span, so antipodes count
    as coincident).  Members are normalized by their measured grid norm and
    the family carries its measured coherence.
    """
    if grid.spec.measure != GAUSSIAN:
        raise WrongMeasure("gaussian_hard_family needs a Gaussian-measure grid")
    if N < 1 or d < 1 or L <= 0:
        raise ParameterOutOfRange("need N >= 1, d >= 1, L > 0")
    rng = np.random.default_rng(seed)
    pool = rng.standard_normal((max(N * pool_factor, 64), d))
    pool /= np.linalg.norm(pool, axis=1, keepdims=True)
    chosen = [pool[0]]
    for _ in range(1, N):
        separation = np.min(1.0 - np.abs(pool @ np.array(chosen).T), axis=1)
        best = int(np.argmax(separation))
        if separation[best] < min_separation:
            raise PackingFailed(
                f"could not place {len(chosen) + 1} directions with axial "
                f"separation >= {min_separation} in dimension {d}"
            )
        chosen.append(pool[best])

    labels, members = [], []
    for i, v in enumerate(chosen):
        raw = lambda nodes, _v=v: np.sin(L * (np.asarray(nodes, dtype=float) @ _v))
        norm = math.sqrt(float(np.sum(grid.weights * raw(grid.nodes) ** 2)))
        if norm <= 1e-12:
            raise PackingFailed(f"degenerate member norm {norm} for direction {v}")
        labels.append(i)
        members.append(lambda nodes, _raw=raw, _n=norm: _raw(nodes) / _n)
    family = FunctionFamily(labels=labels, members=members, dimension=d,
                            declared_orthonormal=False, coherence=None)
    kappa = coherence(family, grid)
    return FunctionFamily(labels=labels, members=members, dimension=d,
                          declared_orthonormal=False, coherence=kappa)
