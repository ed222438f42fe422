"""ReLU-mixture machinery for ridge functions.

A twice-differentiable ridge profile ``phi`` on ``[-sqrt(d), sqrt(d)]`` can be
written as a mixture of ReLU kinks: with ``b`` uniform on
``[-2 sqrt(d), 2 sqrt(d)]``,

    E_b[ psi(b) * relu(z - b) ] = phi(z)   for z in [-sqrt(d), sqrt(d)],

where ``psi`` is an explicit piecewise density built from ``phi(-sqrt(d))``,
``phi'(-sqrt(d))`` and the curvature ``phi''``.  Applied to the ridge profiles
of the trigonometric basis functions this turns any low-degree trig
polynomial into an expectation of random ReLU features, which a sample
average then approximates at the usual ``1/sqrt(r)`` Monte Carlo rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    NotUnitNorm,
    OutOfSupport,
    ParameterOutOfRange,
    UnsupportedCombination,
    WeightNotInSupport,
)
from .lattice import (
    IndexClass,
    MultiIndex,
    classify,
    count_ball,
    enumerate_ball,
    l2_norm_sq,
    radius_sq_bound,
)
from .quadrature import Grid, l2_error
from .trig import SQRT2, TrigPolynomial


@dataclass(frozen=True)
class ReluFeature:
    """A single ReLU ridge unit ``x -> relu(<w, x> - b)`` with unit weight."""

    bias: float
    weight: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=float)
        object.__setattr__(self, "weight", w)
        if abs(float(np.linalg.norm(w)) - 1.0) > 1e-12:
            raise NotUnitNorm(f"feature weight has norm {np.linalg.norm(w)!r}, expected 1")

    @property
    def dimension(self) -> int:
        return self.weight.shape[0]

    def evaluate(self, x) -> np.ndarray | float:
        """ReLU response at one point (d,) or a batch of points (n, d)."""
        x = np.asarray(x, dtype=float)
        z = x @ self.weight - self.bias
        out = np.maximum(z, 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RidgeProfile:
    """Boundary data and curvature of a ridge function on [-sqrt(d), sqrt(d)]."""

    value_left: float        # phi(-sqrt(d))
    slope_left: float        # phi'(-sqrt(d))
    curvature: Callable      # phi'', evaluated only inside [-sqrt(d), sqrt(d)]


def _call_curvature(curvature: Callable, b: np.ndarray) -> np.ndarray:
    """Evaluate a curvature callable on a 1-D array, looping if scalar-only."""
    try:
        vals = np.asarray(curvature(b), dtype=float)
        if vals.shape == b.shape:
            return vals
        if vals.ndim == 0:  # constant shorthand such as lambda z: 0.0
            return np.full(b.shape, float(vals))
    except (TypeError, ValueError):
        pass
    return np.array([float(curvature(float(v))) for v in b])


def psi(profile: RidgeProfile, d: int, b) -> float | np.ndarray:
    """Mixture density at bias ``b`` for the given ridge profile.

    Piecewise on the four bias intervals: with ``a = phi(-sqrt(d))`` and
    ``s = phi'(-sqrt(d))``,

    * ``(16/sqrt(d)) a - 4 s``  on  ``[-2 sqrt(d), -1.5 sqrt(d))``
    * ``-(16/sqrt(d)) a + 12 s``  on  ``[-1.5 sqrt(d), -sqrt(d))``
    * ``4 sqrt(d) phi''(b)``  on  ``[-sqrt(d), sqrt(d)]``
    * ``0``  on  ``(sqrt(d), 2 sqrt(d)]``
    """
    if d < 1:
        raise ParameterOutOfRange(f"dimension must be >= 1, got {d}")
    root = math.sqrt(d)
    arr = np.asarray(b, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < -2.0 * root) or np.any(arr > 2.0 * root):
        raise OutOfSupport(f"bias outside [-2 sqrt(d), 2 sqrt(d)] = [{-2*root}, {2*root}]")
    out = np.zeros_like(arr)
    lo = arr < -1.5 * root
    mid_lo = (arr >= -1.5 * root) & (arr < -root)
    core = (arr >= -root) & (arr <= root)
    out[lo] = (16.0 / root) * profile.value_left - 4.0 * profile.slope_left
    out[mid_lo] = -(16.0 / root) * profile.value_left + 12.0 * profile.slope_left
    if np.any(core):
        out[core] = 4.0 * root * _call_curvature(profile.curvature, arr[core])
    return float(out[0]) if scalar else out


def ridge_profile_of_index(K: MultiIndex, rho: float, d: int) -> RidgeProfile:
    """Profile of ``phi_K``, the ridge slice of ``T_K(rho x)`` along ``K/|K|``.

    ``phi_K(z) = sqrt(2) sin(omega z)`` or ``sqrt(2) cos(omega z)`` with
    ``omega = pi rho |K|``, or the constant 1 for ``K = 0``; derivatives are
    closed-form.
    """
    if rho <= 0:
        raise ParameterOutOfRange(f"argument scale must be positive, got {rho}")
    kind = classify(K)
    if kind is IndexClass.ZERO:
        return RidgeProfile(1.0, 0.0, lambda z: np.zeros_like(np.asarray(z, dtype=float)))
    omega = math.pi * rho * math.sqrt(l2_norm_sq(K))
    left = -math.sqrt(d)
    if kind is IndexClass.SIN:
        return RidgeProfile(
            SQRT2 * math.sin(omega * left),
            SQRT2 * omega * math.cos(omega * left),
            lambda z: -SQRT2 * omega**2 * np.sin(omega * np.asarray(z, dtype=float)),
        )
    return RidgeProfile(
        SQRT2 * math.cos(omega * left),
        -SQRT2 * omega * math.sin(omega * left),
        lambda z: -SQRT2 * omega**2 * np.cos(omega * np.asarray(z, dtype=float)),
    )


def psi_K(K: MultiIndex, rho: float, d: int, b) -> float | np.ndarray:
    """Mixture density reconstructing the basis ridge ``T_K(rho x)``."""
    return psi(ridge_profile_of_index(K, rho, d), d, b)


def phi_K(K: MultiIndex, rho: float, z) -> float | np.ndarray:
    """Ridge slice ``phi_K(z)`` with ``T_K(rho x) = phi_K(<K/|K|, x>)``."""
    if rho <= 0:
        raise ParameterOutOfRange(f"argument scale must be positive, got {rho}")
    arr = np.asarray(z, dtype=float)
    kind = classify(K)
    if kind is IndexClass.ZERO:
        out = np.ones_like(arr)
    else:
        omega = math.pi * rho * math.sqrt(l2_norm_sq(K))
        out = SQRT2 * (np.sin(omega * arr) if kind is IndexClass.SIN else np.cos(omega * arr))
    return float(out) if arr.ndim == 0 else out


def unit_direction(K: MultiIndex, d: int) -> np.ndarray:
    """Direction ``K/|K|`` of a lattice index; ``0`` maps to the diagonal."""
    if len(K) != d:
        raise ParameterOutOfRange(f"index has length {len(K)}, expected {d}")
    if classify(K) is IndexClass.ZERO:
        return np.full(d, 1.0 / math.sqrt(d))
    arr = np.asarray(K, dtype=float)
    return arr / np.linalg.norm(arr)


class ReluParamDist:
    """Base class for (bias, weight) distributions of random ReLU features."""

    dimension: int

    def sample_feature(self, rng: np.random.Generator) -> ReluFeature:
        raise NotImplementedError


@dataclass
class DkDistribution(ReluParamDist):
    """Bias uniform on [-2 sqrt(d), 2 sqrt(d)]; weight a uniform ball direction.

    The weight is ``K/|K|`` for ``K`` drawn index-uniformly from the lattice
    ball of radius ``k`` (the zero index mapping to the diagonal direction).
    The distribution is permutation-symmetric because the ball is.
    """

    k: float
    dimension: int
    cap: int | None = None
    _ball: list[MultiIndex] = field(init=False, repr=False)

    def __post_init__(self):
        if self.k < 0:
            raise ParameterOutOfRange(f"ball radius must be nonnegative, got {self.k}")
        if self.dimension < 1:
            raise ParameterOutOfRange(f"dimension must be >= 1, got {self.dimension}")
        self._ball = enumerate_ball(self.k, self.dimension, self.cap)

    def sample_feature(self, rng: np.random.Generator) -> ReluFeature:
        K = self._ball[int(rng.integers(len(self._ball)))]
        root = math.sqrt(self.dimension)
        bias = float(rng.uniform(-2.0 * root, 2.0 * root))
        return ReluFeature(bias, unit_direction(K, self.dimension))


@dataclass
class CustomDistribution(ReluParamDist):
    """User-supplied samplers; the weight marginal must be permutation-invariant.

    That symmetry is a contract the caller declares, not something checked
    here — the lower-bound statements quantify only over symmetric feature
    distributions.
    """

    dimension: int
    bias_sampler: Callable[[np.random.Generator], float]
    weight_sampler: Callable[[np.random.Generator], np.ndarray]

    def sample_feature(self, rng: np.random.Generator) -> ReluFeature:
        return ReluFeature(float(self.bias_sampler(rng)), self.weight_sampler(rng))


def sample(dist: ReluParamDist, rng: np.random.Generator) -> ReluFeature:
    """Draw one feature from a parameter distribution."""
    return dist.sample_feature(rng)


def ray_members(w: np.ndarray, k: float, d: int, atol: float = 1e-8) -> list[MultiIndex]:
    """Ball indices that are nonnegative multiples of the direction ``w``.

    Scans integer values of the largest-magnitude coordinate rather than
    filtering the whole ball: any integral multiple ``v = eta w`` (eta > 0)
    has ``v[i0] = m`` a nonzero integer with ``|m| <= |v| <= k``, so trying
    every such ``m`` finds every member.  The zero index is included exactly
    when ``w`` is the diagonal direction, matching ``unit_direction``.
    """
    w = np.asarray(w, dtype=float)
    bound_sq = radius_sq_bound(k)
    members: list[MultiIndex] = []
    if np.max(np.abs(w - 1.0 / math.sqrt(d))) <= 1e-9:
        members.append((0,) * d)
    i0 = int(np.argmax(np.abs(w)))
    m_max = math.isqrt(bound_sq)
    for m in range(1, m_max + 1):
        signed = m if w[i0] > 0 else -m
        v = w * (signed / w[i0])
        rounded = np.rint(v)
        if np.max(np.abs(v - rounded)) > atol:
            continue
        K = tuple(int(c) for c in rounded)
        if l2_norm_sq(K) <= bound_sq:
            members.append(K)
    return members


def h_weight(b: float, w: np.ndarray, P: TrigPolynomial, k: float, d: int) -> float:
    """Importance weight making ``E[h(b,w) relu(<w,x> - b)] = P(x)`` under D_k.

    ``h(b, w) = (Q_{k,d} / |ray(w)|) * sum_{K in ray(w)} beta_K psi_K(b)``,
    where ``ray(w)`` collects the ball indices whose direction is ``w``.
    """
    if P.dimension != d:
        raise ParameterOutOfRange(f"polynomial dimension {P.dimension} != {d}")
    bound_sq = radius_sq_bound(k)
    for K in P.terms:
        if l2_norm_sq(K) > bound_sq:
            raise ParameterOutOfRange(f"coefficient index {K} lies outside the radius-{k} ball")
    members = ray_members(w, k, d)
    if not members:
        raise WeightNotInSupport(f"direction {w!r} matches no lattice ray of radius {k}")
    total = 0.0
    for K in members:
        beta = P.terms.get(K, 0.0)
        if beta != 0.0:
            total += beta * psi_K(K, P.scale, d, b)
    return count_ball(k, d) / len(members) * total


def width_bound(beta_bar: float, d: int, k: float, Q: int, epsilon: float, delta: float) -> int:
    """Sufficient width for the sample-average network to hit error ``epsilon``.

    ``ceil(360^2 d^2 beta_bar^2 k^4 Q^2 (1 + sqrt(2 ln(1/delta)))^2 / epsilon^2)``,
    never below 1 (width counts at least one unit even for the zero
    polynomial).
    """
    if d < 1 or k <= 0 or Q < 1 or epsilon <= 0:
        raise ParameterOutOfRange("d, k, Q, epsilon must be positive")
    if beta_bar < 0:
        raise ParameterOutOfRange(f"coefficient bound must be nonnegative, got {beta_bar}")
    if not 0.0 < delta <= 0.5:
        raise ParameterOutOfRange(f"failure probability must be in (0, 1/2], got {delta}")
    amp = (1.0 + math.sqrt(2.0 * math.log(1.0 / delta))) ** 2
    raw = 360.0**2 * d**2 * beta_bar**2 * k**4 * Q**2 * amp / epsilon**2
    return max(1, math.ceil(raw))


def sample_average_network(P: TrigPolynomial, r: int, dist: DkDistribution,
                           seed, grid: Grid):
    """Monte Carlo network ``(1/r) sum_i h(b_i, w_i) relu(<w_i, x> - b_i)``.

    Draws ``r`` features from ``dist``, attaches the importance weight of each
    divided by ``r``, and reports the measured L2 error against ``P`` on the
    grid.  Error decays like ``1/sqrt(r)``.
    """
    from .fitter import FittedSpan  # deferred: fitter imports ReluFeature from here

    if not isinstance(dist, DkDistribution):
        raise UnsupportedCombination("sample-average networks require a D_k distribution")
    if r < 1:
        raise ParameterOutOfRange(f"width must be a positive integer, got {r}")
    rng = np.random.default_rng(seed)
    features, coeffs = [], np.empty(r)
    for i in range(r):
        feat = dist.sample_feature(rng)
        features.append(feat)
        coeffs[i] = h_weight(feat.bias, feat.weight, P, dist.k, dist.dimension) / r
    design = np.column_stack([feat.evaluate(grid.nodes) for feat in features])
    approx = design @ coeffs
    err = l2_error(P.evaluate, lambda nodes: approx, grid)
    return FittedSpan(features=features, coefficients=coeffs, l2_error=err,
                      grid_id=grid.spec.label())


def _gauss_legendre_piece(f, lo: float, hi: float, order: int = 64) -> float:
    if hi <= lo:
        return 0.0
    t, u = np.polynomial.legendre.leggauss(order)
    mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
    return float(half * np.sum(u * f(mid + half * t)))


def mixture_expectation(K: MultiIndex, rho: float, d: int, z: float) -> float:
    """Semi-analytic ``E_b[psi_K(b) relu(z - b)]`` with b uniform on the support.

    The integrand is smooth between the breakpoints of ``psi`` and the kink of
    the ReLU at ``b = z``, so fixed-order Gauss-Legendre on each piece is
    exact to machine precision.
    """
    root = math.sqrt(d)
    cuts = sorted({-2.0 * root, -1.5 * root, -root, root, min(z, 2.0 * root)})
    cuts = [c for c in cuts if c <= min(z, 2.0 * root)]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _gauss_legendre_piece(
            lambda b: psi_K(K, rho, d, b) * (z - b), lo, hi
        )
    return total / (4.0 * root)
