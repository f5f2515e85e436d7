"""
Spectral analysis of the question mark measure
Certified quadrature against μ, the Kinney dimension, discretisations of μ and
the recurrence coefficients of its orthonormal polynomials
"""

import heapq
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction as Rational
from typing import Callable, List, Optional

import numpy as np
import pandas as pd
from scipy.stats import arcsine

from .config import QUADRATURE_CONFIG, SPECTRAL_CONFIG
from .errors import DomainError, ResolutionExhaustedError, ToleranceNotReachedError
from .partition import stern_brocot_arrays

logger = logging.getLogger(__name__)

EPS_MACHINE = sys.float_info.epsilon
LN2 = math.log(2.0)

OscillationBound = Callable[[float, float], float]


@dataclass
class QuadratureResult:
    value: float
    error_bound: float
    intervals_used: int


@dataclass
class KinneyEstimate:
    """dim = 1 / (2 ∫ log2(1+x) dμ) with a rigorous error bound"""
    dimension: float
    error_bound: float
    integral: float
    integral_error: float
    method: str

    @property
    def bracket(self):
        return self.dimension - self.error_bound, self.dimension + self.error_bound


@dataclass
class MomentBounds:
    """
    Enclosures lower[k] <= ∫ (y - 1/2)^k dμ <= upper[k], plus a point
    estimate kept inside them
    """
    lower: np.ndarray
    upper: np.ndarray
    level: int
    estimate: Optional[np.ndarray] = None

    @property
    def center(self) -> np.ndarray:
        if self.estimate is None:
            return (self.lower + self.upper) / 2
        return np.clip(self.estimate, self.lower, self.upper)

    @property
    def radius(self) -> np.ndarray:
        c = self.center
        return np.maximum(self.upper - c, c - self.lower)


@dataclass
class MeasureAtoms:
    points: np.ndarray
    weights: np.ndarray
    level: Optional[int] = None

    def __len__(self) -> int:
        return self.points.size


@dataclass
class RecurrenceCoeffs:
    """a_1..a_N and b_1..b_N of x p_k = b_{k+1} p_{k+1} + a_{k+1} p_k + b_k p_{k-1}"""
    a: np.ndarray
    b: np.ndarray

    def __len__(self) -> int:
        return self.a.size

    def _log_b(self) -> np.ndarray:
        # a zero b closes a finite recurrence; it has no logarithm
        positive = self.b > 0
        logs = np.cumsum(np.log(np.where(positive, self.b, 1.0)))
        return np.where(positive, logs, np.nan)

    @property
    def geo_mean(self) -> np.ndarray:
        """geo_mean[j-1] = (b_1 ... b_j)^(1/j), NaN once b_j = 0"""
        return np.exp(self._log_b() / np.arange(1, self.b.size + 1))

    @property
    def gamma_log(self) -> np.ndarray:
        """log γ_j = -sum_{k<=j} log b_k, γ_j the leading coefficient of p_j"""
        return -self._log_b()

    def truncated(self, count: int) -> 'RecurrenceCoeffs':
        return RecurrenceCoeffs(self.a[:count].copy(), self.b[:count].copy())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'j': np.arange(1, self.a.size + 1),
            'a': self.a,
            'b': self.b,
            'geo_mean': self.geo_mean,
        }, columns=['j', 'a', 'b', 'geo_mean'])


@dataclass
class RegularityTrend:
    table: pd.DataFrame
    final_gap: float


def monotone_oscillation(f: Callable[[float], float]) -> OscillationBound:
    """Oscillation of a monotone f over [a, b]"""
    return lambda a, b: abs(f(b) - f(a))


def lipschitz_oscillation(lipschitz: float) -> OscillationBound:
    return lambda a, b: lipschitz * (b - a)


def integrate(f: Callable[[float], float], osc_bound: OscillationBound, eps: float,
              representative: str = 'midpoint', max_intervals: Optional[int] = None) -> QuadratureResult:
    """
    Adaptive quadrature ∫ f dμ over IFS intervals

    Each frontier interval I contributes f(representative) 2^-n and the
    bound osc_bound(left, right) 2^-n; the interval with the largest bound is
    split first (ties by depth, then Θ). Stops once the summed bound is
    below eps.

    Raises:
        ToleranceNotReachedError: more than max_intervals frontier intervals
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if representative not in ('midpoint', 'left'):
        raise DomainError(f"unknown representative {representative!r}")
    budget = QUADRATURE_CONFIG['max_intervals'] if max_intervals is None else max_intervals

    def entry(depth, idx, p, q, ph, qh):
        bound = osc_bound(p / q, ph / qh) * math.ldexp(1.0, -depth)
        return (-bound, depth, idx, p, q, ph, qh)

    heap = [entry(0, 0, 0, 1, 1, 1)]
    total = -heap[0][0]
    while total >= eps:
        if len(heap) >= budget:
            raise ToleranceNotReachedError(
                f"bound {total:.3e} still above eps={eps:g} after {len(heap)} intervals")
        neg, depth, idx, p, q, ph, qh = heapq.heappop(heap)
        total += neg
        mp, mq = p + ph, q + qh
        for child in (entry(depth + 1, 2 * idx, p, q, mp, mq),
                      entry(depth + 1, 2 * idx + 1, mp, mq, ph, qh)):
            heapq.heappush(heap, child)
            total -= child[0]
        if total < eps:
            # running sum drifts; confirm before stopping
            total = math.fsum(-e[0] for e in heap)

    def rep(p, q, ph, qh):
        return (p / q + ph / qh) / 2 if representative == 'midpoint' else p / q

    value = math.fsum(f(rep(*e[3:])) * math.ldexp(1.0, -e[1]) for e in heap)
    error = math.fsum(-e[0] for e in heap)
    logger.info("integrate: %d intervals, value=%.17g, bound=%.3e", len(heap), value, error)
    return QuadratureResult(value, error, len(heap))


def central_moment_bounds(order: int, level: Optional[int] = None) -> MomentBounds:
    """
    Enclosures of the central moments m_k = ∫ (y - 1/2)^k dμ, k = 0..order

    On each level-n interval |y - 1/2| is monotone (1/2 is an endpoint for
    n >= 1), so lower and upper sums take the endpoint values. Odd moments
    vanish by the symmetry of μ about 1/2.

    The estimate pulls each interval back to μ itself and blends the endpoint
    (trapezoid) and mediant sums with weight 4 m_2 on the former, which is
    exact for integrands quadratic in the pulled-back variable; odd orders
    cancel by symmetry.
    """
    level = QUADRATURE_CONFIG['moment_level'] if level is None else level
    if level < 1:
        raise DomainError(f"moment level must be at least 1, got {level}")
    if order < 0:
        raise DomainError(f"negative moment order {order}")
    p, q = stern_brocot_arrays(level, max_level=level)
    # |x - 1/2| = |2p - q| / 2q with a single rounding
    d = np.abs(2 * p - q) / (2.0 * q)
    d_min2 = np.minimum(d[:-1], d[1:]) ** 2
    d_max2 = np.maximum(d[:-1], d[1:]) ** 2
    d_mid2 = (np.abs(2 * (p[:-1] + p[1:]) - (q[:-1] + q[1:])) / (2.0 * (q[:-1] + q[1:]))) ** 2
    mass = math.ldexp(1.0, -level)

    lower = np.zeros(order + 1)
    upper = np.zeros(order + 1)
    estimate = np.zeros(order + 1)
    lower[0] = upper[0] = estimate[0] = 1.0
    pow_min = np.ones_like(d_min2)
    pow_max = np.ones_like(d_max2)
    pow_mid = np.ones_like(d_mid2)
    weight = 0.0
    for k in range(2, order + 1, 2):
        pow_min *= d_min2
        pow_max *= d_max2
        pow_mid *= d_mid2
        slack = (k + level + 4) * EPS_MACHINE
        lower[k] = max(0.0, mass * pow_min.sum() * (1 - slack))
        # underflowed powers are bounded by the smallest subnormal
        upper[k] = mass * pow_max.sum() * (1 + slack) + 1e-300
        trapezoid = mass * (pow_min.sum() + pow_max.sum()) / 2
        midpoint = mass * pow_mid.sum()
        if k == 2:
            # m_2 = M + 4 m_2 (T - M)
            estimate[2] = midpoint / (1.0 - 4.0 * (trapezoid - midpoint))
            weight = 4.0 * estimate[2]
        else:
            estimate[k] = weight * trapezoid + (1.0 - weight) * midpoint
    return MomentBounds(lower, upper, level, estimate)


def kinney_integral(leaf_level: Optional[int] = None, moment_level: Optional[int] = None,
                    order: Optional[int] = None) -> QuadratureResult:
    """
    Certified ∫ log2(1+x) dμ

    On each leaf I_σ the integrand pulls back to log2(N(y)/D(y)) with N and D
    affine; both logarithms are expanded at y = 1/2 and integrated termwise
    against the central moment enclosures. The bound covers series
    truncation, moment uncertainty and floating point rounding.
    """
    leaf_level = QUADRATURE_CONFIG['leaf_level'] if leaf_level is None else leaf_level
    moment_level = QUADRATURE_CONFIG['moment_level'] if moment_level is None else moment_level
    order = QUADRATURE_CONFIG['series_order'] if order is None else order
    order += order % 2
    moments = central_moment_bounds(order, moment_level)
    center, radius = moments.center, moments.radius

    p, q = stern_brocot_arrays(leaf_level, max_level=leaf_level)
    left_sum = p[:-1] + q[:-1]
    right_sum = p[1:] + q[1:]
    two_n = (left_sum + right_sum).astype(float)      # 2 N(1/2)
    two_d = (q[:-1] + q[1:]).astype(float)           # 2 D(1/2)
    u_n = 2.0 * (right_sum - left_sum) / two_n
    u_d = 2.0 * (q[1:] - q[:-1]) / two_d
    mass = math.ldexp(1.0, -leaf_level)

    logs = np.log2(two_n) - np.log2(two_d)
    base = mass * logs.sum()
    magnitude = mass * np.abs(logs).sum()

    u_n2, u_d2 = u_n * u_n, u_d * u_d
    pow_n = np.ones_like(u_n)
    pow_d = np.ones_like(u_d)
    series = 0.0
    moment_error = 0.0
    for k in range(2, order + 1, 2):
        pow_n *= u_n2
        pow_d *= u_d2
        coeff = (pow_n - pow_d) / k
        series += center[k] * mass * coeff.sum()
        moment_error += radius[k] * mass * np.abs(coeff).sum()
        magnitude += center[k] * mass * (pow_n + pow_d).sum() / k / LN2

    # tail: m_k <= m_order 2^(order-k) for k > order
    t_n, t_d = np.abs(u_n) / 2, np.abs(u_d) / 2
    tail = pow_n * t_n / (1 - t_n) + pow_d * t_d / (1 - t_d)
    truncation = moments.upper[order] * mass * tail.sum() / (order + 1) / LN2

    value = base - series / LN2
    rounding = (order + leaf_level + 8) * EPS_MACHINE * magnitude
    error = truncation + moment_error / LN2 + rounding
    logger.info("kinney integral: value=%.17g, truncation=%.2e, moments=%.2e, rounding=%.2e",
                value, truncation, moment_error / LN2, rounding)
    return QuadratureResult(float(value), float(error), int(u_n.size))


def kinney_dimension(eps: float, method: str = 'moment') -> KinneyEstimate:
    """
    Hausdorff dimension 1 / (2 ∫ log2(1+x) dμ) to within eps

    method='moment' uses kinney_integral; 'adaptive' runs the generic
    quadrature, practical for eps down to about 1e-5.

    Raises:
        ToleranceNotReachedError: the certified bound exceeds eps
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if method == 'moment':
        result = kinney_integral()
    elif method == 'adaptive':
        f = lambda x: math.log2(1.0 + x)
        result = integrate(f, monotone_oscillation(f), 0.4 * eps)
    else:
        raise DomainError(f"unknown method {method!r}")

    v, e = result.value, result.error_bound
    if not e < v:
        raise ToleranceNotReachedError(f"integral bound {e:.3e} does not separate the value from 0")
    dimension = 1.0 / (2.0 * v)
    bound = e / (2.0 * v * (v - e)) + 4 * EPS_MACHINE
    if bound > eps:
        raise ToleranceNotReachedError(
            f"dimension bound {bound:.3e} above eps={eps:g}; raise MINKOWSKI_LEAF_LEVEL or MINKOWSKI_MOMENT_LEVEL")
    logger.info("kinney dimension (%s): %.17g ± %.3e", method, dimension, bound)
    return KinneyEstimate(dimension, bound, v, e, method)


def discretize(n: int) -> MeasureAtoms:
    """2^n atoms of mass 2^-n at the midpoints of the level-n intervals"""
    p, q = stern_brocot_arrays(n)
    x = p / q
    points = (x[:-1] + x[1:]) / 2
    weights = np.full(points.size, math.ldexp(1.0, -n))
    return MeasureAtoms(points, weights, n)


def arcsine_atoms(count: int) -> MeasureAtoms:
    """Equal-weight quantiles of the equilibrium (arcsine) measure of [0,1]"""
    if count < 1:
        raise DomainError(f"atom count must be positive, got {count}")
    points = arcsine.ppf((np.arange(count) + 0.5) / count)
    return MeasureAtoms(points, np.full(count, 1.0 / count))


def _stieltjes(x: np.ndarray, w: np.ndarray, count: int):
    a = np.zeros(count)
    b = np.zeros(count)
    atoms = x.size
    p_prev = np.zeros_like(x)
    p_cur = np.ones_like(x) / math.sqrt(w.sum())
    b_prev = 0.0
    tiny = 64 * EPS_MACHINE
    for k in range(count):
        a[k] = np.dot(w, x * p_cur * p_cur)
        r = (x - a[k]) * p_cur - b_prev * p_prev
        b_k = math.sqrt(np.dot(w, r * r))
        if k + 1 >= atoms:
            # the measure has no further orthogonal direction
            b[k] = 0.0
            break
        if b_k <= tiny:
            raise ResolutionExhaustedError(f"b_{k + 1} = {b_k:.3e} lost positivity")
        b[k] = b_k
        p_prev, p_cur, b_prev = p_cur, r / b_k, b_k
    return a, b


def _stieltjes_exact(x: List[Rational], w: List[Rational], count: int):
    # monic recurrence: π_{k+1} = (x - α_k) π_k - β_k π_{k-1}
    a = np.zeros(count)
    b = np.zeros(count)
    pi_prev = [Rational(0)] * len(x)
    pi_cur = [Rational(1)] * len(x)
    norm_prev = None
    for k in range(count):
        norm = sum(wi * pk * pk for wi, pk in zip(w, pi_cur))
        if norm == 0:
            raise ResolutionExhaustedError(f"π_{k} vanishes on the atoms")
        alpha = sum(wi * xi * pk * pk for wi, xi, pk in zip(w, x, pi_cur)) / norm
        beta = norm / norm_prev if norm_prev is not None else Rational(0)
        pi_next = [(xi - alpha) * pk - beta * pp for xi, pk, pp in zip(x, pi_cur, pi_prev)]
        a[k] = float(alpha)
        norm_next = sum(wi * pk * pk for wi, pk in zip(w, pi_next))
        b[k] = math.sqrt(norm_next / norm)
        pi_prev, pi_cur, norm_prev = pi_cur, pi_next, norm
    return a, b


def recurrence_coeffs(atoms: MeasureAtoms, count: int, exact: bool = False) -> RecurrenceCoeffs:
    """
    First `count` coefficient pairs of the orthonormal recurrence of a discrete
    measure by the Stieltjes procedure

    exact=True repeats the computation in rational arithmetic on the exact
    binary values of the atoms (count <= SPECTRAL_CONFIG['exact_max_count']).

    Raises:
        ResolutionExhaustedError: some b_k with k below the atom count collapsed
    """
    if count < 1 or count > len(atoms):
        raise DomainError(f"count must be in 1..{len(atoms)}, got {count}")
    if exact:
        limit = SPECTRAL_CONFIG['exact_max_count']
        if count > limit:
            raise DomainError(f"exact mode supports count <= {limit}, got {count}")
        x = [Rational(float(v)) for v in atoms.points]
        w = [Rational(float(v)) for v in atoms.weights]
        a, b = _stieltjes_exact(x, w, count)
    else:
        a, b = _stieltjes(atoms.points.astype(float), atoms.weights.astype(float), count)
    logger.info("recurrence: %d coefficients from %d atoms%s", count, len(atoms), " (exact)" if exact else "")
    return RecurrenceCoeffs(a, b)


def resolved_recurrence(n: int, count: int, tol: Optional[float] = None) -> RecurrenceCoeffs:
    """
    Coefficients of discretize(n), truncated at the first index where they
    differ from those of discretize(n + 2) by more than tol
    """
    tol = SPECTRAL_CONFIG['resolution_tol'] if tol is None else tol
    coarse = recurrence_coeffs(discretize(n), count)
    fine = recurrence_coeffs(discretize(n + 2), count)
    drift = np.maximum(np.abs(coarse.a - fine.a), np.abs(coarse.b - fine.b))
    unresolved = np.nonzero(drift > tol)[0]
    if unresolved.size:
        logger.info("resolution: level %d agrees with level %d up to j=%d", n, n + 2, unresolved[0])
        return coarse.truncated(int(unresolved[0]))
    return coarse


def regularity_diagnostic(coeffs: RecurrenceCoeffs) -> RegularityTrend:
    """j -> (b_1...b_j)^(1/j) and its distance to the capacity 1/4"""
    geo = coeffs.geo_mean
    geo = geo[np.isfinite(geo)]
    table = pd.DataFrame({
        'j': np.arange(1, geo.size + 1),
        'geo_mean': geo,
        'gap': np.abs(geo - 0.25),
    }, columns=['j', 'geo_mean', 'gap'])
    final_gap = float(table['gap'].iloc[-1]) if len(table) else float('nan')
    return RegularityTrend(table, final_gap)
