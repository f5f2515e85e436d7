"""
Regularity certificates
Large-interval census L^n(α), the seed set Q_α, Stern–Brocot depth, the
descent constants k1 / k2 / k3, the three-level bound pipeline and the
lower bound for the Lebesgue measure of Λ^n(α)
"""

import logging
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction as Rational
from functools import partial
from typing import Dict, Iterable, List, Optional, Set, Tuple

import pandas as pd

from .config import SEARCH_CONFIG
from .errors import DomainError, SearchLimitError
from .exact_arithmetic import Fraction
from .partition import IfsInterval, Word, collect_level, interval_of_word, iter_level

logger = logging.getLogger(__name__)


def parse_alpha(text) -> Rational:
    """Parse "P/Q", an integer or a decimal string into a positive exact rational"""
    try:
        alpha = Rational(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot parse alpha {text!r}: {e}") from e
    return _check_alpha(alpha)


def _check_alpha(alpha) -> Rational:
    alpha = Rational(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return alpha


def _check_level(n: int) -> None:
    if n < 1:
        raise DomainError(f"level must be at least 1, got {n}")


def _small(q: int, q_hat: int, n: int, alpha: Rational) -> bool:
    # λ = 1/(q q̂) < α/n  <=>  q q̂ α > n
    return q * q_hat * alpha.numerator > n * alpha.denominator


def _in_e(q: int, q_hat: int, alpha: Rational) -> bool:
    # q² > 1/α and q̂² > 1/α
    return q * q * alpha.numerator > alpha.denominator and \
        q_hat * q_hat * alpha.numerator > alpha.denominator


def _small_interval(iv: IfsInterval, n: int, alpha: Rational) -> bool:
    return _small(iv.left.den, iv.right.den, n, alpha)


def is_small(w: Word, alpha) -> bool:
    """True iff λ(I_σ) < α/n at level n = |σ|"""
    alpha = _check_alpha(alpha)
    iv = interval_of_word(w)
    return _small(iv.left.den, iv.right.den, w.length, alpha)


def in_E(w: Word, alpha) -> bool:
    """True iff both endpoint denominators exceed sqrt(1/α)"""
    alpha = _check_alpha(alpha)
    iv = interval_of_word(w)
    return _in_e(iv.left.den, iv.right.den, alpha)


@dataclass
class CensusRecord:
    """Members of L^n(α) in Θ order"""
    n: int
    alpha: Rational
    members: List[Tuple[Word, Fraction]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def thetas(self) -> List[int]:
        return [w.theta for w, _ in self.members]

    @property
    def words(self) -> List[Word]:
        return [w for w, _ in self.members]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'theta': self.thetas,
            'word': [w.bits for w, _ in self.members],
            'length': [str(length) for _, length in self.members],
            'length_decimal': [float(length) for _, length in self.members],
        }, columns=['theta', 'word', 'length', 'length_decimal'])


def large_census(n: int, alpha, threads: Optional[int] = None) -> CensusRecord:
    """
    Exact census of L^n(α) = {σ ∈ Σ^n : λ(I_σ) >= α/n}

    Any subtree whose root is already shorter than α/n is abandoned; the
    children of an interval are strictly shorter, so nothing is missed.
    """
    alpha = _check_alpha(alpha)
    _check_level(n)
    prune = partial(_small_interval, n=n, alpha=alpha)
    intervals = collect_level(n, prune=prune, threads=threads)
    logger.info("census n=%d alpha=%s: %d large intervals", n, alpha, len(intervals))
    return CensusRecord(n, alpha, [(iv.word, iv.length) for iv in intervals])


def sb_depth(z: Fraction) -> int:
    """Least n with z ∈ B^n, by mediant descent from [0, 1]"""
    if z.num == 0 or z.num == z.den:
        return 0
    p, q, ph, qh = 0, 1, 1, 1
    depth = 0
    while True:
        mp, mq = p + ph, q + qh
        depth += 1
        if mp == z.num and mq == z.den:
            return depth
        if z.num * mq < mp * z.den:
            ph, qh = mp, mq
        else:
            p, q = mp, mq


@dataclass
class QAlphaSet:
    """Q_α = {p/q in [0,1] : q² < 1/α} with Stern–Brocot depths"""
    alpha: Rational
    members: List[Fraction] = field(default_factory=list)
    depths: List[int] = field(default_factory=list)

    @property
    def a(self) -> Rational:
        return 1 / self.alpha

    @property
    def max_depth(self) -> Optional[int]:
        return max(self.depths) if self.depths else None


def _fractions_with_denominator(q: int) -> List[Fraction]:
    if q == 1:
        return [Fraction.unchecked(0, 1), Fraction.unchecked(1, 1)]
    return [Fraction.unchecked(p, q) for p in range(1, q) if math.gcd(p, q) == 1]


def q_alpha(alpha) -> QAlphaSet:
    """Farey enumeration of every irreducible p/q in [0,1] with q² < 1/α"""
    alpha = _check_alpha(alpha)
    members: List[Fraction] = []
    q = 1
    while q * q * alpha.numerator < alpha.denominator:
        members.extend(_fractions_with_denominator(q))
        q += 1
    members.sort()
    return QAlphaSet(alpha, members, [sb_depth(z) for z in members])


def k1(w: Word, alpha) -> int:
    """
    Least k such that every extension of σ by k letters is small at level n + k

    Descending from [p/q, p̂/q̂] adds at least min(q, q̂)² to the product of
    the denominators per level, so k is the least integer above
    (n a - q q̂) / (min(q, q̂)² - a), or 0 when σ is already small.

    Raises:
        DomainError: σ is not in E
    """
    alpha = _check_alpha(alpha)
    iv = interval_of_word(w)
    q, q_hat = iv.left.den, iv.right.den
    if not _in_e(q, q_hat, alpha):
        raise DomainError(f"word {w.bits!r} is not in E for alpha={alpha}")
    a = 1 / alpha
    m = min(q, q_hat)
    x = (w.length * a - q * q_hat) / (m * m - a)
    return max(0, math.floor(x) + 1)


def _edge_holds(d1: int, d2: int, level: int, alpha: Rational) -> bool:
    return _in_e(d1, d2, alpha) and _small(d1, d2, level, alpha)


def _edge_threshold(near: int, far: int, n: int, alpha: Rational) -> int:
    """
    Least k0 such that for every k >= k0 the interval with denominators
    (far + (k+1) near, far + k near) at level n + k + 1 is in E ∩ S

    The product of the denominators minus (n + k + 1)/α is a convex
    quadratic in k and the E conditions are monotone, so once the condition
    holds past the vertex it holds for good.
    """
    cap = SEARCH_CONFIG['k_search_cap']
    a = 1 / alpha
    # vertex of near² k² + (2 near far + near² - a) k + const
    vertex = (a - 2 * near * far - near * near) / (2 * near * near)
    k = max(0, math.ceil(vertex))

    def holds(j: int) -> bool:
        return _edge_holds(far + (j + 1) * near, far + j * near, n + j + 1, alpha)

    while not holds(k):
        k += 1
        if k > cap:
            raise SearchLimitError(f"no k <= {cap} found (near={near}, far={far}, n={n})")
    while k > 0 and holds(k - 1):
        k -= 1
    return k


def k2_k3(w: Word, alpha) -> Tuple[int, int]:
    """
    (k2, k3): σ0^k1 and σ1^k0 lie in E ∩ S^{n+k+1}(α) for every k >= k2
    (respectively k >= k3)

    Raises:
        SearchLimitError: no threshold below SEARCH_CONFIG['k_search_cap']
    """
    alpha = _check_alpha(alpha)
    iv = interval_of_word(w)
    q, q_hat = iv.left.den, iv.right.den
    k2 = _edge_threshold(q, q_hat, w.length, alpha)
    k3 = _edge_threshold(q_hat, q, w.length, alpha)
    return k2, k3


@dataclass
class PipelineReport:
    """Levels n1 < n2 <= n3 and the bound l(α) = #F_l + #F_r"""
    alpha: Rational
    seeds: List[Fraction]
    n1: int
    f_left: List[Word]
    f_right: List[Word]
    k2_max: int
    k3_max: int
    kappa: int
    n2: int
    e_large: List[Word]
    k1_max: int
    n3: int
    l_bound: int

    def summary(self) -> Dict:
        return {
            'alpha': str(self.alpha),
            'seeds': [str(z) for z in self.seeds],
            'n1': self.n1,
            'F_l': [w.bits for w in self.f_left],
            'F_r': [w.bits for w in self.f_right],
            'K2': self.k2_max,
            'K3': self.k3_max,
            'kappa': self.kappa,
            'n2': self.n2,
            'E_l': [w.bits for w in self.e_large],
            'K1': self.k1_max,
            'n3': self.n3,
            'l_bound': self.l_bound,
        }


def pipeline_seeds(alpha) -> List[Fraction]:
    """
    Q_α, plus the fractions with q² = 1/α exactly when 1/α is a perfect
    square above 1; those endpoints are in neither Q_α nor E
    """
    alpha = _check_alpha(alpha)
    seeds = list(q_alpha(alpha).members)
    if alpha < 1 and alpha.numerator == 1:
        root = math.isqrt(alpha.denominator)
        if root * root == alpha.denominator:
            seeds.extend(_fractions_with_denominator(root))
            seeds.sort()
    return seeds


def _contains_seed(iv: IfsInterval, seeds: List[Fraction]) -> bool:
    i = bisect_left(seeds, iv.left)
    return i < len(seeds) and not iv.right < seeds[i]


def prop1_pipeline(alpha) -> PipelineReport:
    """
    Three-level construction bounding #L^n(α) for every n >= n3

    Level n1 places every seed in B^{n1 - 1}; κ pushes the edge descendants
    of F_l / F_r into E ∩ S; K1 flushes the large E intervals at level n2.
    """
    alpha = _check_alpha(alpha)
    seeds = pipeline_seeds(alpha)
    if not seeds:
        n1 = 1
        f_left: List[Word] = []
        f_right: List[Word] = []
    else:
        n1 = max(sb_depth(z) for z in seeds) + 1
        seed_set = set(seeds)
        f_left, f_right = [], []
        for iv in iter_level(n1, prune=lambda node: not _contains_seed(node, seeds)):
            if iv.left in seed_set:
                f_left.append(iv.word)
            if iv.right in seed_set:
                f_right.append(iv.word)
    logger.info("pipeline alpha=%s: n1=%d, |F_l|=%d, |F_r|=%d", alpha, n1, len(f_left), len(f_right))

    k2_max = max((k2_k3(w, alpha)[0] for w in f_left), default=0)
    k3_max = max((k2_k3(w, alpha)[1] for w in f_right), default=0)
    kappa = max(k2_max, k3_max) + 1
    n2 = n1 + kappa

    census = large_census(n2, alpha)
    e_large = [w for w, _ in census.members if in_E(w, alpha)]
    k1_max = max((k1(w, alpha) for w in e_large), default=0)
    n3 = n2 + k1_max
    logger.info("pipeline alpha=%s: kappa=%d, n2=%d, |E_l|=%d, K1=%d, n3=%d",
                alpha, kappa, n2, len(e_large), k1_max, n3)

    return PipelineReport(
        alpha=alpha, seeds=seeds, n1=n1, f_left=f_left, f_right=f_right,
        k2_max=k2_max, k3_max=k3_max, kappa=kappa, n2=n2, e_large=e_large,
        k1_max=k1_max, n3=n3, l_bound=len(f_left) + len(f_right),
    )


def predicted_large_words(report: PipelineReport, n: int) -> List[Word]:
    """{σ0^(n-n1) : σ ∈ F_l} ∪ {σ1^(n-n1) : σ ∈ F_r} in Θ order"""
    if n < report.n1:
        raise DomainError(f"level {n} is below n1={report.n1}")
    words = {w.extend(0, n - report.n1) for w in report.f_left}
    words |= {w.extend(1, n - report.n1) for w in report.f_right}
    return sorted(words, key=lambda w: w.theta)


def inclusion_holds(report: PipelineReport, n: int, census: Optional[CensusRecord] = None) -> bool:
    """L^n(α) ⊂ predicted_large_words(report, n), checked exactly"""
    if census is None:
        census = large_census(n, report.alpha)
    predicted: Set[Word] = set(predicted_large_words(report, n))
    return all(w in predicted for w in census.words)


def remark_probe(report: PipelineReport, n: int) -> pd.DataFrame:
    """Which predicted edge words are actually large at level n (observation only)"""
    rows = []
    left = {w.extend(0, n - report.n1) for w in report.f_left}
    for w in predicted_large_words(report, n):
        iv = interval_of_word(w)
        rows.append({
            'word': w.bits,
            'side': 'left' if w in left else 'right',
            'length': str(iv.length),
            'large': not _small(iv.left.den, iv.right.den, n, report.alpha),
        })
    return pd.DataFrame(rows, columns=['word', 'side', 'length', 'large'])


def census_sweep(alpha, levels: Iterable[int], threads: Optional[int] = None) -> pd.DataFrame:
    alpha = _check_alpha(alpha)
    rows = [{'n': n, 'count': large_census(n, alpha, threads=threads).count} for n in levels]
    return pd.DataFrame(rows, columns=['n', 'count'])


def a_complement(n: int, alpha, census: Optional[CensusRecord] = None) -> List[int]:
    """
    Ā^n(α) = {j <= 2^n - 2 : x_{j+2} - x_j > α/n} ∪ {2^n - 1}

    A two-interval gap above α/n has one of its intervals at least α/(2n)
    long, so only members of L^n(α/2) and their left neighbours need the
    exact test.
    """
    alpha = _check_alpha(alpha)
    _check_level(n)
    if census is None:
        census = large_census(n, alpha / 2)
    last = (1 << n) - 1
    candidates = sorted({j for t in census.thetas for j in (t - 1, t) if 0 <= j < last})
    threshold = alpha / n
    complement = []
    for j in candidates:
        x_j = interval_of_word(Word(n, j)).left
        x_j2 = interval_of_word(Word(n, j + 1)).right
        if x_j2.to_rational() - x_j.to_rational() > threshold:
            complement.append(j)
    complement.append(last)
    return complement


def lambda_star_lower(n: int, alpha, census: Optional[CensusRecord] = None) -> Rational:
    """1 - sum of λ(I_j) over Ā^n(α); may be negative for small n"""
    return _complement_bound(n, a_complement(n, alpha, census))


def _complement_bound(n: int, complement: List[int]) -> Rational:
    removed = sum((interval_of_word(Word(n, j)).length.to_rational() for j in complement), Rational(0))
    return 1 - removed


@dataclass
class LambdaStarReport:
    n: int
    alpha: Rational
    complement: List[int]
    lower_bound: Rational
    ceiling: Rational
    census_count: int

    @property
    def holds(self) -> bool:
        return self.lower_bound >= self.ceiling


def lambda_star_report(n: int, alpha, threads: Optional[int] = None) -> LambdaStarReport:
    """Lower bound together with 1 - (2 #L^n(α/2) + 1)/(n + 1)"""
    alpha = _check_alpha(alpha)
    _check_level(n)
    census = large_census(n, alpha / 2, threads=threads)
    complement = a_complement(n, alpha, census)
    lower = _complement_bound(n, complement)
    ceiling = 1 - Rational(2 * census.count + 1, n + 1)
    logger.info("lambda-star n=%d alpha=%s: |A-bar|=%d, bound=%s", n, alpha, len(complement), lower)
    return LambdaStarReport(n, alpha, complement, lower, ceiling, census.count)
