"""
Invariant suite
Exact checks of the partition machinery and of the question mark function,
run by `main.py verify`
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction as Rational
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd
from tabulate import tabulate

from .exact_arithmetic import ONE, ZERO, Fraction, apply, farey_det, generator
from .partition import children, interval_of_word, iter_level, stern_brocot, word_of_index
from .question_mark import DyadicRational, dyadic_map, measure_interval, qm_inverse_dyadic, qm_rational

logger = logging.getLogger(__name__)

Check = Callable[[], Tuple[bool, str]]

INCLUSION_ALPHAS = (Rational(1, 2), Rational(1, 5), Rational(1), Rational(2))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


class InvariantSuite:
    """Named exact checks up to a maximum partition level"""

    def __init__(self, max_level: int = 12, samples: int = 10_000, extremal_depth: int = 1000, seed: int = 0):
        self.max_level = max_level
        self.samples = samples
        self.extremal_depth = extremal_depth
        self.seed = seed
        self.results: List[CheckResult] = []
        self.checks: Dict[str, Check] = {
            'interval_cover': self.check_interval_cover,
            'stern_brocot_coincidence': self.check_stern_brocot,
            'word_order': self.check_word_order,
            'dyadic_endpoint_values': self.check_dyadic_endpoints,
            'farey_neighbours': self.check_farey_neighbours,
            'extremal_lengths': self.check_extremal_lengths,
            'child_lengths_shrink': self.check_child_lengths,
            'functional_equation': self.check_functional_equation,
            'symmetry': self.check_symmetry,
            'inversion_round_trip': self.check_inversion,
            'dense_inclusion': self.check_dense_inclusion,
            'sampled_deep_words': self.check_sampled_deep_words,
        }

    def _levels(self):
        return range(0, self.max_level + 1)

    def _random_fractions(self) -> List[Fraction]:
        rng = np.random.default_rng(self.seed)
        dens = rng.integers(1, 10**6, size=self.samples, endpoint=True)
        nums = [int(rng.integers(0, d, endpoint=True)) for d in dens]
        return [Fraction(p, int(q)) for p, q in zip(nums, dens)]

    def check_interval_cover(self) -> Tuple[bool, str]:
        for n in self._levels():
            intervals = list(iter_level(n))
            if len(intervals) != 1 << n:
                return False, f"level {n}: {len(intervals)} intervals"
            if intervals[0].left != ZERO or intervals[-1].right != ONE:
                return False, f"level {n}: does not span [0,1]"
            for prev, cur in zip(intervals, intervals[1:]):
                if prev.right != cur.left:
                    return False, f"level {n}: gap after {prev.word}"
        return True, f"levels 0..{self.max_level}"

    def check_stern_brocot(self) -> Tuple[bool, str]:
        for n in self._levels():
            endpoints = tuple(iv.left for iv in iter_level(n)) + (ONE,)
            if endpoints != stern_brocot(n).points:
                return False, f"level {n}: endpoints differ from B^{n}"
        return True, f"levels 0..{self.max_level}"

    def check_word_order(self) -> Tuple[bool, str]:
        for n in self._levels():
            intervals = list(iter_level(n))
            if [iv.word.theta for iv in intervals] != list(range(1 << n)):
                return False, f"level {n}: traversal not in Θ order"
            if any(not a.left < b.left for a, b in zip(intervals, intervals[1:])):
                return False, f"level {n}: Θ order differs from endpoint order"
        return True, f"levels 0..{self.max_level}"

    def check_dyadic_endpoints(self) -> Tuple[bool, str]:
        for n in self._levels():
            expected = DyadicRational(1, n)
            for iv in iter_level(n):
                if qm_rational(iv.left) != DyadicRational(iv.word.theta, n):
                    return False, f"?({iv.left}) != {iv.word.theta}/2^{n}"
                if measure_interval(iv.left, iv.right) != expected:
                    return False, f"μ(I_{iv.word}) != 2^-{n}"
        return True, f"levels 0..{self.max_level}"

    def check_farey_neighbours(self) -> Tuple[bool, str]:
        for n in self._levels():
            points = stern_brocot(n).points
            for f, g in zip(points, points[1:]):
                if farey_det(f, g) != 1:
                    return False, f"level {n}: {f}, {g} are not Farey neighbours"
        return True, f"levels 0..{self.max_level}"

    def check_extremal_lengths(self) -> Tuple[bool, str]:
        left = right = next(iter_level(0))
        for k in range(1, self.extremal_depth + 1):
            left, right = children(left)[0], children(right)[1]
            target = Fraction(1, k + 1)
            if left.length != target or right.length != target:
                return False, f"λ(I_0^{k}) or λ(I_1^{k}) != 1/{k + 1}"
        for n in self._levels():
            longest = max(iv.length for iv in iter_level(n))
            if longest != Fraction(1, n + 1):
                return False, f"level {n}: longest interval {longest}"
        return True, f"k <= {self.extremal_depth}, levels 0..{self.max_level}"

    def check_child_lengths(self) -> Tuple[bool, str]:
        for n in range(self.max_level):
            for iv in iter_level(n):
                if any(not child.length < iv.length for child in children(iv)):
                    return False, f"child of {iv.word} not shorter"
        return True, f"levels 0..{self.max_level - 1}"

    def check_functional_equation(self) -> Tuple[bool, str]:
        for x in self._random_fractions():
            y = qm_rational(x)
            for i in (0, 1):
                if qm_rational(apply(generator(i), x)) != dyadic_map(i, y):
                    return False, f"?(M_{i}({x})) != P_{i}(?({x}))"
        return True, f"{self.samples} random rationals"

    def check_symmetry(self) -> Tuple[bool, str]:
        for x in self._random_fractions():
            mirrored = Fraction(x.den - x.num, x.den)
            if qm_rational(mirrored) != DyadicRational(1, 0) - qm_rational(x):
                return False, f"?(1 - {x}) != 1 - ?({x})"
        return True, f"{self.samples} random rationals"

    def check_inversion(self) -> Tuple[bool, str]:
        for n in self._levels():
            for iv in iter_level(n):
                if qm_inverse_dyadic(qm_rational(iv.left)) != iv.left:
                    return False, f"inverse of ?({iv.left}) differs"
        return True, f"levels 0..{self.max_level}"

    def check_dense_inclusion(self) -> Tuple[bool, str]:
        # j in A^n(α): x_{j+2} - x_j <= α/n; both x_j and x_{j+1} must lie in Λ^n(α)
        for n in range(1, self.max_level + 1):
            points = stern_brocot(n).points
            step = DyadicRational(1, n)
            for alpha in INCLUSION_ALPHAS:
                reach = alpha / n
                for j in range(len(points) - 2):
                    if points[j + 2].to_rational() - points[j].to_rational() > reach:
                        continue
                    for x in (points[j], points[j + 1]):
                        target = Fraction.from_rational(min(Rational(1), x.to_rational() + reach))
                        if qm_rational(target) - qm_rational(x) < step:
                            return False, f"level {n}, α={alpha}: ?({x} + α/n) - ?({x}) < 2^-{n}"
        return True, f"levels 1..{self.max_level}, α in {{{', '.join(map(str, INCLUSION_ALPHAS))}}}"

    def check_sampled_deep_words(self) -> Tuple[bool, str]:
        rng = np.random.default_rng(self.seed)
        count = min(self.samples, 2_000)
        for _ in range(count):
            n = int(rng.integers(15, 20, endpoint=True))
            w = word_of_index(n, int(rng.integers(0, 1 << n)))
            iv = interval_of_word(w)
            if measure_interval(iv.left, iv.right) != DyadicRational(1, n):
                return False, f"μ(I_{w}) != 2^-{n}"
            if farey_det(iv.left, iv.right) != 1:
                return False, f"endpoints of I_{w} are not Farey neighbours"
            if qm_rational(iv.left) != DyadicRational(w.theta, n):
                return False, f"?({iv.left}) != {w.theta}/2^{n}"
        return True, f"{count} random words at levels 15..20"

    def run_check(self, name: str) -> CheckResult:
        start = time.perf_counter()
        try:
            passed, detail = self.checks[name]()
        except Exception as e:
            logger.exception("check %s raised", name)
            passed, detail = False, f"{type(e).__name__}: {e}"
        result = CheckResult(name, passed, detail, time.perf_counter() - start)
        logger.info("%s: %s (%s, %.2fs)", name, 'ok' if passed else 'FAILED', detail, result.seconds)
        self.results.append(result)
        return result

    def run(self) -> List[CheckResult]:
        self.results = []
        for name in self.checks:
            self.run_check(name)
        return self.results

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def get_summary(self) -> Dict:
        total = len(self.results)
        failed = [r.name for r in self.results if not r.passed]
        return {'max_level': self.max_level, 'total_checks': total,
                'passed': total - len(failed), 'failed': failed}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{'check': r.name, 'passed': r.passed, 'detail': r.detail} for r in self.results],
                            columns=['check', 'passed', 'detail'])

    def render(self) -> str:
        return tabulate(self.to_frame(), headers='keys', tablefmt='github', showindex=False)
