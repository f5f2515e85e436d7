"""
IFS partitions
Binary words, the Θ order, intervals I_σ = M_σ([0,1]), Stern–Brocot levels
and streaming / pruned / parallel traversal of partition levels
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from .config import PARTITION_CONFIG, SPECTRAL_CONFIG
from .errors import BudgetExceededError, DomainError
from .exact_arithmetic import (IDENTITY, M0, M1, ONE, ZERO, Fraction, UnimodularMap,
                               apply, compose, generator)
from .question_mark import DyadicRational

logger = logging.getLogger(__name__)

# (depth, theta, p, q, p_hat, q_hat) of a tree node
Node = Tuple[int, int, int, int, int, int]
ROOT: Node = (0, 0, 0, 1, 1, 1)

Predicate = Callable[['IfsInterval'], bool]


@dataclass(frozen=True)
class Word:
    """Binary word σ_1...σ_n stored as its length and index Θ(σ)"""
    length: int
    theta: int

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"negative word length {self.length}")
        if self.theta < 0 or self.theta >> self.length:
            raise DomainError(f"index {self.theta} out of range for length {self.length}")

    @classmethod
    def from_bits(cls, bits: str) -> 'Word':
        if bits and set(bits) - {'0', '1'}:
            raise DomainError(f"not a binary word: {bits!r}")
        return cls(len(bits), int(bits, 2) if bits else 0)

    @property
    def bits(self) -> str:
        return format(self.theta, 'b').zfill(self.length) if self.length else ''

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.bits

    def __add__(self, other: 'Word') -> 'Word':
        return Word(self.length + other.length, (self.theta << other.length) | other.theta)

    def append(self, bit: int) -> 'Word':
        return Word(self.length + 1, (self.theta << 1) | bit)

    def extend(self, bit: int, count: int) -> 'Word':
        """σ followed by `count` copies of `bit`"""
        tail = (1 << count) - 1 if bit else 0
        return Word(self.length + count, (self.theta << count) | tail)

    def flipped(self) -> 'Word':
        """Exchange 0 and 1 (mirror image of the interval about 1/2)"""
        return Word(self.length, ((1 << self.length) - 1) ^ self.theta)


@dataclass(frozen=True)
class IfsInterval:
    """I_σ = [x_σ, x_σ̂] together with the word σ"""
    word: Word
    left: Fraction
    right: Fraction

    @cached_property
    def map(self) -> UnimodularMap:
        """M_σ, recovered from its endpoint images M_σ(0), M_σ(1)"""
        return UnimodularMap.from_endpoints(self.left, self.right)

    @property
    def level(self) -> int:
        return self.word.length

    @property
    def length(self) -> Fraction:
        """Lebesgue length 1 / (q q̂) of Farey neighbours"""
        return Fraction.unchecked(1, self.left.den * self.right.den)

    @property
    def measure(self) -> DyadicRational:
        return DyadicRational(1, self.word.length)


@dataclass(frozen=True)
class SternBrocotLevel:
    """B^n as an increasing tuple of 2^n + 1 fractions"""
    n: int
    points: Tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.points)


def theta(w: Word) -> int:
    """Θ(σ) = sum_j σ_j 2^(n-j)"""
    return w.theta


def word_of_index(n: int, j: int) -> Word:
    if n < 0 or not 0 <= j < (1 << n):
        raise DomainError(f"index {j} out of range for level {n}")
    return Word(n, j)


def successor_word(w: Word) -> Optional[Word]:
    """Lexicographic successor within Σ^n, None after 1^n"""
    if w.theta == (1 << w.length) - 1:
        return None
    return Word(w.length, w.theta + 1)


def interval_of_word(w: Word) -> IfsInterval:
    """I_σ with M_σ = M_σ1 ∘ ... ∘ M_σn composed left to right"""
    m = IDENTITY
    for bit in w.bits:
        m = compose(m, generator(int(bit)))
    return IfsInterval(w, apply(m, ZERO), apply(m, ONE))


def children(iv: IfsInterval) -> Tuple[IfsInterval, IfsInterval]:
    """I_σ0 and I_σ1; they share the mediant of the endpoints"""
    m0 = compose(iv.map, M0)
    m1 = compose(iv.map, M1)
    return (IfsInterval(iv.word.append(0), apply(m0, ZERO), apply(m0, ONE)),
            IfsInterval(iv.word.append(1), apply(m1, ZERO), apply(m1, ONE)))


def stern_brocot(n: int) -> SternBrocotLevel:
    """B^n by repeated mediant insertion"""
    if n < 0:
        raise DomainError(f"negative level {n}")
    budget = PARTITION_CONFIG['max_materialized_level']
    if n > budget:
        raise BudgetExceededError(
            f"level {n} exceeds the materialisation budget {budget}; use enumerate_level")
    pairs = [(0, 1), (1, 1)]
    for _ in range(n):
        refined = [pairs[0]]
        for (p, q), (ph, qh) in zip(pairs, pairs[1:]):
            refined.append((p + ph, q + qh))
            refined.append((ph, qh))
        pairs = refined
    return SternBrocotLevel(n, tuple(Fraction.unchecked(p, q) for p, q in pairs))


def stern_brocot_arrays(n: int, max_level: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators of B^n as int64 arrays"""
    budget = SPECTRAL_CONFIG['max_atom_level'] if max_level is None else max_level
    if n < 0:
        raise DomainError(f"negative level {n}")
    if n > budget:
        raise BudgetExceededError(f"level {n} exceeds the atom budget {budget}")
    p = np.array([0, 1], dtype=np.int64)
    q = np.array([1, 1], dtype=np.int64)
    for _ in range(n):
        p2 = np.empty(2 * p.size - 1, dtype=np.int64)
        q2 = np.empty(2 * q.size - 1, dtype=np.int64)
        p2[0::2], q2[0::2] = p, q
        p2[1::2], q2[1::2] = p[:-1] + p[1:], q[:-1] + q[1:]
        p, q = p2, q2
    return p, q


def _interval_of_node(node: Node) -> IfsInterval:
    depth, idx, p, q, ph, qh = node
    return IfsInterval(Word(depth, idx), Fraction.unchecked(p, q), Fraction.unchecked(ph, qh))


def _walk(root: Node, n: int, prune: Optional[Predicate]) -> Iterator[IfsInterval]:
    # explicit stack: at most one pending sibling per level
    stack = [root]
    while stack:
        node = stack.pop()
        iv = _interval_of_node(node)
        if prune is not None and prune(iv):
            continue
        depth, idx, p, q, ph, qh = node
        if depth == n:
            yield iv
            continue
        mp, mq = p + ph, q + qh
        stack.append((depth + 1, 2 * idx + 1, mp, mq, ph, qh))
        stack.append((depth + 1, 2 * idx, p, q, mp, mq))


def iter_level(n: int, prune: Optional[Predicate] = None) -> Iterator[IfsInterval]:
    """
    Yield the intervals of level n in increasing order

    Args:
        n: partition level
        prune: when prune(I) holds, I and its whole subtree are skipped
    """
    if n < 0:
        raise DomainError(f"negative level {n}")
    return _walk(ROOT, n, prune)


def enumerate_level(n: int, visitor: Callable[[IfsInterval], None],
                    prune: Optional[Predicate] = None) -> int:
    """Depth-first visit of level n in Θ order; returns the number of visited intervals"""
    count = 0
    for iv in iter_level(n, prune):
        visitor(iv)
        count += 1
    return count


def _frontier(depth: int, prune: Optional[Predicate]) -> List[Node]:
    return [(iv.word.length, iv.word.theta, iv.left.num, iv.left.den, iv.right.num, iv.right.den)
            for iv in _walk(ROOT, depth, prune)]


def _collect_subtree(task) -> List[IfsInterval]:
    root, n, select, prune = task
    return [iv for iv in _walk(root, n, prune) if select is None or select(iv)]


def collect_level(n: int, select: Optional[Predicate] = None, prune: Optional[Predicate] = None,
                  threads: Optional[int] = None, split_depth: Optional[int] = None) -> List[IfsInterval]:
    """
    Collect the intervals of level n accepted by `select`, in Θ order

    Subtrees below `split_depth` are independent; with threads > 1 they are
    walked in a process pool and concatenated in root order, so the result is
    the same for any thread count. `select` and `prune` must be picklable
    (module-level functions or functools.partial objects) when threads > 1.
    """
    threads = PARTITION_CONFIG['threads'] if threads is None else threads
    split_depth = PARTITION_CONFIG['split_depth'] if split_depth is None else split_depth
    if n < 0:
        raise DomainError(f"negative level {n}")
    if threads <= 1 or n <= split_depth:
        return _collect_subtree((ROOT, n, select, prune))

    roots = _frontier(split_depth, prune)
    logger.debug("level %d: %d subtrees at depth %d on %d workers", n, len(roots), split_depth, threads)
    collected: List[IfsInterval] = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(_collect_subtree, [(r, n, select, prune) for r in roots]):
            collected.extend(part)
    return collected
