"""Lexicographic (Lehmer code) permutation ranking and enumeration.

Ranks run from 0 to n!-1 in lexicographic order of the permutation word,
which is also the order ``itertools.permutations(range(n))`` produces.
Enumeration is capped at n <= 8 (40320 permutations) so exhaustive
computations stay fast.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from .errors import ValidationError

MAX_ENUM_N = 8


def check_enum_size(n: int, what: str = "operation") -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"{what}: n must be a positive integer")
    if n > MAX_ENUM_N:
        raise ValidationError(f"{what}: n={n} exceeds the enumeration cap {MAX_ENUM_N}")


def permutation_rank(perm) -> int:
    """Lexicographic rank of a permutation of 0..n-1. O(n^2)."""
    perm = tuple(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValidationError("permutation_rank: not a permutation of 0..n-1")
    rank = 0
    for i, v in enumerate(perm):
        smaller_later = sum(1 for w in perm[i + 1 :] if w < v)
        rank += smaller_later * math.factorial(n - 1 - i)
    return rank


def permutation_unrank(n: int, rank: int) -> tuple:
    """Inverse of permutation_rank. O(n^2)."""
    if not (0 <= rank < math.factorial(n)):
        raise ValidationError(f"permutation_unrank: rank {rank} out of range for n={n}")
    available = list(range(n))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(available.pop(idx))
    return tuple(out)


@lru_cache(maxsize=None)
def permutation_matrix(n: int) -> np.ndarray:
    """All permutations of 0..n-1 as an (n!, n) int array in rank order."""
    check_enum_size(n, "permutation_matrix")
    mat = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    mat.setflags(write=False)
    return mat
