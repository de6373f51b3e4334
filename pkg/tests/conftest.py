"""Shared brute-force oracles.

They deliberately avoid the library's own separability test and census: a
permutation is kept when no 4-subset of its entries standardises to 2413 or
3142, and occurrences are counted by standardising every index subset.
"""

from functools import lru_cache
from itertools import combinations, permutations

import pytest

BASIS = {(2, 4, 1, 3), (3, 1, 4, 2)}


def std(values):
    ranks = sorted(values)
    return tuple(ranks.index(v) + 1 for v in values)


def avoids_basis(p):
    return all(std([p[i] for i in idx]) not in BASIS for idx in combinations(range(len(p)), 4))


@lru_cache(maxsize=None)
def brute_separables(n):
    return tuple(p for p in permutations(range(1, n + 1)) if avoids_basis(p))


def brute_count(sigma, pi):
    k = len(sigma)
    return sum(1 for idx in combinations(range(len(pi)), k) if std([pi[i] for i in idx]) == tuple(sigma))


@pytest.fixture(scope="session")
def seps():
    return brute_separables
