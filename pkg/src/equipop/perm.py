"""Permutations in one-line notation, pattern containment and symmetries.

A permutation is a plain tuple of the integers 1..n in some order.  The empty
tuple is allowed and only shows up as the constant term of series.

Occurrence counting here is deliberately exhaustive: every index subset is
inspected.  It is slow but obviously correct, and the faster census kernel in
:mod:`equipop.popularity` is tested against it.
"""

from __future__ import annotations

import enum
import math
import re
from itertools import combinations
from typing import Iterable, Sequence

Perm = tuple  # tuple[int, ...], 1-based values


class NotSeparable(ValueError):
    """Raised when a separable permutation was required."""


def as_perm(values: Iterable[int]) -> Perm:
    """Validate ``values`` as a permutation of 1..n and return it as a tuple."""
    p = tuple(int(v) for v in values)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def parse_perm(text: str) -> Perm:
    """Parse ``"24153"``, ``"2 4 1 5 3"`` or ``"2,4,1,5,3"``."""
    text = text.strip()
    if not text:
        return ()
    if re.search(r"[\s,]", text):
        parts = [s for s in re.split(r"[\s,]+", text) if s]
    else:
        if not text.isdigit() or "0" in text:
            raise ValueError(f"cannot parse permutation {text!r}")
        parts = list(text)
    try:
        return as_perm(int(s) for s in parts)
    except ValueError as exc:
        raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None


def format_perm(pi: Sequence[int], sep: str = " ") -> str:
    """Delimiter-separated by default; pass ``sep=""`` for the compact form."""
    if sep == "" and len(pi) > 9:
        raise ValueError("compact form only exists for length <= 9")
    return sep.join(str(v) for v in pi)


def compact(pi: Sequence[int]) -> str:
    """Compact digit string when possible, otherwise comma-separated."""
    return format_perm(pi, "" if len(pi) <= 9 else ",")


def standardize(values: Sequence[int]) -> Perm:
    """The permutation order-isomorphic to a sequence of distinct numbers."""
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for rank, i in enumerate(order, 1):
        out[i] = rank
    return tuple(out)


def pattern_at(pi: Sequence[int], indices: Iterable[int]) -> Perm:
    """Pattern formed by the entries of ``pi`` at the given 1-based indices."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate index in {idx}")
    n = len(pi)
    for i in idx:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} out of range 1..{n}")
    idx.sort()
    return standardize([pi[i - 1] for i in idx])


def occurrences(sigma: Sequence[int], pi: Sequence[int]) -> int:
    """Number of occurrences of the pattern ``sigma`` in ``pi`` (brute force)."""
    k = len(sigma)
    if k == 0:
        raise ValueError("the empty pattern is not counted")
    sigma = tuple(sigma)
    # compare by relative order directly, avoiding a sort per window
    pos_of_rank = [0] * k
    for i, v in enumerate(sigma):
        pos_of_rank[v - 1] = i
    count = 0
    for window in combinations(pi, k):
        if all(window[pos_of_rank[j]] < window[pos_of_rank[j + 1]] for j in range(k - 1)):
            count += 1
    return count


def contains(pi: Sequence[int], sigma: Sequence[int]) -> bool:
    k = len(sigma)
    pos_of_rank = [0] * k
    for i, v in enumerate(sigma):
        pos_of_rank[v - 1] = i
    for window in combinations(pi, k):
        if all(window[pos_of_rank[j]] < window[pos_of_rank[j + 1]] for j in range(k - 1)):
            return True
    return False


def direct_sum(sigma: Sequence[int], tau: Sequence[int]) -> Perm:
    n = len(sigma)
    return tuple(sigma) + tuple(v + n for v in tau)


def skew_sum(sigma: Sequence[int], tau: Sequence[int]) -> Perm:
    m = len(tau)
    return tuple(v + m for v in sigma) + tuple(tau)


def perm_sum(sigma: Sequence[int], tau: Sequence[int], kind: str = "direct") -> Perm:
    """``kind`` is ``"direct"`` (``⊕``) or ``"skew"`` (``⊖``)."""
    if not sigma or not tau:
        raise ValueError("both summands must be nonempty")
    if kind == "direct":
        return direct_sum(sigma, tau)
    if kind == "skew":
        return skew_sum(sigma, tau)
    raise ValueError(f"unknown sum kind {kind!r}")


def reverse(pi: Sequence[int]) -> Perm:
    return tuple(reversed(pi))


def complement(pi: Sequence[int]) -> Perm:
    """``i -> n + 1 - pi(i)``."""
    n = len(pi)
    return tuple(n + 1 - v for v in pi)


def inverse(pi: Sequence[int]) -> Perm:
    out = [0] * len(pi)
    for i, v in enumerate(pi, 1):
        out[v - 1] = i
    return tuple(out)


class Symmetry(enum.Enum):
    """The eight symmetries of the square acting on permutation plots.

    A value ``(swap, flip_x, flip_y)`` means: transpose the plot if ``swap``,
    then mirror positions if ``flip_x`` and values if ``flip_y``.  So the
    element is ``reverse**flip_x ∘ complement**flip_y ∘ inverse**swap``.
    Composite names read as function composition, rightmost applied first.
    """

    IDENTITY = (False, False, False)
    REVERSE = (False, True, False)
    COMPLEMENT = (False, False, True)
    INVERSE = (True, False, False)
    REVERSE_COMPLEMENT = (False, True, True)
    REVERSE_INVERSE = (True, True, False)
    COMPLEMENT_INVERSE = (True, False, True)
    REVERSE_COMPLEMENT_INVERSE = (True, True, True)

    def __matmul__(self, other: "Symmetry") -> "Symmetry":
        """``g @ h`` is the symmetry ``g ∘ h`` (apply ``h`` first)."""
        sg, xg, yg = self.value
        sh, xh, yh = other.value
        if sg:
            xh, yh = yh, xh
        return Symmetry((sg != sh, xg != xh, yg != yh))

    @property
    def inverse_element(self) -> "Symmetry":
        for g in Symmetry:
            if (g @ self) is Symmetry.IDENTITY:
                return g
        raise AssertionError("group is not closed")


def apply_symmetry(pi: Sequence[int], g: Symmetry) -> Perm:
    swap, fx, fy = g.value
    out = tuple(pi)
    if swap:
        out = inverse(out)
    if fy:
        out = complement(out)
    if fx:
        out = reverse(out)
    return out


def is_separable(pi: Sequence[int]) -> bool:
    """True iff ``pi`` avoids both 2413 and 3142."""
    n = len(pi)
    if n < 4:
        return True
    for a, b, c, d in combinations(pi, 4):
        # 2413: c < a < d < b ; 3142: b < d < a < c
        if c < a < d < b or b < d < a < c:
            return False
    return True


def sum_components(pi: Sequence[int]) -> list[Perm]:
    """Split ``pi`` into its sum-indecomposable blocks, left to right."""
    blocks, start, high = [], 0, 0
    for i, v in enumerate(pi, 1):
        high = max(high, v)
        if high == i:
            blocks.append(standardize(pi[start:i]))
            start = i
    return blocks


def skew_components(pi: Sequence[int]) -> list[Perm]:
    """Split ``pi`` into its skew-indecomposable blocks, left to right."""
    n = len(pi)
    blocks, start, low = [], 0, n + 1
    for i, v in enumerate(pi, 1):
        low = min(low, v)
        if low == n - i + 1:
            blocks.append(standardize(pi[start:i]))
            start = i
    return blocks


def is_sum_decomposable(pi: Sequence[int]) -> bool:
    return len(sum_components(pi)) > 1


def is_skew_decomposable(pi: Sequence[int]) -> bool:
    return len(skew_components(pi)) > 1


def symmetric_group_popularity(k: int, n: int) -> int:
    """Total occurrences of any fixed length-``k`` pattern over all of S_n."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if k > n:
        return 0
    return math.factorial(n) // math.factorial(k) * math.comb(n, k)
