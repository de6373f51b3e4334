"""Census of pattern occurrences over separable permutations.

The census counts every pattern of a given length in one pass: for each
length-``k`` set of positions the window of every separable permutation of
length ``n`` is reduced to its pattern code with numpy, and the codes are
tallied.  Results are exact Python integers and are cached per ``(k, n,
filter)`` for the lifetime of the process.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .perm import (
    NotSeparable,
    Perm,
    complement,
    compact,
    direct_sum,
    identity,
    is_separable,
    is_skew_decomposable,
    is_sum_decomposable,
)
from .series import TruncatedSeries
from .tree import Partition, decompose, format_partition, signature, wedge

DEFAULT_BUDGET = 10**8
FILTERS = ("all", "sum-decomposable", "skew-decomposable", "sum-indecomposable", "skew-indecomposable")


class BudgetExceeded(RuntimeError):
    pass


# --- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def _by_kind(n: int) -> tuple[tuple, tuple]:
    """(sum-decomposable, skew-decomposable) separable permutations of length n."""
    if n < 2:
        return (), ()
    sum_dec = []
    for j in range(1, n):
        heads = [(1,)] if j == 1 else _by_kind(j)[1]
        tails = _separables(n - j)
        for a in heads:
            for b in tails:
                sum_dec.append(direct_sum(a, b))
    skew_dec = [complement(p) for p in sum_dec]
    return tuple(sum_dec), tuple(skew_dec)


@lru_cache(maxsize=None)
def _separables(n: int) -> tuple:
    if n == 0:
        return ((),)
    if n == 1:
        return ((1,),)
    sum_dec, skew_dec = _by_kind(n)
    return tuple(sorted(sum_dec + skew_dec))


def enumerate_separable(n: int) -> Iterator[Perm]:
    """Separable permutations of length ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    yield from _separables(n)


def schroder_count(n: int) -> int:
    """Number of separable permutations of length ``n`` (1 for ``n == 0``)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 1:
        return 1
    # sum- and skew-decomposables are equinumerous; count one side recursively
    return 2 * _sum_decomposable_count(n)


@lru_cache(maxsize=None)
def _sum_decomposable_count(n: int) -> int:
    if n < 2:
        return 0
    total = 0
    for j in range(1, n):
        heads = 1 if j == 1 else _sum_decomposable_count(j)
        total += heads * schroder_count(n - j)
    return total


def passes_filter(pi: Sequence[int], filt: str) -> bool:
    if filt == "all":
        return True
    if filt == "sum-decomposable":
        return is_sum_decomposable(pi)
    if filt == "skew-decomposable":
        return is_skew_decomposable(pi)
    if filt == "sum-indecomposable":
        return not is_sum_decomposable(pi)
    if filt == "skew-indecomposable":
        return not is_skew_decomposable(pi)
    raise ValueError(f"unknown filter {filt!r}; expected one of {FILTERS}")


@lru_cache(maxsize=8)
def _perm_array(n: int, filt: str) -> np.ndarray:
    rows = [p for p in _separables(n) if passes_filter(p, filt)]
    return np.array(rows, dtype=np.int16).reshape(len(rows), n)


# --- census kernel -----------------------------------------------------------

def _decode(code: int, k: int) -> Perm:
    digits = []
    for _ in range(k):
        code, d = divmod(code, k)
        digits.append(d + 1)
    return tuple(reversed(digits))


def _count_windows(arr: np.ndarray, subsets: list, k: int) -> dict:
    weights = k ** np.arange(k - 1, -1, -1, dtype=np.int64)
    dense = k**k <= 10**7
    acc = np.zeros(k**k, dtype=np.int64) if dense else {}
    for sub in subsets:
        cols = arr[:, sub]
        ranks = (cols[:, None, :] < cols[:, :, None]).sum(axis=2)
        codes = ranks @ weights
        if dense:
            acc += np.bincount(codes, minlength=k**k)
        else:
            vals, cnts = np.unique(codes, return_counts=True)
            for v, c in zip(vals.tolist(), cnts.tolist()):
                acc[v] = acc.get(v, 0) + c
    if dense:
        nz = np.nonzero(acc)[0]
        return {int(c): int(acc[c]) for c in nz}
    return acc


@lru_cache(maxsize=None)
def _census(k: int, n: int, filt: str, threads: int) -> dict:
    """Pattern -> total occurrences over separable permutations of length n
    passing ``filt``."""
    if n < k:
        return {}
    arr = _perm_array(n, filt)
    if len(arr) == 0:
        return {}
    subsets = [list(s) for s in combinations(range(n), k)]
    if threads <= 1 or len(subsets) < 2 * threads:
        merged = _count_windows(arr, subsets, k)
    else:
        chunks = [subsets[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ch: _count_windows(arr, ch, k), chunks))
        merged = {}
        for part in parts:
            for code, c in part.items():
                merged[code] = merged.get(code, 0) + c
    return {_decode(code, k): c for code, c in sorted(merged.items())}


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def census_windows(k: int, N: int) -> int:
    return schroder_count(N) * math.comb(N, k)


def _check_budget(k: int, N: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    need = census_windows(k, N)
    if need > budget:
        raise BudgetExceeded(f"census of length-{k} patterns to n={N} needs {need} windows (budget {budget})")


@dataclass
class PopularityTable:
    k: int
    N: int
    counts: dict = field(default_factory=dict)  # pattern -> [count at n=k..N]
    filter: str = "all"

    def vector(self, sigma: Sequence[int]) -> list[int]:
        return self.counts[tuple(sigma)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern"] + list(range(self.k, self.N + 1)))
        for sigma, vec in self.counts.items():
            w.writerow([compact(sigma)] + vec)
        return buf.getvalue()


def popularity_table(k: int, N: int, filter: str = "all", threads: int | None = None,
                     budget: int | None = None) -> PopularityTable:
    """Occurrence totals of every separable length-``k`` pattern over the
    separable permutations of each length ``k..N``."""
    if k < 1 or N < k:
        raise ValueError("need 1 <= k <= N")
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    _check_budget(k, N, budget)
    threads = default_threads() if threads is None else max(1, threads)
    per_n = [_census(k, n, filter, threads) for n in range(k, N + 1)]
    counts = {sigma: [row.get(sigma, 0) for row in per_n] for sigma in _separables(k)}
    return PopularityTable(k, N, counts, filter)


def popularity_series(sigma: Sequence[int], N: int, filter: str = "all", **kw) -> TruncatedSeries:
    """Truncation to order ``N`` of sum_n nu_sigma(S_n) t^n from the census."""
    sigma = tuple(sigma)
    if not is_separable(sigma):
        raise NotSeparable(f"{sigma} is not separable")
    k = len(sigma)
    coeffs = [0] * (N + 1)
    if k <= N:
        vec = popularity_table(k, N, filter=filter, **kw).vector(sigma)
        coeffs[k:] = vec
    return TruncatedSeries(coeffs, N)


def restricted_popularity_series(sigma: Sequence[int], N: int, filter: str, **kw) -> TruncatedSeries:
    return popularity_series(sigma, N, filter=filter, **kw)


# --- partitions and classes --------------------------------------------------

def partitions_of(m: int) -> list[Partition]:
    """All partitions of ``m``, weakly decreasing, in reverse lexicographic order."""
    if m < 0:
        raise ValueError("m must be nonnegative")

    def gen(rest: int, cap: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return list(gen(m, m))


@dataclass
class ClassReport:
    k: int
    N: int
    classes: list  # [(popularity vector, [patterns])]
    signature_classes: list  # [(partition, [patterns])]

    @property
    def coincide(self) -> bool:
        a = sorted(sorted(ps) for _, ps in self.classes)
        b = sorted(sorted(ps) for _, ps in self.signature_classes)
        return a == b

    def to_dict(self) -> dict:
        sig_of = {}
        for lam, ps in self.signature_classes:
            for p in ps:
                sig_of[p] = lam
        classes = []
        for vec, ps in self.classes:
            sigs = sorted({format_partition(sig_of[p]) for p in ps})
            classes.append({
                "signature": sigs[0] if len(sigs) == 1 else sigs,
                "popularity": vec,
                "patterns": [compact(p) for p in ps],
            })
        return {
            "pattern_length": self.k,
            "horizon": self.N,
            "certified_to": self.N,
            "classes": classes,
            "signature_classes": [
                {"signature": format_partition(lam), "patterns": [compact(p) for p in ps]}
                for lam, ps in self.signature_classes
            ],
            "coincide": self.coincide,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def equipopularity_classes(k: int, N: int, **kw) -> ClassReport:
    """Group separable length-``k`` patterns by popularity vector up to ``N``,
    and separately by signature."""
    table = popularity_table(k, N, **kw)
    by_vec: dict = {}
    by_sig: dict = {}
    for sigma, vec in table.counts.items():
        by_vec.setdefault(tuple(vec), []).append(sigma)
        by_sig.setdefault(signature(decompose(sigma)), []).append(sigma)
    classes = sorted(([list(v), ps] for v, ps in by_vec.items()), key=lambda c: c[1][0])
    sig_classes = sorted(([lam, ps] for lam, ps in by_sig.items()), key=lambda c: c[0], reverse=True)
    return ClassReport(k, N, [tuple(c) for c in classes], [tuple(c) for c in sig_classes])


def verify_classification(k: int, N: int, **kw) -> dict:
    """Check popularity classes against signature classes at horizon ``N``.

    Distinct vectors prove distinct classes; equal vectors are only certified
    up to ``N``.
    """
    report = equipopularity_classes(k, N, **kw)
    expected = len(partitions_of(k - 1))
    wedges_ok = True
    vec_of = {p: tuple(v) for v, ps in report.classes for p in ps}
    for lam, ps in report.signature_classes:
        omega = wedge(lam)[1]
        if omega not in ps or any(vec_of[p] != vec_of[omega] for p in ps):
            wedges_ok = False
    checks = {
        "classes_equal_signature_classes": report.coincide,
        "class_count_is_partition_count": len(report.classes) == expected,
        "wedge_in_its_class": wedges_ok,
    }
    return {
        "pattern_length": k,
        "horizon": N,
        "classes": len(report.classes),
        "expected": expected,
        "checks": checks,
        "passed": all(checks.values()),
        "report": report,
    }


def increasing_census(U: int, N: int, **kw) -> dict:
    """(k, n) -> nu_{I(k)}(S_n) for 1 <= k <= U, k <= n <= N."""
    out = {}
    for k in range(1, U + 1):
        if k > N:
            break
        vec = popularity_table(k, N, **kw).vector(identity(k))
        for n, c in zip(range(k, N + 1), vec):
            out[(k, n)] = c
    return out
