"""Generating functions for pattern popularity in separable permutations.

Closed forms are evaluated with exact truncated series and compared with the
census in :mod:`equipop.popularity`.  Everything returns exact rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .perm import NotSeparable, direct_sum, identity, is_separable, is_sum_decomposable
from .popularity import (
    increasing_census,
    partitions_of,
    popularity_series,
    restricted_popularity_series,
    schroder_count,
)
from .series import BivariateSeries, LaurentPolynomial, TruncatedSeries

DEFAULT_ORDER = 10
DEFAULT_U = 5


# --- Schröder numbers --------------------------------------------------------

def schroder_series(N: int = DEFAULT_ORDER, radicand_t2: int = 1) -> TruncatedSeries:
    """``S = (3 - t - sqrt(1 - 6t + t^2)) / 2``.

    ``radicand_t2=-1`` gives the variant with ``- t^2`` under the root, which
    does not have integer coefficients; it is kept only to show that.
    """
    t = TruncatedSeries.t(N)
    r = (1 - 6 * t + radicand_t2 * t * t).sqrt()
    return (3 - t - r) / 2


# --- the bivariate series P(u, t) -------------------------------------------

def bivariate_P_brute(U: int = DEFAULT_U, N: int = DEFAULT_ORDER, **kw) -> BivariateSeries:
    """``[u^k t^n]`` is the census total of ``I(k)`` over separables of length n;
    ``[u^0 t^n]`` counts separables."""
    if U > N:
        raise ValueError("need U <= N")
    counts = increasing_census(U, N, **kw)
    slices = [TruncatedSeries([schroder_count(n) for n in range(N + 1)], N)]
    for k in range(1, U + 1):
        slices.append(TruncatedSeries([counts.get((k, n), 0) for n in range(N + 1)], N))
    return BivariateSeries(slices)


def bivariate_P_system(U: int = DEFAULT_U, N: int = DEFAULT_ORDER, omit_single_point: bool = False) -> BivariateSeries:
    """Solve the structural equations for ``P``, ``P+`` and ``P-`` by fixed-point
    iteration.

    ``P = 1 + (u+1)t + P+ + P-`` with ``P+ = (P-1)^2 / P`` and
    ``P- = (H + (P - H - t - 1)(S^2 - 1)) / S^2`` where ``H = (S - t - 1)/2``
    counts unmarked sum-decomposables.  The factor ``P - H - t - 1`` is the
    skew-indecomposables carrying at least one mark.  ``omit_single_point=True`` drops
    the ``- t`` (the unmarked single point), which is wrong already at u = 0.
    Each pass fixes one more power of ``t``.
    """
    if U > N:
        raise ValueError("need U <= N")
    t = TruncatedSeries.t(N)
    u = BivariateSeries.u(U, N)
    S = schroder_series(N)
    S2 = S * S
    H = (S - t - 1) / 2
    unmarked = H + 1 if omit_single_point else H + t + 1
    base = 1 + (u + 1) * t

    def step(P):
        P_plus = (P - 1) * (P - 1) / P
        P_minus = (H + (P - unmarked) * (S2 - 1)) / S2
        return base + P_plus + P_minus

    P = base
    for _ in range(N + 1):
        P = step(P)
    if step(P) != P:
        raise ArithmeticError("fixed-point iteration for P(u,t) did not settle")
    return P


def bivariate_P_closed(U: int = DEFAULT_U, N: int = DEFAULT_ORDER) -> BivariateSeries:
    """Evaluate the closed form of ``P(u, t)`` with

    ``r = sqrt(1 - 6t + t^2)`` and
    ``s = sqrt(1 + (u r - 3u - 6) t + (u^2 + u + 1) t^2)``.

    The numerator is built one order higher because the final division by
    ``4t(6 - t)`` costs one order; any surviving constant term raises.
    """
    if U > N:
        raise ValueError("need U <= N")
    M = N + 1
    t = TruncatedSeries.t(M)
    u = BivariateSeries.u(U, M)
    r = (1 - 6 * t + t * t).sqrt()
    s = (1 + (u * r - 3 * u - 6) * t + (u * u + u + 1) * (t * t)).sqrt()
    numer = (
        ((u + 1) * (t * t) - 3 * (u + 2) * t + 3) * r
        - (3 * u - 17) * t
        - 3 * (2 * u + 3) * (t * t)
        + (u + 1) * (t * t * t)
        + (r * (t - 3) - 6 * t + t * t - 3) * s
        + 3
    )
    return numer / (24 * t - 4 * t * t)


# --- Narayana, q and Gegenbauer polynomials ----------------------------------

def narayana(n: int, k: int) -> Fraction:
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if n == 0:
        return Fraction(1 if k == 0 else 0)
    if k < 1 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k) * math.comb(n, k - 1), n)


def narayana_closed_form(U: int = DEFAULT_U, N: int = DEFAULT_ORDER) -> BivariateSeries:
    """``(1 - t - tu - sqrt((1 - t - tu)^2 - 4 t^2 u)) / (2t)``.

    This expression has no constant term: it sums only over ``n >= 1``.
    """
    M = N + 1
    t = TruncatedSeries.t(M)
    u = BivariateSeries.u(U, M)
    a = 1 - t - u * t
    root = (a * a - 4 * u * (t * t)).sqrt()
    return (a - root) / (2 * t)


def narayana_gf(U: int = DEFAULT_U, N: int = DEFAULT_ORDER) -> BivariateSeries:
    """``sum N_{n,k} t^n u^k`` including the conventional ``N_{0,0} = 1``."""
    return narayana_closed_form(U, N) + 1


def q_polynomial(n: int) -> LaurentPolynomial:
    """``q_n(x) = sum_k N_{n,k} x^(k-1) (1-x)^(n-k)``; ``q_0 = 1/x``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    one_minus_x = LaurentPolynomial({0: 1, 1: -1})
    out = LaurentPolynomial()
    for k in range(n + 1):
        c = narayana(n, k)
        if c:
            out = out + LaurentPolynomial.x(k - 1) * one_minus_x ** (n - k) * c
    return out


def _rising(a, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= a + i
    return out


def q_via_hypergeometric(n: int) -> LaurentPolynomial:
    """``(1-x)^(n-1) * 2F1(1-n, -n; 2; x/(1-x))`` expanded as a polynomial.

    The hypergeometric series stops after ``z^(n-1)`` so every term
    ``z^j (1-x)^(n-1)`` is ``x^j (1-x)^(n-1-j)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    one_minus_x = LaurentPolynomial({0: 1, 1: -1})
    out = LaurentPolynomial()
    for j in range(n):
        c = _rising(1 - n, j) * _rising(-n, j) / (_rising(2, j) * math.factorial(j))
        if c:
            out = out + LaurentPolynomial.x(j) * one_minus_x ** (n - 1 - j) * c
    return out


def gegenbauer(n: int, alpha) -> LaurentPolynomial:
    """``C_n^(alpha)`` from the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    alpha = Fraction(alpha)
    x = LaurentPolynomial.x()
    prev, cur = LaurentPolynomial.constant(1), x * (2 * alpha)
    if n == 0:
        return prev
    for m in range(2, n + 1):
        prev, cur = cur, (x * cur * (2 * (m + alpha - 1)) - prev * (m + 2 * alpha - 2)) / m
    return cur


def gegenbauer_gf_check(alpha=Fraction(3, 2), order: int = 8, x_coeff: int = 2) -> bool:
    """Check ``sum C_n(x) t^n == (1 - x_coeff*x*t + t^2)^(-alpha)`` to ``order``.

    Both sides' ``t^n`` coefficients are polynomials of degree <= n in x, so
    agreement at ``order + 1`` distinct rational points proves the identity.
    """
    alpha = Fraction(alpha)
    polys = [gegenbauer(n, alpha) for n in range(order + 1)]
    t = TruncatedSeries.t(order)
    for x0 in range(order + 1):
        rhs = (1 - x_coeff * x0 * t + t * t).power(-alpha)
        if any(rhs[n] != polys[n](x0) for n in range(order + 1)):
            return False
    return True


def _gegenbauer_form(n: int, argument_numerator: LaurentPolynomial) -> LaurentPolynomial:
    """``2 (1-2x)^(n-1) C_{n-1}^(3/2)(a / (1-2x)) / (n (n+1))`` with the
    denominators cleared term by term."""
    C = gegenbauer(n - 1, Fraction(3, 2))
    base = LaurentPolynomial({0: 1, 1: -2})
    out = LaurentPolynomial()
    for j, c in C.terms.items():
        out = out + argument_numerator ** j * base ** (n - 1 - j) * c
    return out * Fraction(2, n * (n + 1))


def q_gegenbauer_relation(n: int) -> dict:
    """Compare ``q_n`` with the Gegenbauer expression at argument ``x/(1-2x)``
    and at ``1/(1-2x)``; only the latter is an identity."""
    if n < 1:
        raise ValueError("n must be positive")
    q = q_polynomial(n)
    at_x = _gegenbauer_form(n, LaurentPolynomial.x())
    at_one = _gegenbauer_form(n, LaurentPolynomial.constant(1))
    return {
        "n": n,
        "q": q,
        "x_argument": at_x,
        "unit_argument": at_one,
        "x_argument_holds": at_x == q,
        "unit_argument_holds": at_one == q,
    }


# --- popularity formulas -----------------------------------------------------

def increasing_popularity_formula(n: int, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``S^(3n-3) t^n q_{n-1}(S^-2) / (2 - S^2)^(2n-1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    S = schroder_series(N)
    t = TruncatedSeries.t(N)
    q_val = q_polynomial(n - 1)(S ** -2)
    return S ** (3 * n - 3) * t**n * q_val / (2 - S * S) ** (2 * n - 1)


def factor_F(m: int, N: int = DEFAULT_ORDER, source: str = "formula", **kw) -> TruncatedSeries:
    """``F_m = P_{I(m+1)} / P_1`` to order ``N`` (valuation ``m``).

    ``source`` picks where the two popularity series come from: the closed
    formula or the census.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    M = N + 1
    if source == "formula":
        num, den = increasing_popularity_formula(m + 1, M), increasing_popularity_formula(1, M)
    elif source == "census":
        num, den = popularity_series(identity(m + 1), M, **kw), popularity_series((1,), M, **kw)
    else:
        raise ValueError(f"unknown source {source!r}")
    return num / den


def wedge_popularity(parts: Sequence[int], N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``P_{I(l1+1)} ... P_{I(lk+1)} / P_1^(k-1)`` to order ``N``."""
    parts = list(parts)
    if not parts or any(p < 1 for p in parts):
        raise ValueError("need a nonempty partition with positive parts")
    k = len(parts)
    M = N + k - 1
    num = TruncatedSeries.constant(1, M)
    for p in parts:
        num = num * increasing_popularity_formula(p + 1, M)
    return (num / increasing_popularity_formula(1, M) ** (k - 1)).truncate(N)


def factorization_check(m: int, pi: Sequence[int], N: int = 9, **kw) -> dict:
    """Census checks of the factorisation ``P_{I(m)+pi} = F_m P_pi``.

    Also checks the decomposition identities used along the way on
    restricted census series: ``P = P+ + P-``, ``P- = (S^2 - 1) P+`` and the
    recursion for ``P+`` with sum-indecomposable increasing factors.
    """
    pi = tuple(pi)
    if not is_separable(pi):
        raise NotSeparable(f"{pi} is not separable")
    if is_sum_decomposable(pi):
        raise ValueError(f"{pi} is sum decomposable")
    sigma = direct_sum(identity(m), pi) if m else pi
    lhs = popularity_series(sigma, N, **kw)
    F = factor_F(m, N, source="census", **kw)
    rhs = F * popularity_series(pi, N, **kw)
    checks = {"factorization": lhs == rhs}
    if m >= 1:
        S = schroder_series(N)
        p_sum = restricted_popularity_series(sigma, N, "sum-decomposable", **kw)
        p_skew = restricted_popularity_series(sigma, N, "skew-decomposable", **kw)
        checks["split_sum_skew"] = lhs == p_sum + p_skew
        checks["skew_part"] = p_skew == (S * S - 1) * p_sum
        tail = TruncatedSeries([], N)
        for i in range(1, m + 1):
            rest = direct_sum(identity(m - i), pi) if m - i else pi
            tail = tail + restricted_popularity_series(identity(i), N, "sum-indecomposable", **kw) * \
                popularity_series(rest, N, **kw)
        checks["sum_part_recursion"] = p_sum == (S * S - 1) * p_skew + S * tail
    return {"m": m, "pi": pi, "pattern": sigma, "order": N, "checks": checks,
            "passed": all(checks.values())}


def identify_partition(series: TruncatedSeries, n: int, N: int) -> tuple:
    """Find the partition of ``n - 1`` whose wedge popularity equals ``series``
    to order ``N``."""
    if N < n + 3:
        raise ValueError("need N >= n + 3")
    if series.order < N:
        raise ValueError(f"series has order {series.order} < {N}")
    target = series.truncate(N)
    candidates = {lam: wedge_popularity(lam, N) for lam in partitions_of(n - 1)}
    for (l1, s1), (l2, s2) in combinations(candidates.items(), 2):
        if s1 == s2:
            raise ValueError(f"partitions {l1} and {l2} are not separated at order {N}")
    hits = [lam for lam, s in candidates.items() if s == target]
    if not hits:
        raise ValueError("series is not the popularity series of a separable pattern")
    return hits[0]
