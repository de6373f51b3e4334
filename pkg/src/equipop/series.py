"""Exact truncated power series and small Laurent polynomials.

Every coefficient is a :class:`fractions.Fraction`.  A :class:`TruncatedSeries`
of order ``N`` holds ``c_0 .. c_N`` and stands for the series modulo
``t^(N+1)``; arithmetic between series of different orders happens at the
smaller order.  Division by a series of valuation ``v > 0`` is allowed when the
dividend's low coefficients vanish, and costs ``v`` orders of precision.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Number = (int, Fraction)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class TruncatedSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        c = [_frac(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        c = c[: order + 1]
        c.extend([Fraction(0)] * (order + 1 - len(c)))
        self.coeffs = tuple(c)

    # construction
    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, c, exponent: int, order: int) -> "TruncatedSeries":
        coeffs = [0] * (order + 1)
        if exponent <= order:
            coeffs[exponent] = c
        return cls(coeffs, order)

    @classmethod
    def t(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(1, 1, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        if i > self.order:
            raise IndexError(f"coefficient t^{i} is beyond order {self.order}")
        return self.coeffs[i] if i >= 0 else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Number):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            c = Fraction(other)
            return TruncatedSeries([c * x for x in self.coeffs], self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        va, vb = self.valuation(), other.valuation()
        if va is None or vb is None:
            return TruncatedSeries([], n)
        out = [Fraction(0)] * (n + 1)
        for i in range(va, n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(vb, n - i + 1):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / c0
        out = [inv0]
        for k in range(1, n + 1):
            s = sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(-s * inv0)
        return TruncatedSeries(out, n)

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        vb = other.valuation()
        if vb is None:
            raise ZeroDivisionError("division by the zero series")
        if vb == 0:
            n = min(self.order, other.order)
            return self.truncate(n) * other.truncate(n).inverse()
        low = [i for i in range(min(vb, self.order + 1)) if self.coeffs[i]]
        if low:
            raise ValueError(f"dividend has t^{low[0]} term below divisor valuation {vb}")
        if self.order < vb or other.order < vb:
            raise ValueError("not enough precision to divide")
        a = TruncatedSeries(self.coeffs[vb:], self.order - vb)
        b = TruncatedSeries(other.coeffs[vb:], other.order - vb)
        return a / b

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def sqrt(self) -> "TruncatedSeries":
        """Square root with constant term 1; requires constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt needs constant term 1")
        a = self.coeffs
        b = [Fraction(1)]
        for k in range(1, self.order + 1):
            s = sum((b[i] * b[k - i] for i in range(1, k)), Fraction(0))
            b.append((a[k] - s) / 2)
        return TruncatedSeries(b, self.order)

    def power(self, alpha) -> "TruncatedSeries":
        """``self ** alpha`` for rational ``alpha``; constant term must be 1.

        Uses the recurrence from ``a * b' = alpha * a' * b``.
        """
        alpha = _frac(alpha)
        if self.coeffs[0] != 1:
            raise ValueError("rational powers need constant term 1")
        a = self.coeffs
        b = [Fraction(1)]
        for n in range(1, self.order + 1):
            s = sum(((alpha * k - (n - k)) * a[k] * b[n - k] for k in range(1, n + 1)), Fraction(0))
            b.append(s / n)
        return TruncatedSeries(b, self.order)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def agrees(self, other: "TruncatedSeries", order: int | None = None) -> bool:
        """Coefficient equality up to the common (or given) order."""
        n = min(self.order, other.order) if order is None else order
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.to_text()} + O(t^{self.order + 1}))"

    # text / json
    def to_text(self) -> str:
        """``c0 + c1*t + c2*t^2 + ...`` with every coefficient up to the order."""
        out = []
        for i, c in enumerate(self.coeffs):
            mono = "" if i == 0 else ("*t" if i == 1 else f"*t^{i}")
            term = _fmt(abs(c)) + mono
            if i == 0:
                out.append(("-" if c < 0 else "") + term)
            else:
                out.append(("- " if c < 0 else "+ ") + term)
        return " ".join(out)

    _TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)(?:\s*\*\s*t(?:\^(\d+))?)?")

    @classmethod
    def from_text(cls, text: str) -> "TruncatedSeries":
        body = text.strip()
        if not body:
            raise ValueError("empty series text")
        coeffs: dict = {}
        pos = 0
        for m in cls._TERM.finditer(body):
            gap = body[pos:m.start()].strip()
            if gap not in ("", "+"):
                raise ValueError(f"cannot parse series text near {gap!r}")
            if not m.group(0).strip():
                continue
            sign, num, exp = m.groups()
            has_t = "t" in m.group(0)
            e = int(exp) if exp else (1 if has_t else 0)
            coeffs[e] = coeffs.get(e, Fraction(0)) + (-1 if sign == "-" else 1) * Fraction(num)
            pos = m.end()
        if body[pos:].strip():
            raise ValueError(f"trailing text in series: {body[pos:]!r}")
        order = max(coeffs)
        return cls([coeffs.get(i, 0) for i in range(order + 1)], order)

    def to_json(self) -> list[str]:
        return [_fmt(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "TruncatedSeries":
        return cls([Fraction(s) for s in data])


class BivariateSeries:
    """Series in ``u`` and ``t``: one :class:`TruncatedSeries` in ``t`` per
    power ``u^0 .. u^U``."""

    __slots__ = ("slices",)

    def __init__(self, slices: Sequence[TruncatedSeries]):
        slices = list(slices)
        if not slices:
            raise ValueError("need at least the u^0 slice")
        n = min(s.order for s in slices)
        self.slices = tuple(s.truncate(n) for s in slices)

    @classmethod
    def from_univariate(cls, s: TruncatedSeries, U: int) -> "BivariateSeries":
        zero = TruncatedSeries([], s.order)
        return cls([s] + [zero] * U)

    @classmethod
    def u(cls, U: int, N: int) -> "BivariateSeries":
        out = [TruncatedSeries([], N) for _ in range(U + 1)]
        if U >= 1:
            out[1] = TruncatedSeries.constant(1, N)
        return cls(out)

    @property
    def U(self) -> int:
        return len(self.slices) - 1

    @property
    def order(self) -> int:
        return self.slices[0].order

    def coeff(self, k: int, n: int) -> Fraction:
        """Coefficient of ``u^k t^n``."""
        return self.slices[k][n]

    def _coerce(self, other) -> "BivariateSeries":
        if isinstance(other, BivariateSeries):
            return other
        if isinstance(other, TruncatedSeries):
            return BivariateSeries.from_univariate(other, self.U)
        if isinstance(other, Number):
            return BivariateSeries.from_univariate(TruncatedSeries.constant(other, self.order), self.U)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        U = min(self.U, other.U)
        return BivariateSeries([self.slices[k] + other.slices[k] for k in range(U + 1)])

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries([-s for s in self.slices])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (TruncatedSeries,) + Number):
            return BivariateSeries([s * other for s in self.slices])
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        U = min(self.U, other.U)
        out = []
        for k in range(U + 1):
            acc = self.slices[0] * other.slices[k]
            for i in range(1, k + 1):
                acc = acc + self.slices[i] * other.slices[k - i]
            out.append(acc)
        return BivariateSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "BivariateSeries":
        b0inv = self.slices[0].inverse()
        out = [b0inv]
        for k in range(1, self.U + 1):
            acc = self.slices[1] * out[k - 1]
            for i in range(2, k + 1):
                acc = acc + self.slices[i] * out[k - i]
            out.append(-(acc * b0inv))
        return BivariateSeries(out)

    def __truediv__(self, other):
        if isinstance(other, (TruncatedSeries,) + Number):
            return BivariateSeries([s / other for s in self.slices])
        if isinstance(other, BivariateSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = self._coerce(1)
        for _ in range(e):
            result = result * self
        return result

    def sqrt(self) -> "BivariateSeries":
        """Square root whose ``u^0 t^0`` coefficient is 1."""
        b0 = self.slices[0].sqrt()
        twice_b0 = b0 * 2
        out = [b0]
        for k in range(1, self.U + 1):
            acc = self.slices[k]
            for i in range(1, k):
                acc = acc - out[i] * out[k - i]
            out.append(acc / twice_b0)
        return BivariateSeries(out)

    def truncate(self, U: int, N: int) -> "BivariateSeries":
        return BivariateSeries([s.truncate(N) for s in self.slices[: U + 1]])

    def __eq__(self, other) -> bool:
        if isinstance(other, BivariateSeries):
            return self.slices == other.slices
        return NotImplemented

    def __hash__(self):
        return hash(self.slices)

    def __repr__(self) -> str:
        return f"BivariateSeries(U={self.U}, N={self.order})"

    def to_json(self) -> dict:
        return {str(k): s.to_json() for k, s in enumerate(self.slices)}

    @classmethod
    def from_json(cls, data: dict) -> "BivariateSeries":
        U = max(int(k) for k in data)
        return cls([TruncatedSeries.from_json(data[str(k)]) for k in range(U + 1)])


class LaurentPolynomial:
    """Exact polynomial in ``x`` allowing a single ``x^-1`` term."""

    __slots__ = ("terms",)
    MIN_EXPONENT = -1

    def __init__(self, terms: dict | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = _frac(c)
            if c:
                clean[int(e)] = c
        if clean and min(clean) < self.MIN_EXPONENT:
            raise ValueError(f"exponent {min(clean)} below {self.MIN_EXPONENT}")
        self.terms = clean

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, low: int = 0) -> "LaurentPolynomial":
        return cls({low + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def x(cls, e: int = 1) -> "LaurentPolynomial":
        return cls({e: 1})

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial":
        return cls({0: c})

    def coeff(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    @property
    def degree(self) -> int | None:
        return max(self.terms) if self.terms else None

    @property
    def low(self) -> int | None:
        return min(self.terms) if self.terms else None

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, Number):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = LaurentPolynomial.constant(1)
        for _ in range(e):
            result = result * self
        return result

    def __call__(self, x):
        """Evaluate at a rational number or substitute a series."""
        if isinstance(x, Number):
            x = Fraction(x)
            return sum((c * x**e for e, c in self.terms.items()), Fraction(0))
        if isinstance(x, TruncatedSeries):
            acc = TruncatedSeries([], x.order)
            for e, c in self.terms.items():
                acc = acc + (x**e) * c
            return acc
        raise TypeError(f"cannot evaluate at {type(x).__name__}")

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mag = abs(c)
            if e == 0:
                body = _fmt(mag)
            else:
                xe = "x" if e == 1 else f"x^{e}"
                body = xe if mag == 1 else f"{_fmt(mag)}*{xe}"
            sign = "-" if c < 0 else "+"
            out.append((sign if out or c < 0 else "") + (" " if out else "") + body)
        return " ".join(out).replace("- ", "- ").strip()
