"""Exact numbers for angular-momentum algebra.

HalfInt        Integer or half-integer, stored as twice its value.
SqrtRational   sign * sqrt(p/q) with p/q a non-negative rational.
factorial      Thread-safe memoised factorial on Python ints.

Wigner symbols are always of the form sign * sqrt(rational), so SqrtRational
is closed under the products and quotients they need.  Addition is not
offered; sums of surds are combined in ``sum_surds``.
"""

from __future__ import annotations

import functools
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

_FRACTION_LITERAL = re.compile(r"[+-]?\d+(/\d+)?")


# ---------------------------------------------------------------------------
# Half-integers
# ---------------------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An integer or half-integer ``twice / 2``."""

    twice: int

    def __post_init__(self) -> None:
        if isinstance(self.twice, bool) or not isinstance(self.twice, int):
            raise TypeError(f"twice must be an int, got {type(self.twice).__name__}")

    @classmethod
    def of(cls, value: HalfInt | int | Fraction | str) -> HalfInt:
        """Coerce an int, Fraction, ``"p/2"`` string or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Fraction):
            doubled = 2 * value
            if doubled.denominator != 1:
                raise ValueError(f"{value} is not an integer or half-integer")
            return cls(int(doubled))
        if isinstance(value, float):
            raise TypeError(f"floats are not accepted as half-integers, got {value!r}")
        raise ValueError(f"cannot interpret {value!r} as a half-integer")

    @classmethod
    def parse(cls, text: str) -> HalfInt:
        """Parse ``"3/2"``, ``"-1/2"`` or ``"2"``; decimal literals are rejected."""
        cleaned = text.strip()
        if not _FRACTION_LITERAL.fullmatch(cleaned):
            raise ValueError(f"expected an integer or p/q fraction, got {text!r}")
        try:
            value = Fraction(cleaned)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {text!r} as a half-integer") from exc
        return cls.of(value)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __add__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.twice)

    def __abs__(self) -> HalfInt:
        return HalfInt(abs(self.twice))

    def __lt__(self, other: object) -> bool:
        if isinstance(other, HalfInt):
            return self.twice < other.twice
        if isinstance(other, int | Fraction):
            return self.as_fraction() < other
        return NotImplemented

    def __float__(self) -> float:
        return self.twice / 2

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def half_integer_range(j: HalfInt) -> list[HalfInt]:
    """Magnetic quantum numbers ``-j, -j+1, ..., j`` in ascending order."""
    if j.twice < 0:
        raise ValueError(f"spin must be non-negative, got {j}")
    return [HalfInt(tm) for tm in range(-j.twice, j.twice + 1, 2)]


# ---------------------------------------------------------------------------
# Factorials
# ---------------------------------------------------------------------------


class FactorialTable:
    """Grow-only factorial cache safe to share between threads."""

    def __init__(self) -> None:
        self._values: list[int] = [1]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"factorial of negative number {n}")
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            while len(self._values) <= n:
                k = len(self._values)
                self._values.append(self._values[-1] * k)
            return self._values[n]

    def __len__(self) -> int:
        return len(self._values)


factorial = FactorialTable()


# ---------------------------------------------------------------------------
# Signed square roots of rationals
# ---------------------------------------------------------------------------


def _sign(value: Fraction | int) -> int:
    return (value > 0) - (value < 0)


def rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        raise ValueError("square root of a negative rational")
    p, q = value.numerator, value.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp != p or rq * rq != q:
        return None
    return Fraction(rp, rq)


@functools.total_ordering
@dataclass(frozen=True)
class SqrtRational:
    """``sign * sqrt(radicand)`` with ``radicand`` a reduced non-negative Fraction.

    Zero is represented only as ``sign == 0, radicand == 0``.
    """

    sign: int
    radicand: Fraction

    def __post_init__(self) -> None:
        radicand = Fraction(self.radicand)
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if radicand < 0:
            raise ValueError(f"radicand must be non-negative, got {radicand}")
        if (self.sign == 0) != (radicand == 0):
            raise ValueError("sign is zero exactly when the radicand is zero")
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def from_signed_square(cls, value: Fraction | int) -> SqrtRational:
        """The number whose square is ``|value|`` and whose sign is ``sign(value)``."""
        value = Fraction(value)
        return cls(_sign(value), abs(value))

    @classmethod
    def from_rational(cls, value: Fraction | int) -> SqrtRational:
        value = Fraction(value)
        return cls(_sign(value), value * value)

    @property
    def signed_square(self) -> Fraction:
        return self.sign * self.radicand

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def rational_value(self) -> Fraction | None:
        """Exact value when it is rational, else None."""
        root = rational_sqrt(self.radicand)
        return None if root is None else self.sign * root

    def __mul__(self, other: SqrtRational | int | Fraction) -> SqrtRational:
        if not isinstance(other, SqrtRational):
            other = SqrtRational.from_rational(other)
        return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other: SqrtRational | int | Fraction) -> SqrtRational:
        if not isinstance(other, SqrtRational):
            other = SqrtRational.from_rational(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero SqrtRational")
        return SqrtRational(self.sign * other.sign, self.radicand / other.radicand)

    def __neg__(self) -> SqrtRational:
        return SqrtRational(-self.sign, self.radicand)

    def __abs__(self) -> SqrtRational:
        return SqrtRational(abs(self.sign), self.radicand)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, SqrtRational):
            return NotImplemented
        return self.signed_square < other.signed_square

    def __float__(self) -> float:
        if self.is_zero:
            return 0.0
        # math.sqrt(float(Fraction)) underflows for tiny radicands; go via mpmath
        if self.radicand < Fraction(1, 10**300):
            return float(self.to_mpf())
        return self.sign * math.sqrt(self.radicand)

    def to_mpf(self, prec: int = 113) -> mpmath.mpf:
        with mpmath.workprec(prec):
            root = mpmath.sqrt(
                mpmath.mpf(self.radicand.numerator) / self.radicand.denominator
            )
            return self.sign * root

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        prefix = "+" if self.sign > 0 else "-"
        root = rational_sqrt(self.radicand)
        if root is not None:
            return f"{prefix}{root}"
        r = self.radicand
        body = str(r.numerator) if r.denominator == 1 else f"({r.numerator}/{r.denominator})"
        return f"{prefix}√{body}"


ZERO = SqrtRational(0, Fraction(0))
ONE = SqrtRational(1, Fraction(1))


def sum_surds(terms: list[SqrtRational], prec: int = 256) -> SqrtRational | mpmath.mpf:
    """Add SqrtRational terms.

    Exact when every radicand is a rational square multiple of the first one,
    which holds for the Wigner contractions used here; otherwise the sum is
    returned as a high-precision mpmath float.
    """
    nonzero = [t for t in terms if not t.is_zero]
    if not nonzero:
        return ZERO
    reference = nonzero[0].radicand
    coefficient = Fraction(0)
    for term in nonzero:
        root = rational_sqrt(term.radicand / reference)
        if root is None:
            with mpmath.workprec(prec):
                return mpmath.fsum(t.to_mpf(prec) for t in nonzero)
        coefficient += term.sign * root
    return SqrtRational(_sign(coefficient), coefficient * coefficient * reference)
