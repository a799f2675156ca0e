"""Tests for src/algebra/numbers.py"""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath
import pytest

from src.algebra.numbers import (
    ONE,
    ZERO,
    FactorialTable,
    HalfInt,
    SqrtRational,
    half_integer_range,
    rational_sqrt,
    sum_surds,
)

# ---------------------------------------------------------------------------
# HalfInt
# ---------------------------------------------------------------------------


class TestHalfInt:
    @pytest.mark.parametrize(
        "text, twice",
        [("3/2", 3), ("-1/2", -1), ("2", 4), ("0", 0), (" 5/2 ", 5), ("4/2", 4)],
    )
    def test_parse(self, text, twice):
        assert HalfInt.parse(text).twice == twice

    @pytest.mark.parametrize("text", ["2.5", "1/3", "abc", "", "1/0", "1e3"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            HalfInt.parse(text)

    def test_of_accepts_several_types(self):
        assert HalfInt.of(1) == HalfInt(2)
        assert HalfInt.of(Fraction(3, 2)) == HalfInt(3)
        assert HalfInt.of("1/2") == HalfInt(1)
        assert HalfInt.of(HalfInt(7)) == HalfInt(7)

    def test_of_rejects_bool_and_non_half_integers(self):
        with pytest.raises(TypeError):
            HalfInt.of(True)
        with pytest.raises(ValueError):
            HalfInt.of(Fraction(1, 3))
        with pytest.raises(TypeError):
            HalfInt(1.0)

    @pytest.mark.parametrize("value", [0.5, 1.0, 1.5])
    def test_of_rejects_floats(self, value):
        with pytest.raises(TypeError, match="floats"):
            HalfInt.of(value)

    def test_str(self):
        assert str(HalfInt(3)) == "3/2"
        assert str(HalfInt(-1)) == "-1/2"
        assert str(HalfInt(4)) == "2"

    def test_arithmetic_and_ordering(self):
        assert HalfInt(1) + HalfInt(1) == HalfInt(2)
        assert HalfInt(3) - 1 == HalfInt(1)
        assert 2 - HalfInt(1) == HalfInt(3)
        assert -HalfInt(3) == HalfInt(-3)
        assert abs(HalfInt(-5)) == HalfInt(5)
        assert HalfInt(1) < HalfInt(2)
        assert HalfInt(3) < 2
        assert sorted([HalfInt(4), HalfInt(-1), HalfInt(1)]) == [
            HalfInt(-1),
            HalfInt(1),
            HalfInt(4),
        ]
        assert float(HalfInt(3)) == 1.5

    def test_integer_flag(self):
        assert HalfInt(4).is_integer
        assert not HalfInt(3).is_integer
        assert HalfInt(3).as_fraction() == Fraction(3, 2)

    def test_range_ascending(self):
        assert [m.twice for m in half_integer_range(HalfInt(3))] == [-3, -1, 1, 3]
        assert [m.twice for m in half_integer_range(HalfInt(0))] == [0]
        with pytest.raises(ValueError):
            half_integer_range(HalfInt(-2))


# ---------------------------------------------------------------------------
# Factorials
# ---------------------------------------------------------------------------


class TestFactorial:
    def test_values(self):
        table = FactorialTable()
        assert table(0) == 1
        assert table(20) == math.factorial(20)
        assert table(5) == 120
        assert len(table) == 21

    def test_negative(self):
        with pytest.raises(ValueError):
            FactorialTable()(-1)

    def test_concurrent_growth(self):
        table = FactorialTable()
        ns = list(range(200, 0, -1)) * 4
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(table, ns))
        assert results == [math.factorial(n) for n in ns]
        assert len(table) == 201


# ---------------------------------------------------------------------------
# SqrtRational
# ---------------------------------------------------------------------------


class TestSqrtRational:
    def test_zero_invariant(self):
        with pytest.raises(ValueError):
            SqrtRational(0, Fraction(1))
        with pytest.raises(ValueError):
            SqrtRational(1, Fraction(0))
        with pytest.raises(ValueError):
            SqrtRational(1, Fraction(-1))
        with pytest.raises(ValueError):
            SqrtRational(2, Fraction(1))

    def test_radicand_reduced(self):
        x = SqrtRational(1, Fraction(2, 4))
        assert x.radicand == Fraction(1, 2)
        assert x.radicand.denominator == 2

    def test_signed_square_round_trip(self):
        x = SqrtRational.from_signed_square(Fraction(-1, 3))
        assert x.sign == -1
        assert x.radicand == Fraction(1, 3)
        assert x.signed_square == Fraction(-1, 3)

    def test_from_rational(self):
        x = SqrtRational.from_rational(Fraction(-1, 2))
        assert x.radicand == Fraction(1, 4)
        assert x.rational_value() == Fraction(-1, 2)
        assert SqrtRational(1, Fraction(2)).rational_value() is None

    def test_multiplication_and_division(self):
        a = SqrtRational(1, Fraction(1, 2))
        b = SqrtRational(-1, Fraction(2, 3))
        assert a * b == SqrtRational(-1, Fraction(1, 3))
        assert a * 2 == SqrtRational(1, Fraction(2))
        assert 3 * a == SqrtRational(1, Fraction(9, 2))
        assert (a / b) * b == a
        assert a * ZERO == ZERO
        with pytest.raises(ZeroDivisionError):
            a / ZERO

    def test_negation_abs_and_bool(self):
        a = SqrtRational(-1, Fraction(5))
        assert -a == SqrtRational(1, Fraction(5))
        assert abs(a) == SqrtRational(1, Fraction(5))
        assert bool(a)
        assert not ZERO

    def test_ordering(self):
        values = [
            SqrtRational(1, Fraction(2)),
            SqrtRational(-1, Fraction(3)),
            ZERO,
            ONE,
        ]
        assert sorted(values) == [values[1], ZERO, ONE, values[0]]

    def test_float(self):
        assert float(SqrtRational(-1, Fraction(1, 3))) == pytest.approx(-math.sqrt(1 / 3))
        assert float(ZERO) == 0.0

    def test_float_tiny_radicand(self):
        tiny = SqrtRational(1, Fraction(1, 10**400))
        assert float(tiny) == pytest.approx(1e-200, rel=1e-12)

    def test_to_mpf(self):
        with mpmath.workprec(200):
            value = SqrtRational(1, Fraction(2)).to_mpf(200)
            assert abs(value - mpmath.sqrt(2)) < mpmath.mpf(2) ** -190

    def test_str(self):
        assert str(SqrtRational(1, Fraction(1, 2))) == "+√(1/2)"
        assert str(SqrtRational(-1, Fraction(3))) == "-√3"
        assert str(SqrtRational(-1, Fraction(1, 4))) == "-1/2"
        assert str(ONE) == "+1"
        assert str(ZERO) == "0"


class TestRationalSqrt:
    def test_perfect_squares(self):
        assert rational_sqrt(Fraction(9, 16)) == Fraction(3, 4)
        assert rational_sqrt(Fraction(0)) == 0
        assert rational_sqrt(Fraction(2)) is None

    def test_negative(self):
        with pytest.raises(ValueError):
            rational_sqrt(Fraction(-1))


class TestSumSurds:
    def test_common_radicand_is_exact(self):
        terms = [SqrtRational(1, Fraction(2)), SqrtRational(1, Fraction(8))]
        # sqrt(2) + 2 sqrt(2) = 3 sqrt(2)
        assert sum_surds(terms) == SqrtRational(1, Fraction(18))

    def test_cancellation(self):
        x = SqrtRational(1, Fraction(1, 3))
        assert sum_surds([x, -x]) == ZERO
        assert sum_surds([]) == ZERO

    def test_mixed_radicands_fall_back_to_mpmath(self):
        result = sum_surds([ONE, SqrtRational(1, Fraction(2))])
        assert isinstance(result, mpmath.mpf)
        assert float(result) == pytest.approx(1 + math.sqrt(2), abs=1e-15)
