"""Exact Wigner 3j, 6j and Clebsch-Gordan coefficients.

All spins are handled internally as twice-values so that half-integers stay
integral.  Every symbol is returned as a SqrtRational; floats are derived
from it, never the other way round.

Functions
---------
triangle_ok              Triangle rule plus integer-sum parity.
wigner_3j                Racah single-sum formula.
clebsch_gordan           From 3j with Condon-Shortley phase.
wigner_6j                Racah single-sum formula.
wigner_6j_contraction    Independent 6j from four contracted 3j symbols.
selection_rules_3j       Human-readable reasons a 3j vanishes.
selection_rules_6j       Same for 6j.
selection_rules_cg       Same for Clebsch-Gordan coefficients.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import mpmath

from src.algebra.numbers import ZERO, HalfInt, SqrtRational, factorial, sum_surds


def _twice(value: HalfInt | int | Fraction | str) -> int:
    return HalfInt.of(value).twice


def _parity(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _triangle_twice(ta: int, tb: int, tc: int) -> bool:
    if min(ta, tb, tc) < 0:
        return False
    if (ta + tb + tc) % 2:
        return False
    return abs(ta - tb) <= tc <= ta + tb


def triangle_ok(a, b, c) -> bool:
    """True iff ``|a-b| <= c <= a+b`` and ``a+b+c`` is an integer."""
    return _triangle_twice(_twice(a), _twice(b), _twice(c))


def _check_pair(tj: int, tm: int) -> None:
    if tj < 0:
        raise ValueError(f"spin must be non-negative, got {tj}/2")
    if (tj - tm) % 2:
        raise ValueError(f"j={tj}/2 and m={tm}/2 have mismatched parity")
    if abs(tm) > tj:
        raise ValueError(f"|m|={abs(tm)}/2 exceeds j={tj}/2")


def _delta(ta: int, tb: int, tc: int) -> Fraction:
    """Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!."""
    return Fraction(
        factorial((ta + tb - tc) // 2)
        * factorial((ta - tb + tc) // 2)
        * factorial((-ta + tb + tc) // 2),
        factorial((ta + tb + tc) // 2 + 1),
    )


# ---------------------------------------------------------------------------
# 3j / Clebsch-Gordan
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=200_000)
def _w3j(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> SqrtRational:
    if tm1 + tm2 + tm3 != 0 or not _triangle_twice(tj1, tj2, tj3):
        return ZERO

    prefactor = _delta(tj1, tj2, tj3) * (
        factorial((tj1 + tm1) // 2)
        * factorial((tj1 - tm1) // 2)
        * factorial((tj2 + tm2) // 2)
        * factorial((tj2 - tm2) // 2)
        * factorial((tj3 + tm3) // 2)
        * factorial((tj3 - tm3) // 2)
    )

    kmin = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    kmax = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        denominator = (
            factorial(k)
            * factorial((tj3 - tj2 + tm1) // 2 + k)
            * factorial((tj3 - tj1 - tm2) // 2 + k)
            * factorial((tj1 + tj2 - tj3) // 2 - k)
            * factorial((tj1 - tm1) // 2 - k)
            * factorial((tj2 + tm2) // 2 - k)
        )
        total += Fraction(_parity(k), denominator)

    if total == 0:
        return ZERO
    phase = _parity((tj1 - tj2 - tm3) // 2)
    sign = phase * (1 if total > 0 else -1)
    return SqrtRational(sign, prefactor * total * total)


def wigner_3j(j1, j2, j3, m1, m2, m3) -> SqrtRational:
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    Raises ValueError when some ``m`` does not match the parity of its ``j``
    or exceeds it in magnitude.  Returns exact zero whenever a selection
    rule fails.
    """
    tj = (_twice(j1), _twice(j2), _twice(j3))
    tm = (_twice(m1), _twice(m2), _twice(m3))
    for a, b in zip(tj, tm, strict=True):
        _check_pair(a, b)
    return _w3j(*tj, *tm)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> SqrtRational:
    """``<j1 m1; j2 m2 | j m>`` in the Condon-Shortley convention."""
    tj1, tm1, tj2, tm2, tj, tm = (_twice(x) for x in (j1, m1, j2, m2, j, m))
    for a, b in ((tj1, tm1), (tj2, tm2), (tj, tm)):
        _check_pair(a, b)
    if tm1 + tm2 != tm:
        return ZERO
    symbol = _w3j(tj1, tj2, tj, tm1, tm2, -tm)
    if symbol.is_zero:
        return ZERO
    phase = _parity((tj1 - tj2 + tm) // 2)
    return symbol * SqrtRational(phase, Fraction(tj + 1))


# ---------------------------------------------------------------------------
# 6j
# ---------------------------------------------------------------------------


def _six_j_triads(t: tuple[int, ...]) -> tuple[tuple[int, int, int], ...]:
    t1, t2, t3, t4, t5, t6 = t
    return ((t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3))


@functools.lru_cache(maxsize=100_000)
def _w6j(t1: int, t2: int, t3: int, t4: int, t5: int, t6: int) -> SqrtRational:
    triads = _six_j_triads((t1, t2, t3, t4, t5, t6))
    if not all(_triangle_twice(*triad) for triad in triads):
        return ZERO

    lower = [sum(triad) // 2 for triad in triads]
    upper = [
        (t1 + t2 + t4 + t5) // 2,
        (t2 + t3 + t5 + t6) // 2,
        (t3 + t1 + t6 + t4) // 2,
    ]
    total = Fraction(0)
    for t in range(max(lower), min(upper) + 1):
        denominator = 1
        for a in lower:
            denominator *= factorial(t - a)
        for b in upper:
            denominator *= factorial(b - t)
        total += Fraction(_parity(t) * factorial(t + 1), denominator)

    if total == 0:
        return ZERO
    prefactor = Fraction(1)
    for triad in triads:
        prefactor *= _delta(*triad)
    return SqrtRational(1 if total > 0 else -1, prefactor * total * total)


def wigner_6j(j1, j2, j3, j4, j5, j6) -> SqrtRational:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}``; zero unless all four triads close."""
    t = tuple(_twice(x) for x in (j1, j2, j3, j4, j5, j6))
    if min(t) < 0:
        raise ValueError("6j arguments must be non-negative")
    return _w6j(*t)


def wigner_6j_contraction(j1, j2, j3, j4, j5, j6) -> SqrtRational | mpmath.mpf:
    """6j symbol evaluated as a signed contraction of four 3j symbols.

    Used as an oracle for ``wigner_6j``.  The surd terms share a common
    radicand here, so the result is exact; ``sum_surds`` falls back to
    high-precision mpmath otherwise.
    """
    t = tuple(_twice(x) for x in (j1, j2, j3, j4, j5, j6))
    if min(t) < 0:
        raise ValueError("6j arguments must be non-negative")
    if not all(_triangle_twice(*triad) for triad in _six_j_triads(t)):
        return ZERO
    t1, t2, t3, t4, t5, t6 = t

    terms: list[SqrtRational] = []
    for tm1 in range(-t1, t1 + 1, 2):
        for tm2 in range(-t2, t2 + 1, 2):
            tm3 = -tm1 - tm2
            if abs(tm3) > t3:
                continue
            for tm5 in range(-t5, t5 + 1, 2):
                tm6 = tm5 - tm1
                tm4 = tm6 - tm2
                if abs(tm6) > t6 or abs(tm4) > t4:
                    continue
                product = (
                    _w3j(t1, t2, t3, -tm1, -tm2, -tm3)
                    * _w3j(t1, t5, t6, tm1, -tm5, tm6)
                    * _w3j(t4, t2, t6, tm4, tm2, -tm6)
                    * _w3j(t4, t5, t3, -tm4, tm5, tm3)
                )
                if product.is_zero:
                    continue
                exponent = sum(t) - (tm1 + tm2 + tm3 + tm4 + tm5 + tm6)
                terms.append(product if _parity(exponent // 2) > 0 else -product)
    return sum_surds(terms)


# ---------------------------------------------------------------------------
# Selection rules
# ---------------------------------------------------------------------------


def selection_rules_3j(j1, j2, j3, m1, m2, m3) -> list[str]:
    """Reasons the 3j symbol is zero by selection; empty when none apply."""
    tj = [_twice(x) for x in (j1, j2, j3)]
    tm = [_twice(x) for x in (m1, m2, m3)]
    reasons = []
    if sum(tm) != 0:
        reasons.append("m1 + m2 + m3 != 0")
    if not _triangle_twice(*tj):
        reasons.append("triangle rule fails for (j1, j2, j3)")
    for i, (a, b) in enumerate(zip(tj, tm, strict=True), start=1):
        if abs(b) > a:
            reasons.append(f"|m{i}| > j{i}")
    if all(b == 0 for b in tm) and sum(tj) // 2 % 2:
        reasons.append("all m zero with odd j1 + j2 + j3")
    return reasons


def selection_rules_6j(j1, j2, j3, j4, j5, j6) -> list[str]:
    t = tuple(_twice(x) for x in (j1, j2, j3, j4, j5, j6))
    names = ("(j1 j2 j3)", "(j1 j5 j6)", "(j4 j2 j6)", "(j4 j5 j3)")
    return [
        f"triangle rule fails for {name}"
        for name, triad in zip(names, _six_j_triads(t), strict=True)
        if not _triangle_twice(*triad)
    ]


def selection_rules_cg(j1, m1, j2, m2, j, m) -> list[str]:
    tj1, tm1, tj2, tm2, tj, tm = (_twice(x) for x in (j1, m1, j2, m2, j, m))
    reasons = []
    if tm1 + tm2 != tm:
        reasons.append("m1 + m2 != M")
    if not _triangle_twice(tj1, tj2, tj):
        reasons.append("triangle rule fails for (j1, j2, J)")
    for name, a, b in (("m1", tj1, tm1), ("m2", tj2, tm2), ("M", tj, tm)):
        if abs(b) > a:
            reasons.append(f"|{name}| exceeds its spin")
    return reasons
