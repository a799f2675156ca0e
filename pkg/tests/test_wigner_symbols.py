"""Tests for src/algebra/wigner_symbols.py

sympy.physics.wigner serves as the independent oracle for values.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.physics import wigner as sympy_wigner

from src.algebra.numbers import ONE, ZERO, HalfInt, SqrtRational
from src.algebra.wigner_symbols import (
    clebsch_gordan,
    selection_rules_3j,
    selection_rules_6j,
    selection_rules_cg,
    triangle_ok,
    wigner_3j,
    wigner_6j,
    wigner_6j_contraction,
)

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _h(twice: int) -> HalfInt:
    return HalfInt(twice)


def _sympy_exact(value) -> SqrtRational:
    """Convert a sympy sign * sqrt(rational) expression."""
    sign = int(sympy.sign(value))
    if sign == 0:
        return ZERO
    square = sympy.nsimplify(value**2)
    return SqrtRational(sign, Fraction(int(square.p), int(square.q)))


def _s(twice: int):
    return sympy.Rational(twice, 2)


def _valid_3j(max_twice: int):
    for t1 in range(max_twice + 1):
        for t2 in range(max_twice + 1):
            for t3 in range(abs(t1 - t2), min(t1 + t2, max_twice) + 1, 2):
                for tm1 in range(-t1, t1 + 1, 2):
                    for tm2 in range(-t2, t2 + 1, 2):
                        tm3 = -tm1 - tm2
                        if abs(tm3) <= t3:
                            yield (t1, t2, t3), (tm1, tm2, tm3)


def _all_triads_ok(t) -> bool:
    t1, t2, t3, t4, t5, t6 = t
    triads = ((t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3))
    return all(triangle_ok(*(_h(x) for x in triad)) for triad in triads)


def _six_j_grid(max_twice: int):
    for t in itertools.product(range(max_twice + 1), repeat=6):
        if _all_triads_ok(t):
            yield t


# ---------------------------------------------------------------------------
# triangle_ok
# ---------------------------------------------------------------------------


class TestTriangle:
    @pytest.mark.parametrize(
        "a, b, c, expected",
        [
            ("1", "3/2", "5/2", True),
            ("1", "3/2", "3", False),
            ("1/2", "1/2", "1/2", False),
            ("1/2", "1/2", "0", True),
            ("2", "0", "2", True),
            ("2", "0", "1", False),
        ],
    )
    def test_examples(self, a, b, c, expected):
        assert triangle_ok(a, b, c) is expected


# ---------------------------------------------------------------------------
# 3j and Clebsch-Gordan
# ---------------------------------------------------------------------------


class TestWigner3j:
    def test_trivial(self):
        assert wigner_3j(0, 0, 0, 0, 0, 0) == ONE

    def test_known_values(self):
        assert wigner_3j(1, 1, 0, 0, 0, 0) == SqrtRational(-1, Fraction(1, 3))
        value = wigner_3j(1, 1, 2, 1, -1, 0)
        assert value == SqrtRational(1, Fraction(1, 30))
        assert value.radicand == Fraction(1, 30)

    def test_selection_rules_give_exact_zero(self):
        assert wigner_3j(1, 1, 1, 1, 0, 0) == ZERO  # m sum
        assert wigner_3j(1, 1, 3, 0, 0, 0) == ZERO  # triangle
        assert wigner_3j(1, 1, 1, 0, 0, 0) == ZERO  # odd sum, all m zero

    def test_rejects_parity_mismatch(self):
        with pytest.raises(ValueError, match="parity"):
            wigner_3j(1, 1, 0, "1/2", "-1/2", 0)

    def test_rejects_m_beyond_j(self):
        with pytest.raises(ValueError, match="exceeds"):
            wigner_3j(1, 1, 0, 2, -2, 0)

    def test_matches_sympy(self):
        for tj, tm in _valid_3j(3):
            ours = wigner_3j(*map(_h, tj), *map(_h, tm))
            theirs = sympy_wigner.wigner_3j(*map(_s, tj), *map(_s, tm))
            assert ours == _sympy_exact(theirs), (tj, tm)

    def test_permutation_and_reflection_symmetry(self):
        for tj, tm in _valid_3j(6):
            j1, j2, j3 = map(_h, tj)
            m1, m2, m3 = map(_h, tm)
            value = wigner_3j(j1, j2, j3, m1, m2, m3)
            phase = -1 if (sum(tj) // 2) % 2 else 1
            assert wigner_3j(j2, j3, j1, m2, m3, m1) == value
            assert wigner_3j(j3, j1, j2, m3, m1, m2) == value
            assert wigner_3j(j2, j1, j3, m2, m1, m3) == phase * value
            assert wigner_3j(j1, j2, j3, -m1, -m2, -m3) == phase * value

    def test_orthogonality_is_exact(self):
        for t1 in range(5):
            for t2 in range(5):
                for tj in range(abs(t1 - t2), t1 + t2 + 1, 2):
                    for tm in range(-tj, tj + 1, 2):
                        total = Fraction(0)
                        for tm1 in range(-t1, t1 + 1, 2):
                            tm2 = -tm - tm1
                            if abs(tm2) > t2:
                                continue
                            symbol = wigner_3j(
                                _h(t1), _h(t2), _h(tj), _h(tm1), _h(tm2), _h(tm)
                            )
                            total += (tj + 1) * symbol.radicand
                        assert total == 1, (t1, t2, tj, tm)


class TestClebschGordan:
    def test_singlet(self):
        assert clebsch_gordan("1/2", "1/2", "1/2", "-1/2", 0, 0) == SqrtRational(
            1, Fraction(1, 2)
        )

    @pytest.mark.parametrize("t1, t2", [(1, 1), (2, 3), (4, 5), (3, 6)])
    def test_stretched_state(self, t1, t2):
        j1, j2 = _h(t1), _h(t2)
        assert clebsch_gordan(j1, j1, j2, j2, j1 + j2, j1 + j2) == ONE

    def test_m_sum_rule(self):
        assert clebsch_gordan(1, 1, 1, 0, 2, 0) == ZERO

    def test_matches_sympy(self):
        for tj, tm in _valid_3j(3):
            t1, t2, t3 = tj
            tm1, tm2, tm3 = tm
            # <j1 m1; j2 m2 | j3 M> with M = m1 + m2 = -tm3
            ours = clebsch_gordan(_h(t1), _h(tm1), _h(t2), _h(tm2), _h(t3), _h(-tm3))
            theirs = sympy_wigner.clebsch_gordan(
                _s(t1), _s(t2), _s(t3), _s(tm1), _s(tm2), _s(-tm3)
            )
            assert ours == _sympy_exact(theirs), (tj, tm)

    def test_column_orthonormality(self):
        # sum_M over one column: sum_{m1} <j1 m1; j2 M-m1 | J M>^2 = 1
        j1, j2 = _h(2), _h(3)
        for tj in range(1, 6, 2):
            for tm in range(-tj, tj + 1, 2):
                total = Fraction(0)
                for tm1 in range(-2, 3, 2):
                    tm2 = tm - tm1
                    if abs(tm2) <= 3:
                        total += clebsch_gordan(
                            j1, _h(tm1), j2, _h(tm2), _h(tj), _h(tm)
                        ).radicand
                assert total == 1


# ---------------------------------------------------------------------------
# 6j
# ---------------------------------------------------------------------------


class TestWigner6j:
    @pytest.mark.parametrize("t1, t2", [(1, 1), (2, 3), (2, 5), (4, 4)])
    def test_zero_column(self, t1, t2):
        j1, j2 = _h(t1), _h(t2)
        for tj in range(abs(t1 - t2), t1 + t2 + 1, 2):
            phase = -1 if ((t1 + t2 + tj) // 2) % 2 else 1
            expected = SqrtRational(phase, Fraction(1, (t1 + 1) * (t2 + 1)))
            assert wigner_6j(j1, j2, _h(tj), j2, j1, 0) == expected

    def test_triangle_violation_is_zero(self):
        assert wigner_6j(1, 1, 3, 1, 1, 1) == ZERO
        assert wigner_6j("1/2", "1/2", 1, "1/2", "1/2", "1/2") == ZERO

    def test_value_used_by_l_matrix(self):
        # {1 3/2 5/2; 3/2 1 1}; ties to L_{1,5/2} = +sqrt(9/20) for 1 x 3/2
        assert wigner_6j(1, "3/2", "5/2", "3/2", 1, 1) == SqrtRational(
            -1, Fraction(1, 40)
        )

    def test_singlet_value(self):
        assert wigner_6j("1/2", "1/2", 1, "1/2", "1/2", 0) == SqrtRational(
            1, Fraction(1, 4)
        )

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            wigner_6j(-1, 1, 1, 1, 1, 1)

    def test_matches_sympy(self):
        for t in _six_j_grid(3):
            ours = wigner_6j(*map(_h, t))
            theirs = sympy_wigner.wigner_6j(*map(_s, t))
            assert ours == _sympy_exact(theirs), t


class TestSixJContraction:
    def test_full_grid_small_spins(self):
        for t in _six_j_grid(3):
            args = tuple(map(_h, t))
            assert wigner_6j_contraction(*args) == wigner_6j(*args), t

    def test_random_subset_up_to_three(self):
        rng = np.random.default_rng(20050101)
        checked = 0
        while checked < 150:
            t = tuple(int(x) for x in rng.integers(0, 7, 6))
            if not _all_triads_ok(t):
                continue
            args = tuple(map(_h, t))
            assert wigner_6j_contraction(*args) == wigner_6j(*args), t
            checked += 1

    @pytest.mark.slow
    def test_full_grid_up_to_three(self):
        for t in _six_j_grid(6):
            args = tuple(map(_h, t))
            assert wigner_6j_contraction(*args) == wigner_6j(*args), t

    def test_triangle_violation(self):
        assert wigner_6j_contraction(1, 1, 3, 1, 1, 1) == ZERO


# ---------------------------------------------------------------------------
# Selection rule reports
# ---------------------------------------------------------------------------


class TestSelectionRules:
    def test_3j(self):
        assert selection_rules_3j(1, 1, 2, 1, -1, 0) == []
        assert "m1 + m2 + m3 != 0" in selection_rules_3j(1, 1, 1, 1, 0, 0)
        assert "all m zero with odd j1 + j2 + j3" in selection_rules_3j(1, 1, 1, 0, 0, 0)
        assert any("triangle" in r for r in selection_rules_3j(1, 1, 3, 0, 0, 0))

    def test_6j(self):
        assert selection_rules_6j(1, 1, 1, 1, 1, 1) == []
        reasons = selection_rules_6j(1, 1, 3, 1, 1, 1)
        assert reasons == [
            "triangle rule fails for (j1 j2 j3)",
            "triangle rule fails for (j4 j5 j3)",
        ]

    def test_cg(self):
        assert selection_rules_cg("1/2", "1/2", "1/2", "-1/2", 0, 0) == []
        assert selection_rules_cg(1, 1, 1, 0, 2, 0) == ["m1 + m2 != M"]
        assert selection_rules_cg(1, 0, 1, 0, 3, 0) == [
            "triangle rule fails for (j1, j2, J)"
        ]
