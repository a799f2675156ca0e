"""Tests for src/separability/geometry.py"""

import math

import numpy as np
import pytest

from src.separability.geometry import (
    Point2,
    Region2,
    f_point,
    in_ppt_polygon,
    in_state_triangle,
    large_n_trend,
    named_points,
    pair_for,
    ppt_polygon,
    simplex_vertices_alpha,
    state_triangle,
    validate_n,
)
from src.states.invariant_states import (
    BetaVector,
    ProductState,
    alpha_to_beta,
    beta_functionals,
    partial_transpose,
    rho_from_beta,
)

N_VALUES = [3, 4, 5, 6, 7, 8, 11, 16]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _min_eigs(point, n):
    pair = pair_for(n)
    rho = rho_from_beta(BetaVector(pair, [1.0, point[0], point[1]]))
    return rho.eigenvalues()[0], partial_transpose(rho.matrix, pair).eigenvalues()[0]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


class TestValidateN:
    def test_accepts_integers(self):
        assert validate_n(3) == 3
        assert validate_n(np.int64(8)) == 8

    def test_rejects_small_n(self):
        with pytest.raises(ValueError, match="at least 3"):
            validate_n(2)

    @pytest.mark.parametrize("bad", [4.0, True, "4"])
    def test_rejects_non_integers(self, bad):
        with pytest.raises(TypeError):
            validate_n(bad)

    def test_pair(self):
        pair = pair_for(4)
        assert str(pair) == "1x3/2"


# ---------------------------------------------------------------------------
# Named points
# ---------------------------------------------------------------------------


class TestNamedPoints:
    def test_four_level_values(self):
        p = named_points(4)
        expected = {
            "A": (0.949, 0.316),
            "B": (-1.581, 1.581),
            "C": (-0.632, -1.265),
            "A'": (-0.949, 0.316),
            "D": (0.0, -0.632),
            "E": (0.0, 0.791),
            "F": (0.0, 0.632),
        }
        assert set(p) == set(expected)
        for name, (b1, b2) in expected.items():
            assert p[name].beta1 == pytest.approx(b1, abs=1e-3), name
            assert p[name].beta2 == pytest.approx(b2, abs=1e-3), name
        assert p["D"].beta2 == pytest.approx(-math.sqrt(0.4))
        assert p["E"].beta2 == pytest.approx(math.sqrt(5 / 8))
        assert p["F"].beta2 == pytest.approx(math.sqrt(0.4))

    def test_f_only_for_even_n(self):
        assert "F" not in named_points(5)
        with pytest.raises(ValueError, match="even N"):
            f_point(7)

    @pytest.mark.parametrize("n", N_VALUES)
    def test_vertices_match_extreme_states(self, n):
        points = named_points(n)
        for name, alpha in zip("ABC", simplex_vertices_alpha(n), strict=True):
            assert alpha.is_state
            beta = alpha_to_beta(alpha)
            assert beta[0] == pytest.approx(1.0)
            assert beta[1] == pytest.approx(points[name].beta1, abs=1e-12)
            assert beta[2] == pytest.approx(points[name].beta2, abs=1e-12)

    @pytest.mark.parametrize("n", N_VALUES)
    def test_d_and_e_lie_on_triangle_edges(self, n):
        p = named_points(n)
        assert _cross(p["A"], p["B"], p["E"]) == pytest.approx(0.0, abs=1e-12)
        assert _cross(p["A"], p["C"], p["D"]) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", N_VALUES)
    def test_d_is_attained_by_a_product_state(self, n):
        pair = pair_for(n)
        state = ProductState.from_basis(pair, 0, pair.j2)
        beta = beta_functionals(state, pair)
        d = named_points(n)["D"]
        assert beta[1] == pytest.approx(0.0, abs=1e-12)
        assert beta[2] == pytest.approx(d.beta2, abs=1e-12)
        assert beta[2] == pytest.approx(
            -math.sqrt(2 * (n - 1) * (n - 2) / ((n + 1) * (n + 2))), abs=1e-12
        )

    @pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
    def test_e_is_attained_by_a_product_state_for_odd_n(self, n):
        pair = pair_for(n)
        beta = beta_functionals(ProductState.from_basis(pair, 0, 0), pair)
        e = named_points(n)["E"]
        np.testing.assert_allclose(beta.values, [1.0, e.beta1, e.beta2], atol=1e-12)
        assert e.beta2 == pytest.approx(
            math.sqrt((n + 1) * (n - 1) / (2 * (n + 2) * (n - 2)))
        )

    @pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
    def test_f_is_attained_by_a_product_state_for_even_n(self, n):
        pair = pair_for(n)
        beta = beta_functionals(ProductState.from_basis(pair, 0, "1/2"), pair)
        f = f_point(n)
        np.testing.assert_allclose(beta.values, [1.0, f.beta1, f.beta2], atol=1e-12)
        assert f.beta2 == pytest.approx(
            math.sqrt((n + 2) * (n - 2) / (2 * (n + 1) * (n - 1)))
        )

    @pytest.mark.parametrize("n", [4, 6, 8, 12])
    def test_f_between_axis_vertices(self, n):
        p = named_points(n)
        assert p["D"].beta2 < p["F"].beta2 < p["E"].beta2


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


class TestRegions:
    @pytest.mark.parametrize("n", N_VALUES)
    def test_ppt_polygon_inside_triangle(self, n):
        triangle, polygon = state_triangle(n), ppt_polygon(n)
        assert 0 < polygon.area < triangle.area
        for vertex in polygon.vertices:
            assert triangle.contains(vertex)

    @pytest.mark.parametrize("n", [3, 4, 9])
    def test_ppt_polygon_is_triangle_intersect_reflection(self, n):
        rng = np.random.default_rng(n)
        for b1, b2 in rng.uniform(-2.0, 2.0, size=(400, 2)):
            both = in_state_triangle((b1, b2), n) and in_state_triangle((-b1, b2), n)
            assert in_ppt_polygon((b1, b2), n) is both

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_membership_matches_spectra(self, n):
        p = named_points(n)
        centroid = np.mean(np.array(ppt_polygon(n).vertices), axis=0)
        rho_min, pt_min = _min_eigs(centroid, n)
        assert rho_min > 0 and pt_min > 0

        rho_min, pt_min = _min_eigs(p["B"], n)
        assert rho_min > -1e-12
        assert pt_min < -1e-3
        assert not in_ppt_polygon(p["B"], n)

    def test_boundary_tolerance(self):
        c = named_points(4)["C"]
        assert in_state_triangle(c, 4)
        assert not in_state_triangle((c.beta1, c.beta2 - 1e-6), 4)
        assert in_state_triangle((c.beta1, c.beta2 - 1e-6), 4, tol=1e-5)

    def test_region_validation(self):
        square = [(0, 0), (1, 0), (1, 1), (0, 1)]
        assert Region2("polygon", square).area == pytest.approx(1.0)
        with pytest.raises(ValueError, match="counter-clockwise"):
            Region2("polygon", square[::-1])
        with pytest.raises(ValueError, match="no curve"):
            Region2("polygon", square, curve=((0, 0), (1, 1)))
        with pytest.raises(ValueError, match="two curve points"):
            Region2("polygon-plus-curve", square, curve=((1, 1),))
        with pytest.raises(ValueError, match="unknown"):
            Region2("circle", square)

    def test_curve_replaces_last_edge(self):
        # unit square whose top edge is bulged outwards by an arc
        arc = [(1.0, 1.0), (0.5, 1.2), (0.0, 1.0)]
        region = Region2(
            "polygon-plus-curve", [(0, 0), (1, 0), (1, 1), (0, 1)], curve=arc
        )
        assert region.contains((0.5, 1.1))
        assert not region.contains((0.5, 1.3))
        assert region.area > 1.0

    def test_point_distance(self):
        assert Point2(0.0, 0.0).distance((3.0, 4.0)) == pytest.approx(5.0)


class TestLargeN:
    def test_distances_shrink(self):
        small, large = large_n_trend(4), large_n_trend(400)
        assert set(small) == {"B_to_A_prime", "C_to_D", "F_to_E"}
        for key in small:
            assert large[key] < small[key]
            assert large[key] < 0.05

    def test_odd_n_has_no_f(self):
        assert set(large_n_trend(5)) == {"B_to_A_prime", "C_to_D"}
