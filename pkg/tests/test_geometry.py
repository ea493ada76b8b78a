from __future__ import annotations

import random
from fractions import Fraction

import pytest

from epsmult.geometry import (
    convex_hull_volume,
    diagonalize_with_saturation,
    fraction_rank,
    hermite_row_basis,
    int_kernel_basis,
    lattice_index,
    solve_in_basis,
)


class TestRank:
    def test_full_rank(self):
        assert fraction_rank([[1, 0], [0, 1]]) == 2

    def test_dependent_rows(self):
        assert fraction_rank([[1, 2], [2, 4]]) == 1

    def test_rational_entries(self):
        assert fraction_rank([[Fraction(1, 2), 1], [1, 2]]) == 1

    def test_monomial_lattice_rank(self):
        # base directions plus the exponents of x^2 t and x y t span rank 3
        rows = [[1, 0, 0], [0, 1, 0], [2, 0, 1], [1, 1, 1]]
        assert fraction_rank(rows) == 3


class TestLattices:
    def test_hermite_of_skew_pair(self):
        basis = hermite_row_basis([[1, 1], [3, 1]])
        assert fraction_rank(basis) == 2
        # lattice is {(a, b) : a = b mod 2}; (1,1) and (0,2) generate it
        assert lattice_index(basis) == 2 or basis == [[1, 1], [0, 2]]

    def test_index_of_scaled_lattice(self):
        assert lattice_index([[2, 0], [0, 3]]) == 6

    def test_index_of_sublattice_in_line(self):
        assert lattice_index([[2, 0]]) == 2

    def test_saturation_basis_spans(self):
        divisors, sat = diagonalize_with_saturation([[2, 2, 0]])
        assert divisors == [2]
        assert sat == [[1, 1, 0]]

    def test_kernel_basis(self):
        for vec in ([2, 3], [1, 1, 1], [4, 6, 10], [5]):
            basis = int_kernel_basis(vec)
            assert len(basis) == len(vec) - (1 if any(vec) else 0)
            for row in basis:
                assert sum(a * b for a, b in zip(row, vec)) == 0

    def test_solve_in_basis(self):
        coords = solve_in_basis([[1, 1, 0], [0, 2, 1]], [2, 6, 2])
        assert coords == [Fraction(2), Fraction(2)]


class TestHullVolume:
    def test_interval(self):
        vol, verts = convex_hull_volume([(0,), (3,), (1,)])
        assert vol == 3
        assert verts == [(Fraction(0),), (Fraction(3),)]

    def test_unit_square(self):
        vol, _ = convex_hull_volume([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert vol == 1

    def test_triangle_with_interior_points(self):
        pts = [(0, 0), (4, 0), (0, 4), (1, 1), (2, 1)]
        vol, verts = convex_hull_volume(pts)
        assert vol == 8
        assert len(verts) == 3

    def test_degenerate_is_zero(self):
        vol, _ = convex_hull_volume([(0, 0), (1, 1), (2, 2)])
        assert vol == 0

    def test_tetrahedron(self):
        vol, _ = convex_hull_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert vol == Fraction(1, 6)

    def test_cube_with_coplanar_faces(self):
        cube = [(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]
        vol, _ = convex_hull_volume(cube)
        assert vol == 1

    def test_in_plane_extension_then_lift(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (2, 2, 0), (0, 0, 1)]
        vol, _ = convex_hull_volume(pts)
        assert vol == Fraction(2, 3)

    def test_rational_coordinates(self):
        pts = [(0, 0), (Fraction(1, 2), 0), (0, Fraction(1, 3))]
        vol, _ = convex_hull_volume(pts)
        assert vol == Fraction(1, 12)

    def test_point_convention(self):
        vol, _ = convex_hull_volume([()])
        assert vol == 1

    def test_matches_qhull_on_random_sets(self):
        scipy_spatial = pytest.importorskip("scipy.spatial")
        rng = random.Random(5)
        for dim in (2, 3, 4):
            for trial in range(8):
                pts = {
                    tuple(rng.randint(0, 8) for _ in range(dim))
                    for _ in range(rng.randint(dim + 2, 14))
                }
                pts = sorted(pts)
                vol, _ = convex_hull_volume(pts)
                try:
                    hull = scipy_spatial.ConvexHull([list(map(float, p)) for p in pts])
                except Exception:
                    assert vol == 0
                    continue
                assert abs(float(vol) - hull.volume) < 1e-9
