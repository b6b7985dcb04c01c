"""Facet combinatorics and constellation point enumeration."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticesep import BudgetError
from latticesep.constellation import (
    FacetClass,
    FiniteConstellation,
    classify_point,
    constellation_points,
    count_points_by_class,
    enumerate_points,
    facet_count,
    points_per_facet,
    subset_rank,
)
from latticesep.lattices import catalog_lattice


class TestFacetCount:
    def test_cube_has_12_edges_6_faces(self):
        assert facet_count(3, 1) == 12
        assert facet_count(3, 2) == 6

    def test_vertices(self):
        assert facet_count(5, 0) == 32
        assert facet_count(1, 0) == 2

    def test_interior_is_single_facet(self):
        for n in range(1, 9):
            assert facet_count(n, n) == 1

    def test_domain(self):
        with pytest.raises(ValueError):
            facet_count(3, 4)
        with pytest.raises(ValueError):
            facet_count(0, 0)
        with pytest.raises(ValueError):
            facet_count(3, -1)


class TestPointsPerFacet:
    def test_examples(self):
        assert points_per_facet(4, 2) == 4
        assert points_per_facet(2, 3) == 0
        assert points_per_facet(32, 0) == 1

    def test_domain(self):
        with pytest.raises(ValueError):
            points_per_facet(1, 0)
        with pytest.raises(ValueError):
            points_per_facet(4, -1)


class TestClassifyPoint:
    def test_interior_point(self):
        fc = classify_point(np.array([1, 2]), 4)
        assert fc == FacetClass(k=2, p=1, subset=(1, 2))

    def test_edge_point(self):
        fc = classify_point(np.array([0, 2]), 4)
        assert fc.k == 1
        assert fc.subset == (2,)
        assert fc.p == 2  # subsets of size 1 in order: (1,), (2,)

    def test_vertex(self):
        fc = classify_point(np.array([0, 3, 3]), 4)
        assert fc == FacetClass(k=0, p=1, subset=())

    def test_binary_constellation_has_only_vertices(self):
        for u in itertools.product(range(2), repeat=3):
            assert classify_point(np.array(u), 2).k == 0

    def test_domain(self):
        with pytest.raises(ValueError):
            classify_point(np.array([0, 4]), 4)
        with pytest.raises(ValueError):
            classify_point(np.array([-1, 0]), 4)
        with pytest.raises(ValueError):
            classify_point(np.array([0.5, 1.0]), 4)

    @given(
        n=st.integers(1, 8),
        big_k=st.integers(2, 9),
        data=st.data(),
    )
    @settings(max_examples=150, deadline=None)
    def test_mirror_symmetry(self, n, big_k, data):
        # Reflecting any subset of coordinates (u -> K-1-u) preserves the class.
        u = np.array(
            data.draw(st.lists(st.integers(0, big_k - 1), min_size=n, max_size=n)),
            dtype=np.int64,
        )
        flip = np.array(
            data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool
        )
        mirrored = np.where(flip, big_k - 1 - u, u)
        assert classify_point(u, big_k) == classify_point(mirrored, big_k)


class TestSubsetRank:
    def test_lexicographic_order(self):
        combos = list(itertools.combinations(range(1, 6), 3))
        for p, subset in enumerate(combos, start=1):
            assert subset_rank(5, subset) == p

    def test_invalid_subset(self):
        with pytest.raises(ValueError):
            subset_rank(4, (2, 1))


class TestCountPointsByClass:
    def test_z2_4pam_tallies(self):
        counts = count_points_by_class(2, 4)
        assert counts.total == 16
        assert counts.by_dimension == {0: 4, 1: 8, 2: 4}
        per = counts.per_class
        assert per[FacetClass(k=0, p=1, subset=())] == 4
        assert per[FacetClass(k=1, p=1, subset=(1,))] == 4
        assert per[FacetClass(k=1, p=2, subset=(2,))] == 4
        assert per[FacetClass(k=2, p=1, subset=(1, 2))] == 4

    def test_k2_everything_is_vertex(self):
        counts = count_points_by_class(4, 2)
        assert counts.by_dimension[0] == 16
        assert sum(v for fc, v in counts.per_class.items() if fc.k > 0) == 0

    @pytest.mark.parametrize("n", range(1, 11))
    @pytest.mark.parametrize("big_k", [2, 3, 4, 8, 32])
    def test_partition_identity(self, n, big_k):
        counts = count_points_by_class(n, big_k)
        assert counts.total == big_k**n
        assert sum(counts.by_dimension.values()) == big_k**n
        assert sum(counts.per_class.values()) == big_k**n

    @given(n=st.integers(1, 8), big_k=st.integers(2, 64))
    @settings(max_examples=100, deadline=None)
    def test_partition_identity_property(self, n, big_k):
        counts = count_points_by_class(n, big_k)
        assert counts.total == big_k**n
        assert sum(counts.per_class.values()) == big_k**n

    def test_matches_explicit_classification(self):
        for n, big_k in [(2, 2), (2, 4), (3, 3), (3, 4)]:
            counts = count_points_by_class(n, big_k)
            tally: dict = {}
            for u in itertools.product(range(big_k), repeat=n):
                fc = classify_point(np.array(u, dtype=np.int64), big_k)
                tally[fc] = tally.get(fc, 0) + 1
            nonzero = {fc: c for fc, c in counts.per_class.items() if c > 0}
            assert tally == nonzero

    def test_counting_budget(self):
        with pytest.raises(BudgetError):
            count_points_by_class(4, 1 << 16)


class TestEnumeratePoints:
    def test_z1_line(self):
        c = FiniteConstellation(catalog_lattice("Z1"), 4)
        xs = [float(pt.x[0]) for pt in enumerate_points(c)]
        assert xs == [0.0, 1.0, 2.0, 3.0]

    def test_row_major_order(self):
        c = FiniteConstellation(catalog_lattice("Z2"), 3)
        coords = [pt.u.tolist() for pt in enumerate_points(c)]
        assert coords[:4] == [[0, 0], [0, 1], [0, 2], [1, 0]]
        assert len(coords) == 9

    def test_a2_k2_corners(self):
        lat = catalog_lattice("A2")
        c = FiniteConstellation(lat, 2)
        pts = list(enumerate_points(c))
        assert len(pts) == 4
        v1, v2 = lat.generator[:, 0], lat.generator[:, 1]
        assert np.allclose(pts[0].x, 0.0)
        assert np.allclose(pts[1].x, v2)
        assert np.allclose(pts[2].x, v1)
        assert np.allclose(pts[3].x, v1 + v2)

    def test_materialized_matches_iterator(self):
        c = FiniteConstellation(catalog_lattice("E4"), 4)
        coords, points = constellation_points(c)
        assert coords.shape == (256, 4)
        for i, pt in enumerate(enumerate_points(c)):
            assert np.array_equal(coords[i], pt.u)
            assert np.allclose(points[i], pt.x, atol=1e-15)

    def test_enumeration_budget(self):
        c = FiniteConstellation(catalog_lattice("Z8"), 32)
        with pytest.raises(BudgetError):
            next(enumerate_points(c))
        with pytest.raises(BudgetError):
            constellation_points(c)

    def test_constellation_validation(self):
        with pytest.raises(ValueError):
            FiniteConstellation(catalog_lattice("Z2"), 1)
        with pytest.raises(ValueError):
            FiniteConstellation(catalog_lattice("Z2"), 4.0)
