import sys
sys.path.append('src')

import itertools

import pytest

from kancalc.components.core import iso_check
from kancalc.components.corpus import (
    enumerate_categories,
    enumerate_dim1_shapes,
    enumerate_functors,
    enumerate_presheaves,
    idempotent_category,
    involution_category,
    standard_categories,
)
from kancalc.exception.exception import BoundExceeded


class TestCategoryCorpus:
    def test_monoid_counts(self):
        """Monoids of order 1, 2 and 3 up to isomorphism: 1, 2 and 7"""
        sizes = [len(C.morphisms) for C in enumerate_categories(1, 3, min_objects=1)]
        assert [sizes.count(k) for k in (1, 2, 3)] == [1, 2, 7]

    def test_empty_category_comes_first(self):
        """min_objects=0 adds the empty category in front"""
        cats = list(enumerate_categories(1, 3))
        assert len(cats) == 11
        assert cats[0].objects == ()

    def test_order_two_monoids(self):
        """The two monoids of order two are P and Z2"""
        twos = [C for C in enumerate_categories(1, 2, min_objects=1) if len(C.morphisms) == 2]
        assert any(iso_check(C, idempotent_category()) for C in twos)
        assert any(iso_check(C, involution_category()) for C in twos)

    def test_no_duplicates(self):
        """Two-object categories with at most four morphisms are pairwise non-isomorphic"""
        cats = list(enumerate_categories(2, 4, min_objects=2))
        assert cats[0].morphism_names == ("id_0", "id_1")
        for C, D in itertools.combinations(cats, 2):
            assert not iso_check(C, D)

    def test_names_are_sequential(self):
        """Categories are named C1, C2, ... in order"""
        names = [C.name for C in enumerate_categories(1, 2, min_objects=1)]
        assert names == ["C1", "C2", "C3"]

    def test_budget(self):
        """Too many composition tables stop the enumeration"""
        with pytest.raises(BoundExceeded):
            list(enumerate_categories(2, 4, budget=3))


class TestOtherCorpora:
    def test_dim1_shapes(self):
        """Posets of dimension <= 1 with at most 3 points"""
        assert len(list(enumerate_dim1_shapes(3))) == 8

    def test_functor_budget(self, arrow):
        """[1] -> [1] has three functors"""
        assert len(list(enumerate_functors(arrow, arrow))) == 3
        with pytest.raises(BoundExceeded):
            list(enumerate_functors(arrow, arrow, budget=2))

    def test_presheaves(self, cats):
        """Presheaves on pt of size <= 2"""
        assert len(list(enumerate_presheaves(cats["pt"], 2))) == 3

    def test_standard_names(self):
        """The named categories used across the suites"""
        assert set(standard_categories()) == {"pt", "disc2", "[1]", "[2]", "P", "Z2", "par", "V", "Lambda"}
