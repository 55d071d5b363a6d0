import sys
sys.path.append('src')

import pytest
from hypothesis import given, settings, strategies as st

from kancalc.components.core import full_subcategory, inclusion, product
from kancalc.components.corpus import standard_categories
from kancalc.components.filtered import (
    check_cofinal_subcategory,
    check_comma_corr,
    check_con_le,
    check_cone_le,
    check_level_reduction,
    check_p_le,
    check_products_filtered,
    compact_witness_search,
    filt_commute_check,
    filter_report,
    fun_cat,
    is_filtered_at_level,
    is_filtered_exact,
    reduction_level,
)
from kancalc.components.presheaf import COVARIANT, constant, corepresentable, point_functor, representable
from kancalc.exception.exception import PreconditionFailed, VarianceMismatch

NAMES = sorted(standard_categories())


class TestExactCriteria:
    @pytest.mark.parametrize("name,expected", [
        ("pt", True), ("[1]", True), ("[2]", True), ("P", True), ("Lambda", True),
        ("disc2", False), ("Z2", False), ("par", False), ("V", False),
    ])
    def test_filtered(self, cats, name, expected):
        """Filteredness of the named categories"""
        assert is_filtered_exact(cats[name], cross_check=True) is expected

    def test_report_for_idempotent(self, P):
        """P is filtered: the id-cone (x,p) and a terminal split object"""
        rep = filter_report(P)
        assert rep.exact_filtered and rep.karoubi_terminal
        assert rep.consistent
        assert rep.witness.name() == "(x,p)"

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_criteria_agree(self, name):
        """The id-cone and the Karoubi terminal object exist together"""
        assert check_p_le(standard_categories()[name])["ok"]

    def test_products(self, cats):
        """A product of filtered categories is filtered"""
        result = check_products_filtered(cats["[1]"], cats["P"])
        assert result["ok"] and result["product"]


class TestLevels:
    def test_reduction_level(self, arrow):
        """2 |Ob| + |Mor| + 1"""
        assert reduction_level(arrow) == 8

    def test_discrete_fails_at_three(self, disc2):
        """Empty and one-point diagrams always have cones; two points need not"""
        assert is_filtered_at_level(disc2, 2)[0]
        ok, failing = is_filtered_at_level(disc2, 3)
        assert not ok
        assert set(failing.obj_map.values()) == {"a", "b"}

    def test_level_must_be_positive(self, disc2):
        """Level 0 is rejected"""
        with pytest.raises(PreconditionFailed):
            is_filtered_at_level(disc2, 0)

    @pytest.mark.parametrize("name", ["P", "disc2", "Z2"])
    def test_level_and_v_cone(self, cats, name):
        """Exact filteredness implies the level check and matches the cone over q"""
        result = check_level_reduction(cats[name], 3)
        assert result["ok"]
        assert result["v_cone"] == result["exact"]


class TestColimitsOverFiltered:
    def test_point_has_point_colimit(self, arrow):
        """Filtered elements and a one-point colimit"""
        result = check_con_le(arrow, point_functor(arrow, COVARIANT))
        assert result["ok"] and result["elements_filtered"] and result["colim_is_point"]

    def test_two_points(self, arrow):
        """Two disjoint copies: neither filtered nor a point"""
        result = check_con_le(arrow, constant(arrow, ("u", "v"), COVARIANT))
        assert result["ok"]
        assert not result["elements_filtered"]
        assert len(result["colim"]) == 2

    def test_requires_filtered_index(self, disc2):
        """The index category must be filtered"""
        with pytest.raises(PreconditionFailed):
            check_con_le(disc2, point_functor(disc2, COVARIANT))

    def test_requires_covariant(self, arrow):
        """Presheaves are rejected"""
        with pytest.raises(VarianceMismatch):
            check_con_le(arrow, representable(arrow, "0"))

    def test_corepresentable(self, cats):
        """Hom(0, -) on [2] has filtered elements"""
        C = cats["[2]"]
        assert check_con_le(C, corepresentable(C, "0"))["colim_is_point"]


class TestCofinalAndCones:
    def test_top_of_chain(self, cats):
        """{2} in [2] is filtered and cofinal"""
        result = check_cofinal_subcategory(cats["[2]"], ["2"])
        assert result["hypothesis"] and result["ok"]
        assert result["cofinal"]

    def test_bottom_of_chain_fails_hypothesis(self, cats):
        """{0} in [2] has empty fibers, so nothing is claimed"""
        result = check_cofinal_subcategory(cats["[2]"], ["0"])
        assert not result["hypothesis"]
        assert result["empty_fiber"] == "1"

    def test_functor_category(self, disc2, arrow):
        """Fun(disc2, [1]) is [1] x [1]; constants are cofinal"""
        assert len(fun_cat(disc2, arrow).category.objects) == 4
        result = check_cone_le(disc2, arrow)
        assert result["ok"] and result["fun_filtered"] and result["cofinal"]

    def test_cone_needs_filtered_target(self, cats):
        """Fun(J, C) is only examined for filtered C"""
        with pytest.raises(PreconditionFailed):
            check_cone_le(cats["pt"], cats["disc2"])

    def test_comma_correspondence(self, arrow):
        """eta is cofinal for the cofinal top inclusion"""
        top = inclusion(full_subcategory(arrow, ["1"]), arrow)
        result = check_comma_corr(top)
        assert result["applicable"] and result["ok"]


class TestCommutation:
    def test_filtered_colimit_commutes(self, arrow, disc2):
        """colim over [1] commutes with a product of two"""
        X = constant(product(arrow, disc2).category, ("*",), COVARIANT)
        result = filt_commute_check(arrow, disc2, X)
        assert result["filtered"] and result["bijective"]
        assert result["left"] == result["right"] == 1

    def test_discrete_colimit_does_not(self, disc2):
        """Over disc2 x disc2: 2 elements on the left against 4 on the right"""
        X = constant(product(disc2, disc2).category, ("*",), COVARIANT)
        result = filt_commute_check(disc2, disc2, X)
        assert not result["filtered"]
        assert not result["bijective"]
        assert (result["left"], result["right"]) == (2, 4)
        assert result["witness"]["right"] == 4

    def test_functor_must_live_on_product(self, arrow, disc2):
        """X on the wrong base is rejected"""
        with pytest.raises(PreconditionFailed):
            filt_commute_check(arrow, disc2, point_functor(arrow, COVARIANT))


class TestCompactness:
    def test_representable_is_compact(self, arrow):
        """Y(1) is gamma_! pt for a one-point shape"""
        witness = compact_witness_search(representable(arrow, "1"), 2)
        assert witness is not None
        assert len(witness.shape) == 1

    def test_two_points_need_a_bigger_shape(self, arrow):
        """Two copies of the point are not a retract over a single point"""
        assert compact_witness_search(constant(arrow, ("u", "v")), 2) is None

    def test_rejects_covariant(self, arrow):
        """The search is over presheaves"""
        with pytest.raises(VarianceMismatch):
            compact_witness_search(point_functor(arrow, COVARIANT), 2)
