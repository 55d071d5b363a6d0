import sys
sys.path.append('src')

import pytest

from kancalc.components.core import full_subcategory, identity_functor, inclusion
from kancalc.components.ind import (
    check_ind_hom_associative,
    check_presheaf_of_fully_faithful,
    ind_hom,
    ind_identity,
    ind_presentation,
    is_ind_object,
    karoubi_identification,
    presheaf_iso,
    presheaf_of,
    pullback_failure_demo,
    split_presheaf,
)
from kancalc.components.presheaf import COVARIANT, constant, iso_set_functors, point_functor, representable
from kancalc.exception.exception import PreconditionFailed, VarianceMismatch


@pytest.fixture
def presentations(arrow):
    """The identity of [1] and the two one-point inclusions"""
    whole = ind_presentation(identity_functor(arrow))
    top = ind_presentation(inclusion(full_subcategory(arrow, ["1"]), arrow))
    bottom = ind_presentation(inclusion(full_subcategory(arrow, ["0"]), arrow))
    return whole, top, bottom


class TestIndHom:
    def test_requires_filtered_index(self, disc2):
        """A presentation needs a filtered index"""
        with pytest.raises(PreconditionFailed):
            ind_presentation(identity_functor(disc2))

    def test_hom_sizes(self, presentations):
        """Both [1] and {1} present Y(1); {0} presents Y(0)"""
        whole, top, bottom = presentations
        assert len(ind_hom(whole, top).elements) == 1
        assert len(ind_hom(bottom, whole).elements) == 1
        assert len(ind_hom(whole, bottom).elements) == 0

    def test_identity_is_a_hom_element(self, presentations):
        """The identity lies in the hom set"""
        whole, _, _ = presentations
        assert ind_identity(whole) in ind_hom(whole, whole).elements

    def test_category_laws(self, presentations):
        """Composition is associative and unital"""
        assert check_ind_hom_associative(list(presentations))["ok"]

    def test_presheaf_of_is_fully_faithful(self, presentations):
        """Ind hom sets match presheaf hom sets"""
        whole, top, bottom = presentations
        for A in presentations:
            for B in presentations:
                result = check_presheaf_of_fully_faithful(A, B)
                assert result["ok"]
                assert result["ind_hom"] == result["presheaf_hom"]

    def test_equal_ind_objects(self, arrow, presentations):
        """[1] and {1} present the same Ind-object"""
        whole, top, bottom = presentations
        assert presheaf_iso(whole, top) is not None
        assert presheaf_iso(whole, bottom) is None
        assert iso_set_functors(presheaf_of(bottom), representable(arrow, "0")) is not None


class TestRecognition:
    def test_representable(self, P):
        """Representables have a terminal element, so they are Ind-objects"""
        assert is_ind_object(representable(P, "x")).ok

    def test_two_points(self, cats):
        """Two points over pt have discrete elements"""
        rec = is_ind_object(constant(cats["pt"], ("u", "v")))
        assert not rec.ok
        assert rec.witness is not None

    def test_rejects_covariant(self, arrow):
        """Recognition is for presheaves"""
        with pytest.raises(VarianceMismatch):
            is_ind_object(point_functor(arrow, COVARIANT))


class TestKaroubi:
    def test_split_presheaf(self, P):
        """The image of p on Y(x)"""
        assert split_presheaf(P, "x", "p").at("x") == ("p",)

    def test_idempotent(self, P):
        """P(P) has two non-isomorphic objects and embeds fully faithfully"""
        result = karoubi_identification(P, bound=1)
        assert result["fully_faithful"]
        assert len(result["classes"]) == 2
        assert result["ok"]
        assert result["swept"] == 2


class TestProductDemo:
    @pytest.mark.parametrize("N,even", [(2, True), (3, False), (4, True), (5, False)])
    def test_parity(self, N, even):
        """The strict fiber product is empty, the lax one is not; the top's parity decides cofinality"""
        result = pullback_failure_demo(N)
        assert result["ok"]
        assert result["strict_objects"] == 0
        assert result["lax_objects"] > 0
        assert result["even_cofinal"] is even
        assert result["odd_cofinal"] is not even

    def test_needs_two(self):
        """[1] is too short"""
        with pytest.raises(PreconditionFailed):
            pullback_failure_demo(1)
