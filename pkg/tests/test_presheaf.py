import sys
sys.path.append('src')

import pytest
from hypothesis import given, settings, strategies as st

from kancalc.components.core import constant_functor, full_subcategory, identity_functor, inclusion, pi0, point
from kancalc.components.corpus import standard_categories
from kancalc.components.presheaf import (
    COVARIANT,
    CONTRAVARIANT,
    check_cofinal,
    check_cofinal_colimit,
    check_elements_kan,
    check_final,
    check_kan_adjunction,
    check_triangle_identities,
    check_yoneda_lemma,
    check_yoneda_square,
    cofinal_iff_iso_check,
    colim_set,
    constant,
    elements,
    identity_map,
    iso_set_functors,
    iter_set_functors,
    iter_set_maps,
    kan_left,
    lim_set,
    make_set_functor,
    point_functor,
    representable,
    yoneda_colimit_decomposition,
)
from kancalc.exception.exception import FunctorValidationException, VarianceMismatch

NAMES = sorted(standard_categories())


class TestSetFunctors:
    def test_representable_values(self, P):
        """Y(x) on P is Hom(x, x)"""
        Y = representable(P, "x")
        assert Y.at("x") == ("id_x", "p")
        assert Y.apply("p", "id_x") == "p"

    def test_missing_action(self, arrow):
        """A non-identity morphism needs an action"""
        with pytest.raises(FunctorValidationException):
            make_set_functor(arrow, CONTRAVARIANT, {"0": ("a",), "1": ("b",)}, {})

    def test_action_must_be_a_function(self, arrow):
        """X(0<=1) must land in X(0)"""
        with pytest.raises(FunctorValidationException):
            make_set_functor(arrow, CONTRAVARIANT, {"0": ("a",), "1": ("b",)}, {"0<=1": {"b": "z"}})

    def test_presheaf_sweep(self, cats, arrow):
        """Presheaves with at most one element per object"""
        assert len(list(iter_set_functors(cats["pt"], 2))) == 3
        assert len(list(iter_set_functors(arrow, 1))) == 3

    def test_yoneda_lemma(self, P):
        """hom(Y(x), X) is X(x)"""
        X = constant(P, ("u", "v"))
        result = check_yoneda_lemma(X, "x")
        assert result["ok"]
        assert result["size"] == 2


class TestColimits:
    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_colimit_of_point_counts_components(self, name):
        """colim pt = pi0(C)"""
        C = standard_categories()[name]
        assert len(colim_set(point_functor(C, COVARIANT)).elements) == len(pi0(C))

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_limit_of_point(self, name):
        """lim pt is a point"""
        C = standard_categories()[name]
        assert len(lim_set(point_functor(C)).elements) == 1

    def test_elements_of_representable(self, arrow):
        """Elements of Y(1) on [1] form a copy of [1]"""
        el = elements(representable(arrow, "1"))
        assert len(el.cat.objects) == 2
        assert el.proj.ob("(1,id_1)") == "1"

    def test_colimit_decomposition(self, P):
        """A presheaf is the colimit of representables over its elements"""
        assert yoneda_colimit_decomposition(representable(P, "x"), 1)["ok"]

    def test_elements_kan(self, arrow):
        """pi^o_! pt recovers X"""
        assert check_elements_kan(representable(arrow, "1"), 1)["ok"]


class TestKanExtensions:
    def test_adjunction_along_collapse(self, arrow):
        """gamma_! is left adjoint to gamma^* along [1] -> pt"""
        gamma = constant_functor(arrow, point(), "*")
        X = representable(arrow, "0")
        Y = constant(point(), ("u", "v"))
        assert check_kan_adjunction(gamma, X, Y)["ok"]
        assert check_triangle_identities(gamma, X, Y) == {"left": True, "right": True}

    def test_left_extension_of_point(self, arrow):
        """[1] -> pt: colim over a connected category is a point"""
        gamma = constant_functor(arrow, point(), "*")
        K = kan_left(gamma, point_functor(arrow))
        assert K.functor.at("*") and len(K.functor.at("*")) == 1

    def test_yoneda_square(self, arrow):
        """Extension of a representable is representable"""
        assert check_yoneda_square(constant_functor(arrow, point(), "*"))["ok"]

    def test_variance_is_checked(self, arrow):
        """Requesting the wrong variance is rejected"""
        gamma = constant_functor(arrow, point(), "*")
        with pytest.raises(VarianceMismatch):
            kan_left(gamma, point_functor(arrow), COVARIANT)

    def test_iso_detection(self, P):
        """Constant presheaves of the same size are isomorphic"""
        assert iso_set_functors(constant(P, ("a", "b")), constant(P, ("c", "d"))) is not None
        assert iso_set_functors(constant(P, ("a",)), constant(P, ("c", "d"))) is None


class TestCofinality:
    def test_top_is_cofinal(self, arrow):
        """{1} in [1] is cofinal, {0} is not"""
        top = inclusion(full_subcategory(arrow, ["1"]), arrow)
        bottom = inclusion(full_subcategory(arrow, ["0"]), arrow)
        assert check_cofinal(top) == (True, None)
        assert check_cofinal(bottom) == (False, "1")
        assert check_final(bottom) == (True, None)

    def test_cofinal_restriction_of_colimit(self, arrow):
        """Restricting along a cofinal functor keeps the colimit"""
        top = inclusion(full_subcategory(arrow, ["1"]), arrow)
        assert check_cofinal_colimit(top, point_functor(arrow, COVARIANT))["bijective"]

    def test_alpha_cofinal_for_invertible_map(self, arrow):
        """The identity of gamma_! Y(1) induces a cofinal map of elements"""
        kan = kan_left(identity_functor(arrow), representable(arrow, "1"))
        r = cofinal_iff_iso_check(kan, identity_map(kan.functor))
        assert (r["cofinal"], r["iso"]) == (True, True)
        assert r["ok"]

    def test_alpha_not_cofinal_for_non_invertible_map(self, arrow):
        """Y(0) -> pt is not invertible and its map of elements misses the top"""
        kan = kan_left(identity_functor(arrow), representable(arrow, "0"))
        a = next(iter_set_maps(kan.functor, point_functor(arrow)))
        r = cofinal_iff_iso_check(kan, a)
        assert (r["cofinal"], r["iso"]) == (False, False)
        assert r["ok"]
