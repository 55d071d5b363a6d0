import sys
sys.path.append('src')

import pytest

from kancalc.components.core import constant_functor, full_subcategory, identity_functor, inclusion, point
from kancalc.components.grothendieck import (
    CatDiagram,
    check_dim1_le,
    check_lax_ind_shadow,
    check_lax_product_shadow,
    colax_limit,
    comma_identification,
    constant_diagram,
    from_functor,
    from_set_functor,
    groth_arrow,
    groth_colax,
    lax_limit,
    relative_yoneda,
    set_degeneration,
    twisted_arrows,
    validate_diagram,
)
from kancalc.components.poset import as_category, chain
from kancalc.components.corpus import span_poset
from kancalc.components.presheaf import COVARIANT, constant, point_functor, representable
from kancalc.exception.exception import FunctorValidationException, PreconditionFailed


class TestDiagrams:
    def test_missing_fiber(self, arrow):
        """Every index element needs a category"""
        D = CatDiagram(chain(1), {"0": arrow}, {}, "D")
        with pytest.raises(FunctorValidationException):
            validate_diagram(D)

    def test_from_functor(self, arrow):
        """A functor is a diagram over [1] with D(1) its domain"""
        gamma = constant_functor(arrow, point(), "*")
        D = validate_diagram(from_functor(gamma))
        assert D.at("1") == arrow
        assert D.act("0", "1") is gamma

    def test_presheaf_as_diagram(self, arrow):
        """Discrete fibers, one per element set"""
        D = validate_diagram(from_set_functor(representable(arrow, "1")))
        assert len(D.at("0").objects) == 1

    def test_covariant_is_rejected(self, arrow):
        """Only presheaves give diagrams of discrete categories"""
        with pytest.raises(PreconditionFailed):
            from_set_functor(point_functor(arrow, COVARIANT))


class TestConstructions:
    def test_total_categories(self, P):
        """Both constructions have one object per fiber object"""
        D = constant_diagram(chain(1), P)
        assert len(groth_arrow(D).category.objects) == 2
        assert len(groth_colax(D).category.objects) == 2

    @pytest.mark.parametrize("name", ["[1]", "P"])
    def test_lax_limit_of_constant(self, cats, name):
        """Sections of a constant diagram over [1] are the arrows of the fiber"""
        C = cats[name]
        D = constant_diagram(chain(1), C)
        assert len(lax_limit(D).sections.objects) == len(C.morphisms)
        assert len(colax_limit(D).sections.objects) == len(C.morphisms)

    @pytest.mark.parametrize("kind", ["identity", "collapse", "top"])
    def test_comma_identification(self, arrow, kind):
        """Over [1], the lax and co-lax limits are comma categories"""
        gamma = {
            "identity": identity_functor(arrow),
            "collapse": constant_functor(arrow, point(), "*"),
            "top": inclusion(full_subcategory(arrow, ["1"]), arrow),
        }[kind]
        result = comma_identification(gamma)
        assert result == {"ok": True, "lax": True, "colax": True}

    @pytest.mark.parametrize("X", [
        representable(as_category(chain(1)), "1"),
        constant(as_category(span_poset()), ("u", "v")),
    ], ids=["Y(1)", "const2-on-V"])
    def test_set_degeneration(self, X):
        """For Set-valued diagrams both constructions are the elements"""
        assert set_degeneration(X)["ok"]


class TestTwisted:
    @pytest.mark.parametrize("name,objects", [("[1]", 3), ("P", 2), ("Z2", 2)])
    def test_twisted_arrows(self, cats, name, objects):
        """tw(I) has the morphisms of I as objects and matches the elements of Hom"""
        tw = twisted_arrows(cats[name])
        assert len(tw.category.objects) == objects
        assert tw.elements_iso


class TestRelativeYoneda:
    @pytest.mark.parametrize("name", ["[1]", "P"])
    def test_every_section(self, cats, name):
        """The relative Yoneda presheaf is tw(s)_! pt"""
        D = constant_diagram(chain(1), cats[name])
        S = lax_limit(D).sections
        assert all(relative_yoneda(D, S.payload[o]).ok for o in S.objects)

    def test_fully_faithful(self, P):
        """Maps of sections are maps of relative Yoneda presheaves"""
        assert check_lax_ind_shadow(constant_diagram(chain(1), P))["ok"]

    def test_colax_limit_of_filtered_fibers(self, arrow):
        """Filtered fibers give a filtered co-lax limit"""
        assert check_dim1_le(constant_diagram(chain(1), arrow))["ok"]

    def test_non_filtered_fiber(self, disc2):
        """The fibers must be filtered"""
        with pytest.raises(PreconditionFailed):
            check_dim1_le(constant_diagram(chain(1), disc2))

    def test_lax_product(self, arrow):
        """Presheaves with filtered elements have a lax product with filtered elements"""
        g = identity_functor(arrow)
        X = representable(arrow, "1")
        result = check_lax_product_shadow(g, g, X, X)
        assert result["hypothesis"]
        assert result["ok"]
