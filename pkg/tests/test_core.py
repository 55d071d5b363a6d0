import sys
sys.path.append('src')

import pytest
from hypothesis import given, settings, strategies as st

from kancalc.components.core import (
    add_initial,
    add_terminal,
    bicone_collapse,
    build_category,
    colimit,
    comma_category,
    compose_functors,
    constant_functor,
    identity_functor,
    initial_objects,
    is_connected,
    is_karoubi_closed,
    iso_check,
    iter_functors,
    iter_nat_transforms,
    join,
    karoubi_closure,
    limit,
    opposite,
    pi0,
    point,
    product,
    terminal_objects,
    validate_functor,
    FinFunctor,
)
from kancalc.components.corpus import standard_categories
from kancalc.components.filtered import karoubi_terminal
from kancalc.components.poset import chain_category
from kancalc.exception.exception import (
    AssociativityViolation,
    DanglingEndpoint,
    FunctorValidationException,
    IdentityViolation,
    MissingComposite,
)

NAMES = sorted(standard_categories())


class TestValidation:
    def test_missing_composite(self):
        """An endomorphism without a square is rejected"""
        with pytest.raises(MissingComposite):
            build_category("bad", ["x"], [("e", "x", "x")])

    def test_dangling_endpoint(self):
        """Arrows must land on declared objects"""
        with pytest.raises(DanglingEndpoint):
            build_category("bad", ["a"], [("f", "a", "b")])

    def test_identity_violation(self):
        """id o f must be f"""
        with pytest.raises(IdentityViolation):
            build_category("bad", ["x"], [("e", "x", "x")], {("id_x", "e"): "id_x", ("e", "e"): "e"})

    def test_associativity_violation(self):
        """A unital but non-associative table on one object"""
        table = {("a", "a"): "b", ("a", "b"): "b", ("b", "a"): "b", ("b", "b"): "a"}
        with pytest.raises(AssociativityViolation):
            build_category("bad", ["x"], [("a", "x", "x"), ("b", "x", "x")], table)

    def test_identities_are_named_after_objects(self, P):
        """Omitted identities default to id_<obj>"""
        assert P.id("x") == "id_x"
        assert P.compose("p", "p") == "p"
        assert P.is_idempotent("p")


class TestFunctors:
    @pytest.mark.parametrize("dom,cod,count", [("[1]", "[1]", 3), ("P", "P", 2), ("Z2", "P", 1), ("disc2", "pt", 1)])
    def test_functor_counts(self, cats, dom, cod, count):
        """Number of functors between small named categories"""
        assert len(list(iter_functors(cats[dom], cats[cod]))) == count

    def test_rejects_non_functor(self, cats):
        """Z2 -> P sending t to p breaks t t = id"""
        F = FinFunctor(cats["Z2"], cats["P"], {"x": "x"}, {"t": "p", "id_x": "id_x"}, "F")
        with pytest.raises(FunctorValidationException):
            validate_functor(F)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_identity_is_unit(self, name):
        """id o F = F for the identity functor"""
        C = standard_categories()[name]
        F = identity_functor(C)
        assert compose_functors(F, F) == F

    def test_nat_transforms_between_constants(self, arrow):
        """Constant functors at 0 and 1 on [1]: exactly one transformation 0 => 1"""
        F = constant_functor(arrow, arrow, "0")
        G = constant_functor(arrow, arrow, "1")
        assert len(list(iter_nat_transforms(F, G))) == 1
        assert list(iter_nat_transforms(G, F)) == []


class TestConstructions:
    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_double_opposite(self, name):
        """(C^o)^o is isomorphic to C"""
        C = standard_categories()[name]
        assert iso_check(opposite(opposite(C)), C)

    def test_product_size(self, P, arrow):
        """Objects and morphisms of a product multiply"""
        prod = product(P, arrow)
        assert len(prod.category.objects) == 2
        assert len(prod.category.morphisms) == len(P.morphisms) * len(arrow.morphisms)
        assert prod.category.name == "Px[1]"

    def test_comma_side(self, arrow):
        """Only left and right comma categories exist"""
        with pytest.raises(ValueError):
            comma_category(identity_functor(arrow), "up")

    def test_join_of_points_is_span(self, cats):
        """pt * pt has three objects: the corner pair below the two cone points"""
        J = join(point(), point())
        assert len(J.objects) == 3
        assert len(J.morphisms) == 5
        assert iso_check(J, cats["V"])
        assert not iso_check(J, chain_category(1))

    @pytest.mark.parametrize("left", ["pt", "[1]", "disc2", "P"])
    @pytest.mark.parametrize("right", ["pt", "disc2"])
    def test_cone_of_join(self, cats, left, right):
        """C0^> x C1^> is the cone on C0 * C1"""
        C0, C1 = cats[left], cats[right]
        square = product(add_terminal(C0).category, add_terminal(C1).category).category
        assert iso_check(square, add_terminal(join(C0, C1)).category)

    @pytest.mark.parametrize("left", ["pt", "[1]", "disc2", "P"])
    @pytest.mark.parametrize("right", ["pt", "disc2"])
    def test_bicone_collapse(self, cats, left, right):
        """The collapse is a functor sending every pair with a cone point to the new point"""
        C0, C1 = cats[left], cats[right]
        F = validate_functor(bicone_collapse(C0, C1))
        A0, A1 = add_terminal(C0), add_terminal(C1)
        o = add_terminal(product(C0, C1).category).new_object
        for x in F.dom.objects:
            a, b = F.dom.payload[x]
            if a == A0.new_object or b == A1.new_object:
                assert F.ob(x) == o
            else:
                assert F.ob(x) != o

    def test_add_terminal(self, disc2):
        """The adjoined object is the only terminal one"""
        aug = add_terminal(disc2)
        assert terminal_objects(aug.category) == [aug.new_object]
        assert is_connected(aug.category)

    @pytest.mark.parametrize("name", ["pt", "disc2", "[1]", "P", "Z2"])
    def test_add_initial(self, cats, name):
        """The adjoined object is the only initial one"""
        aug = add_initial(cats[name])
        assert initial_objects(aug.category) == [aug.new_object]
        assert aug.category.name == cats[name].name + "^<"

    def test_components(self, cats):
        """pi0 of discrete and connected categories"""
        assert len(pi0(cats["disc2"])) == 2
        assert len(pi0(cats["par"])) == 1
        assert is_connected(cats["V"])


class TestLimits:
    def test_colimit_of_identity_on_arrow(self, arrow):
        """The terminal object 1 is the colimit of id_[1]"""
        cone = colimit(identity_functor(arrow))
        assert cone is not None
        assert cone.vertex == "1"
        assert dict(cone.legs) == {"0": "0<=1", "1": "id_1"}

    def test_limit_of_identity_on_arrow(self, arrow):
        """and 0 is its limit"""
        cone = limit(identity_functor(arrow))
        assert cone is not None and cone.vertex == "0"

    def test_idempotent_has_cone_but_no_colimit(self, P):
        """P has the cone (x,p) over its identity, which is not universal"""
        assert colimit(identity_functor(P)) is None


class TestKaroubi:
    def test_closure_of_idempotent(self, P):
        """P(P) has the split object (x,p), which is terminal"""
        K = karoubi_closure(P).category
        assert len(K.objects) == 2
        assert karoubi_terminal(P) == "(x,p)"
        assert not is_karoubi_closed(P)
        assert is_karoubi_closed(K)

    @pytest.mark.parametrize("name", ["[1]", "disc2", "Z2", "par"])
    def test_closure_without_idempotents(self, cats, name):
        """Categories whose only idempotents are identities are already closed"""
        C = cats[name]
        assert is_karoubi_closed(C)
        assert len(karoubi_closure(C).category.objects) == len(C.objects)
