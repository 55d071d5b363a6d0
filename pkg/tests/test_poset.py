import sys
sys.path.append('src')

import pytest
from hypothesis import given, settings, strategies as st

from kancalc.components.core import point
from kancalc.components.corpus import cospan_poset, span_poset
from kancalc.components.poset import (
    GluingDatum,
    as_category,
    certify_cocartesian,
    chain,
    chain_category,
    check_lambda_adjunction,
    dimension,
    discrete_poset,
    enumerate_posets,
    from_generators,
    glue,
    glue_pushout,
    hasse_edges,
    is_monotone,
    is_directed,
    iter_left_closed,
    lambda_closure,
    left_closed_sets,
    pushout_square,
    split,
    try_as_poset,
)
from kancalc.exception.exception import (
    AntisymmetryViolation,
    BoundExceeded,
    NonMonotoneLambda,
    PosetValidationException,
)

SMALL_POSETS = list(enumerate_posets(3))


class TestPosetBasics:
    def test_antisymmetry(self):
        """a <= b and b <= a with a != b is rejected"""
        with pytest.raises(AntisymmetryViolation):
            from_generators("bad", ["a", "b"], [("a", "b"), ("b", "a")])

    def test_transitive_closure(self):
        """Generators are closed under transitivity"""
        J = from_generators("J", ["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert J.le("a", "c")
        assert hasse_edges(J) == [("a", "b"), ("b", "c")]

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_chain_dimension(self, n):
        """[n] has dimension n"""
        assert dimension(chain(n)) == n

    def test_empty_dimension(self):
        """The empty poset has dimension -1"""
        assert dimension(discrete_poset([], "empty")) == -1

    def test_directed(self):
        """[2] is directed with top 2; the span is not"""
        assert is_directed(chain(2)) == (True, "2")
        ok, pair = is_directed(span_poset())
        assert not ok
        assert set(pair) == {"a", "b"}

    def test_thin_categories_round_trip(self, cats):
        """A thin category with no non-trivial isos reads back as its poset"""
        assert try_as_poset(cats["[2]"]) == chain(2)
        assert try_as_poset(cats["P"]) is None


class TestEnumeration:
    def test_counts_by_size(self):
        """Posets up to isomorphism: 1, 1, 2, 5, 16"""
        sizes = [len(J) for J in enumerate_posets(4)]
        assert [sizes.count(n) for n in range(5)] == [1, 1, 2, 5, 16]

    def test_dimension_filter(self):
        """max_dim=1 drops chains of length 2"""
        assert all(dimension(J) <= 1 for J in enumerate_posets(3, max_dim=1))
        assert len(list(enumerate_posets(3, min_size=3, max_dim=1))) == 4

    def test_budget(self):
        """Enumeration past the budget stops"""
        with pytest.raises(BoundExceeded):
            list(enumerate_posets(4, budget=3))


class TestLeftClosed:
    def test_left_closed_sets_of_chain(self):
        """L([n]) is [n+1]"""
        L = left_closed_sets(chain(2))
        assert len(L) == 4
        assert dimension(L) == 3

    def test_lambda_closure(self):
        """Lambda({t}) is everything below t"""
        assert lambda_closure(cospan_poset(), {"t"}).members == {"a", "b", "t"}

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(SMALL_POSETS))
    def test_lambda_adjunction(self, J):
        """Lambda is left adjoint to the inclusion of left-closed sets"""
        assert check_lambda_adjunction(J)


class TestGluing:
    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_split_then_glue(self, data):
        """Gluing the two halves of a split gives back the poset"""
        J = data.draw(st.sampled_from(SMALL_POSETS))
        S = data.draw(st.sampled_from(list(iter_left_closed(J))))
        assert glue(split(J, S)).poset == J

    def test_non_monotone_lambda(self):
        """lambda must be monotone along J1"""
        J0 = chain(1)
        J1 = from_generators("J1", ["u", "v"], [("u", "v")])
        with pytest.raises(NonMonotoneLambda):
            GluingDatum(J0, J1, {"u": frozenset({"0", "1"}), "v": frozenset({"0"})})

    def test_glue_seam(self):
        """Across the seam j <= j' iff j is in lambda(j')"""
        d = GluingDatum(chain(0), discrete_poset(["u", "v"], "D"), {"u": frozenset({"0"}), "v": frozenset()})
        G = glue(d).poset
        assert G.le("0", "u")
        assert not G.le("0", "v")

    def test_glue_pushout_along_identity(self):
        """Pushing out along the identity of J0 gives back the glued poset"""
        d = split(chain(2), {"0"})
        sq = glue_pushout(d, d.J0, {"0": "0"})
        assert sq.D == glue(d).poset
        assert sq.bottom == {j: j for j in sq.C.elements}

    def test_glue_pushout_square_commutes(self):
        """bottom . left = right . top and the glued halves stay glued"""
        d = split(chain(2), {"0"})
        sq = glue_pushout(d, chain(1), {"0": "1"})
        for j in sq.A.elements:
            assert sq.bottom[sq.left[j]] == sq.right[sq.top[j]]
        assert is_monotone(sq.C, sq.D, sq.bottom)
        assert len(sq.D.elements) == 4
        assert dimension(sq.D) == 3

    def test_glue_pushout_needs_monotone_leg(self):
        """A non-monotone pushout leg is rejected"""
        d = split(chain(2), {"0", "1"})
        with pytest.raises(PosetValidationException):
            glue_pushout(d, chain(1), {"0": "1", "1": "0"})

    @pytest.mark.parametrize("J", [chain(1), span_poset(), cospan_poset()], ids=["[1]", "V", "Lambda"])
    def test_height_square_is_cocartesian(self, J):
        """The height decomposition square is a pushout against small targets"""
        result = certify_cocartesian(pushout_square(J), [point(), chain_category(1)])
        assert result["ok"]
        assert len(result["checked"]) == 2

    def test_as_category(self):
        """The category of [1] has three morphisms"""
        assert len(as_category(chain(1)).morphisms) == 3
