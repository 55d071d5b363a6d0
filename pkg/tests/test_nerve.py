import sys
sys.path.append('src')

import pytest
from hypothesis import given, settings, strategies as st

from kancalc.components.core import identity_functor
from kancalc.components.corpus import standard_categories
from kancalc.components.nerve import (
    check_simplicial_identities,
    check_v_swap,
    nerve,
    nerve_map,
    simplex_category,
    v_replacement,
    verify_nerve_fully_faithful,
    verify_v_localization,
    verify_v_square,
    xi,
)
from kancalc.exception.exception import PreconditionFailed

NAMES = sorted(standard_categories())


class TestNerve:
    @pytest.mark.parametrize("name,dim,counts", [
        ("[1]", 3, [2, 3, 4, 5]),
        ("P", 3, [1, 2, 4, 8]),
        ("disc2", 2, [2, 2, 2]),
    ])
    def test_chain_counts(self, cats, name, dim, counts):
        """Number of k-chains per level"""
        assert nerve(cats[name], dim).counts() == counts

    def test_truncation_must_be_positive(self, arrow):
        """A 0-truncated nerve is not offered"""
        with pytest.raises(PreconditionFailed):
            nerve(arrow, 0)

    def test_simplex_category(self):
        """Delta_{<=1} has 1 + 2 + 1 + 3 morphisms"""
        assert len(simplex_category(1).morphisms) == 7

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_simplicial_identities(self, name):
        """The nerve is a presheaf on Delta"""
        assert check_simplicial_identities(nerve(standard_categories()[name], 2))

    def test_fully_faithful(self, arrow, P):
        """Functors and nerve maps agree"""
        result = verify_nerve_fully_faithful(arrow, arrow, 2)
        assert result["ok"]
        assert result["functors"] == 3
        assert verify_nerve_fully_faithful(P, P, 2)["ok"]

    def test_nerve_of_identity(self, arrow):
        """N(id) fixes every chain"""
        comps = nerve_map(identity_functor(arrow), 2)
        assert all(x == y for level in comps.values() for x, y in level.items())

    def test_xi_lands_on_last_object(self, arrow):
        """A chain is sent to its last object"""
        F = xi(arrow, 1)
        assert F.ob("([1],(0,0<=1))") == "1"


class TestVReplacement:
    def test_shape_for_arrow(self, arrow):
        """V([1]) has 2 points per object, one per morphism and two relations per morphism"""
        vrep = v_replacement(arrow)
        V = vrep.vposet
        assert len(V) == 7
        assert sum(1 for a, b in V.leq if a != b) == 6

    def test_q_and_q_perp(self, arrow):
        """q reads the target of a morphism point, q_perp the source"""
        vrep = v_replacement(arrow)
        assert vrep.q.ob("(o,0<=1)") == "1"
        assert vrep.q_perp.ob("(o,0<=1)") == "0"
        assert vrep.p["(0,0)"] == "0"

    def test_collapse_layer(self, arrow):
        """The collapse layer keeps the relations q sends to identities"""
        zero = v_replacement(arrow).zero_part
        assert zero.le("(1,1)", "(o,0<=1)")
        assert not zero.le("(0,0)", "(o,0<=1)")

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from(NAMES))
    def test_swap(self, name):
        """V(C) and V(C^o) are swapped by exchanging the two layers"""
        assert check_v_swap(standard_categories()[name])

    @pytest.mark.parametrize("name", ["[1]", "P", "Z2"])
    def test_localization(self, cats, name):
        """Natural maps are limits over V(C); q^* is fully faithful"""
        assert verify_v_localization(cats[name], cats["[1]"])["ok"]

    @pytest.mark.parametrize("name", ["[1]", "V", "Lambda"])
    def test_square_for_thin_targets(self, cats, name):
        """Functors V(C) -> E collapsing the layer are exactly the q^* F"""
        result = verify_v_square(cats[name], cats["[1]"])
        assert result["ok"]
        assert result["functors"] == result["fiber"]
