import sys
sys.path.append('src')

import pytest

from kancalc.components.core import FinCat, build_category
from kancalc.components.corpus import idempotent_category, span_poset, standard_categories
from kancalc.components.formats import (
    Workspace,
    dump_workspace,
    dumps,
    load,
    load_one,
    loads,
    to_dot,
)
from kancalc.components.poset import chain
from kancalc.exception.exception import FileOperationException, ParseError, ValidationError

CHAIN_DIAGRAM = """
poset C2
elements: 0 1 2
le: 0<=1 1<=2

category one
objects: *

functor k : one -> one
ob * -> *

diagram K over C2
fiber 0 = one
fiber 1 = one
fiber 2 = one
transition 0<=1 = k
transition 1<=2 = k
"""


class TestParsing:
    def test_category_file(self, fixtures_dir):
        """idem.fc is the idempotent category"""
        C = load_one(fixtures_dir / "idem.fc", Workspace())
        assert isinstance(C, FinCat)
        assert C == idempotent_category()

    def test_several_names_on_one_mor_line(self, fixtures_dir):
        """mor f g : a -> b declares two parallel arrows"""
        C = load_one(fixtures_dir / "pair.fc", Workspace())
        assert C.hom("a", "b") == ("f", "g")

    def test_later_files_see_earlier_entities(self, fixtures_dir):
        """A setfun refers to a poset loaded before it"""
        ws = Workspace()
        load(fixtures_dir / "arrow.pos", ws)
        X = load_one(fixtures_dir / "yone.psh", ws)
        assert X.is_presheaf
        assert X.apply("0<=1", "i") == "f"

    def test_unknown_reference(self, fixtures_dir):
        """Without the poset the setfun cannot be read"""
        with pytest.raises(ValidationError):
            load(fixtures_dir / "yone.psh", Workspace())

    def test_diagram_fills_composites(self):
        """Transitions along composite relations are composed"""
        ws = Workspace()
        loads(CHAIN_DIAGRAM, ws)
        D = ws.get("diagram", "K")
        assert D.act("0", "2").ob("*") == "*"

    def test_duplicate_names(self, fixtures_dir):
        """An entity name can be loaded once per kind"""
        ws = Workspace()
        load(fixtures_dir / "idem.fc", ws)
        with pytest.raises(ValidationError, match="already loaded"):
            load(fixtures_dir / "idem.fc", ws)

    def test_missing_file(self, tmp_path):
        """Unreadable paths are file errors"""
        with pytest.raises(FileOperationException):
            load(tmp_path / "absent.fc")


class TestErrors:
    def test_position_of_missing_colon(self, fixtures_dir):
        """The column points past the end of the line"""
        with pytest.raises(ParseError) as err:
            load(fixtures_dir / "bad_mor.fc")
        assert (err.value.line, err.value.column) == (3, 13)
        assert err.value.message.startswith("line 3, column 13:")

    def test_variance_keyword(self):
        """Only presheaf and covariant are variances"""
        text = "poset A\nelements: 0\nsetfun X on A sideways\nat 0: x\n"
        with pytest.raises(ParseError) as err:
            loads(text)
        assert (err.value.line, err.value.column) == (3, 15)

    def test_body_before_header(self):
        """A file must open with a section header"""
        with pytest.raises(ParseError) as err:
            loads("objects: x\n")
        assert err.value.line == 1

    def test_invalid_category_is_a_validation_error(self, fixtures_dir):
        """A non-associative table parses but does not validate"""
        with pytest.raises(ValidationError, match="category Bad"):
            load(fixtures_dir / "bad_assoc.fc")


class TestSerializing:
    @pytest.mark.parametrize("name", sorted(standard_categories()))
    def test_category_round_trip(self, name):
        """Dumped categories read back equal"""
        C = standard_categories()[name]
        (_, _, back), = loads(dumps(C))
        assert back == C

    def test_poset_dump(self):
        """Only Hasse edges are written"""
        assert dumps(chain(2)) == "poset [2]\nelements: 0 1 2\nle: 0<=1 1<=2\n"

    def test_workspace_dump_reloads(self, fixtures_dir):
        """A dumped workspace is a valid file"""
        ws = Workspace()
        for name in ("arrow.pos", "two.psh", "const.diag"):
            load(fixtures_dir / name, ws)
        again = Workspace()
        loads(dump_workspace(ws), again)
        assert again.get("setfun", "two") == ws.get("setfun", "two")

    def test_dot(self):
        """Posets draw their Hasse diagram, categories their arrows"""
        dot = to_dot(span_poset())
        assert "rankdir=BT;" in dot
        assert '"o" -> "a";' in dot
        C = build_category("E", ["x"], [("e", "x", "x")], {("e", "e"): "e"})
        assert '"x" -> "x" [label="e"];' in to_dot(C)
