import pytest
from hypothesis import given, settings

from strategies import documents
from tesalg.core import Coord, Event, ev
from tesalg.specio.document import ComponentDecl, DivideQuery, SpecError
from tesalg.specio.parser import KEYWORDS, parse, parse_event
from tesalg.specio.serialize import document_text, tes_dsl, tes_rows

SMALL = """
# comment
component A { interface {a, b} horizon 2 tes { (1: a b) } }
component B { interface {a} horizon 2 tes { (1: a) } }
universe U { interface {b} grid 1 .. 2 step 1 maxobs 1 nosilent }
divide A by B under sync over U choose theorem1-lower-bound
"""


def errors(text):
    with pytest.raises(SpecError) as info:
        parse(text)
    return info.value.diagnostics


class TestParse:
    def test_small_document(self):
        doc = parse(SMALL)
        a = doc.find("component", "A")
        assert isinstance(a, ComponentDecl) and a.component.interface == {ev("a"), ev("b")}
        (q,) = doc.queries
        assert isinstance(q, DivideQuery) and q.side == "right" and q.universes == ("U",)
        assert doc.find("universe", "U").silent is False

    def test_locations(self):
        doc = parse(SMALL)
        assert doc.find("component", "B").loc.line == 4
        assert doc.queries[0].loc.line == 6

    def test_events(self):
        assert parse_event("N(1,p)") == ev("N", 1, "p")
        assert parse_event("(7/2;1/4)_2") == Event.position(2, "7/2", "1/4")
        assert parse_event("read(1,(3;0))") == Event("read", (1, Coord(3, 0)))
        assert parse_event("0") == ev("0")

    def test_decimal_stamps_are_exact(self):
        doc = parse("component A { interface {a} horizon 1 tes { (0.5: a) } }")
        (s,) = doc.find("component", "A").component.behavior
        assert s.stamps == (pytest.approx(0.5),) and str(s.stamps[0]) == "1/2"

    def test_row_rendering(self):
        doc = parse("component A { interface {a} horizon 2 tes { (1: a), (3/2: ) } }")
        (s,) = doc.find("component", "A").component.behavior
        assert tes_rows(s) == ["1: {a}", "3/2: {}"]
        assert tes_dsl(s) == "tes { (1: a), (3/2:) }"


class TestDiagnostics:
    def test_non_increasing_stamps(self):
        (d,) = errors("component A { interface {a} horizon 3 tes { (2: a), (1: a) } }")
        assert d.location.column == 39 and "strictly increase" in d.message

    def test_event_outside_interface(self):
        (d,) = errors("component A { interface {a} horizon 3 tes { (1: b) } }")
        assert "A" in d.message

    def test_undeclared_name(self):
        (d,) = errors("component A { interface {a} horizon 1 }\nproduct A B under sync")
        assert d.location.line == 2 and "'B'" in d.message and d.hint == "declare component B before use"

    def test_undeclared_signature(self):
        (d,) = errors("component A { interface {a} horizon 1 }\nproduct A A under mine")
        assert "signature" in d.message

    def test_duplicate_name(self):
        (d,) = errors("component A { interface {a} horizon 1 }\ncomponent A { interface {a} horizon 1 }")
        assert "duplicate" in d.message and d.location.line == 2

    def test_horizon_mismatch(self):
        (d,) = errors("component A { interface {a} horizon 1 }\ncomponent B { interface {a} horizon 2 }\nproduct A B under sync")
        assert "horizon mismatch" in d.message

    def test_universe_beyond_horizon(self):
        diags = errors(SMALL.replace("grid 1 .. 2", "grid 1 .. 5"))
        assert any("beyond horizon" in d.message for d in diags)

    def test_unknown_choice(self):
        (d,) = errors(SMALL.replace("theorem1-lower-bound", "smallest"))
        assert "smallest" in d.message and "theorem1-lower-bound" in d.hint

    def test_unknown_scenario(self):
        (d,) = errors("scenario shuffle")
        assert "shuffle" in d.message

    def test_syntax_error_located(self):
        (d,) = errors("component A { interface {a} horizon 1\n  tes { (1 a) } }")
        assert d.location.line == 2 and d.message.startswith("syntax error")

    def test_keyword_as_name(self):
        (d,) = errors("component tes { interface {a} horizon 1 }")
        assert "reserved" in d.message

    def test_float_horizon_is_exact(self):
        doc = parse("component A { interface {a} horizon 0.1 }")
        assert str(doc.find("component", "A").horizon) == "1/10"


@settings(max_examples=500)
@given(documents(KEYWORDS))
def test_round_trip(doc):
    text = document_text(doc)
    again = parse(text)
    assert again == doc
    assert document_text(again) == text


@pytest.mark.parametrize("name", ["derived_division", "table1", "table2", "table3", "table4", "table5"])
def test_shipped_documents_are_fixpoints(root, name):
    doc = parse((root / "specs" / f"{name}.tes").read_text())
    assert parse(document_text(doc)) == doc
