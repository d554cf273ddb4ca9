"""XML and SpreadsheetML injection plus their cartography encodings."""

import random

import pytest

from cartopipe.errors import ModelError, TextParseError
from cartopipe.inject import (
    ATTRIBUTE,
    Cell,
    ELEMENT,
    SPREADSHEET_SCHEMA,
    TEXT,
    XML_SCHEMA,
    XmlNode,
    inject_xml,
    model_to_xml,
    node_count,
    spreadsheet_to_model,
    xml_to_model,
    xml_to_spreadsheet,
)
from cartopipe.model import serialize_model
from cartopipe.validate import validate

from gen import shuffled

SHEET = """\
<Workbook xmlns="urn:schemas-microsoft-com:office:spreadsheet"
          xmlns:ss="urn:schemas-microsoft-com:office:spreadsheet">
  <Worksheet ss:Name="People">
    <Table>
      <Row><Cell><Data ss:Type="String">name</Data></Cell><Cell><Data>age</Data></Cell></Row>
      <Row><Cell><Data>Ada</Data></Cell><Cell><Data>36</Data></Cell></Row>
      <Row><Cell ss:Index="2"><Data>99</Data></Cell></Row>
    </Table>
  </Worksheet>
  <Worksheet><Table><Row><Cell><Data>only</Data></Cell></Row></Table></Worksheet>
</Workbook>
"""


def test_inject_builds_the_expected_tree():
    xml = inject_xml('<a x="1"><b>hi</b><b/></a>')
    a = xml.root
    assert (a.kind, a.name) == (ELEMENT, "a")
    kinds = [(c.kind, c.name, c.value) for c in a.children]
    assert kinds == [(ATTRIBUTE, "x", "1"), (ELEMENT, "b", ""), (ELEMENT, "b", "")]
    b1 = a.children[1]
    assert [(c.kind, c.value) for c in b1.children] == [(TEXT, "hi")]
    assert node_count(xml) == 5


def test_whitespace_comments_and_pis_are_dropped():
    xml = inject_xml("<a>\n  <!-- note -->\n  <?skip me?>\n  <b/>\n</a>")
    assert [c.kind for c in xml.root.children] == [ELEMENT]
    assert node_count(xml) == 2


def test_mixed_content_text_is_preserved():
    xml = inject_xml("<a>one <b/> two</a>")
    got = [(c.kind, c.value) for c in xml.root.children]
    assert got == [(TEXT, "one "), (ELEMENT, ""), (TEXT, " two")]


def test_namespace_prefixes_stay_literal():
    xml = inject_xml('<ss:Workbook xmlns:ss="urn:x"/>')
    assert xml.root.name == "ss:Workbook"
    assert xml.root.children[0].name == "xmlns:ss"


@pytest.mark.parametrize("text,pattern", [
    ("", "empty input"),
    ("   \n ", "empty input"),
    ("<a><b></a>", "malformed XML"),
    ("<a/><b/>", "malformed XML"),
    ('<!DOCTYPE a [<!ENTITY x "y">]><a>&x;</a>', "not allowed"),
])
def test_bad_input_is_rejected_with_position(text, pattern):
    with pytest.raises(TextParseError, match=pattern) as e:
        inject_xml(text)
    if text.strip():
        assert e.value.line >= 1


def test_xml_encoding_uses_positional_ids():
    model = xml_to_model(inject_xml('<a x="1"><b>hi</b><b/></a>'))
    assert validate(model, XML_SCHEMA).ok
    by_id = model.by_id()
    assert by_id["x0"].type == "XmlElement" and by_id["x0"].container is None
    assert by_id["x0.0"].type == "XmlAttribute" and by_id["x0.0"].name == "x"
    assert by_id["x0.0"].metadata == {"pos": 0, "value": "1"}
    assert by_id["x0.1"].container == "x0" and by_id["x0.1"].metadata["pos"] == 1
    assert by_id["x0.1.0"].name == "#text" and by_id["x0.1.0"].metadata["value"] == "hi"
    assert by_id["x0.2"].metadata["pos"] == 2


def test_xml_round_trip_is_exact():
    xml = inject_xml('<a x="1"><b>hi</b><b/><c y="2">t</c></a>')
    assert model_to_xml(xml_to_model(xml)) == xml


def test_reconstruction_orders_by_pos_not_id():
    # twelve children: "x0.10" sorts before "x0.2" as a string, pos must win
    wide = "<a>" + "".join(f"<c{i}/>" for i in range(12)) + "</a>"
    xml = inject_xml(wide)
    model = xml_to_model(xml)
    rebuilt = model_to_xml(shuffled(model, random.Random(3)))
    assert [c.name for c in rebuilt.root.children] == [f"c{i}" for i in range(12)]


def test_reconstruction_requires_exactly_one_root():
    model = xml_to_model(inject_xml("<a/>"))
    headless = shuffled(model, random.Random(1))
    headless.elements = [e for e in headless.elements if e.id != "x0"]
    with pytest.raises(ModelError, match="exactly one root"):
        model_to_xml(headless)


def test_spreadsheet_reading():
    ss = xml_to_spreadsheet(inject_xml(SHEET))
    assert [w.name for w in ss.worksheets] == ["People", "Sheet2"]
    people = ss.worksheets[0]
    assert [[(c.value, c.column_index) for c in row] for row in people.rows] == [
        [("name", 1), ("age", 2)],
        [("Ada", 1), ("36", 2)],
        [("99", 2)],  # ss:Index skipped column 1
    ]
    assert ss.worksheets[1].rows == [[Cell("only", 1)]]


@pytest.mark.parametrize("doc,pattern", [
    ("<NotAWorkbook/>", "not Workbook"),
    ("<Workbook><Worksheet><Table><Row>"
     '<Cell ss:Index="2" xmlns:ss="urn:s"><Data>a</Data></Cell>'
     '<Cell ss:Index="2" xmlns:ss="urn:s"><Data>b</Data></Cell>'
     "</Row></Table></Worksheet></Workbook>", "not increasing"),
    ("<Workbook><Cell/></Workbook>", "Cell outside Row"),
])
def test_bad_spreadsheets_are_rejected(doc, pattern):
    with pytest.raises(ModelError, match=pattern):
        xml_to_spreadsheet(inject_xml(doc))


def test_spreadsheet_encoding_consumes_the_header_row():
    model = spreadsheet_to_model(xml_to_spreadsheet(inject_xml(SHEET)))
    assert validate(model, SPREADSHEET_SCHEMA).ok
    by_id = model.by_id()
    assert by_id["s0"].type == "Worksheet" and by_id["s0"].name == "People"
    ada = by_id["s0.r2"]
    assert ada.container == "s0"
    assert ada.metadata == {"sheet": "People", "row": 2, "c1": "Ada", "c2": "36",
                            "name": "Ada", "age": "36"}
    sparse = by_id["s0.r3"]
    assert sparse.metadata == {"sheet": "People", "row": 3, "c2": "99", "age": "99"}
    # header-only sheet yields no rows
    assert [e.id for e in model.elements if e.container == "s1"] == []


def test_header_keys_never_shadow_bookkeeping_keys():
    doc = ("<Workbook><Worksheet><Table>"
           "<Row><Cell><Data>row</Data></Cell></Row>"
           "<Row><Cell><Data>X</Data></Cell></Row>"
           "</Table></Worksheet></Workbook>")
    model = spreadsheet_to_model(xml_to_spreadsheet(inject_xml(doc)))
    row = model.by_id()["s0.r2"]
    assert row.metadata["row"] == 2  # the ordinal, not the cell value
    assert row.metadata["c1"] == "X"


def test_bundled_workbook_injects_deterministically(fixtures_dir):
    text = (fixtures_dir / "tools" / "tools.xml").read_text(encoding="utf-8")
    model = spreadsheet_to_model(xml_to_spreadsheet(inject_xml(text)))
    assert validate(model, SPREADSHEET_SCHEMA).ok
    sheets = [e for e in model.elements if e.type == "Worksheet"]
    rows = [e for e in model.elements if e.type == "Row"]
    assert len(sheets) == 4
    assert len(rows) == 15  # 4 tools + 3 formats + 4 exports + 4 imports
    again = spreadsheet_to_model(xml_to_spreadsheet(inject_xml(text)))
    assert serialize_model(again) == serialize_model(model)
