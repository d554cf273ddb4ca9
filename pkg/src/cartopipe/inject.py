"""Text-to-model injectors: raw XML and SpreadsheetML (Excel 2003 XML).

Injection is the front end of the discovery chain: the raw file becomes a
generic XML tree, optionally converted to a spreadsheet structure, and both
have cartography-model encodings (schemas "Xml" and "Spreadsheet") so the
rest of the pipeline only ever moves `.carto.json` artifacts around.
"""

from __future__ import annotations

import json
import xml.parsers.expat
from dataclasses import dataclass, field

from .errors import ModelError, TextParseError
from .model import CartographyModel, Element, canonical_order
from .schema import MetamodelSchema, load_schema

ELEMENT = "element"
ATTRIBUTE = "attribute"
TEXT = "text"


@dataclass
class XmlNode:
    kind: str  # ELEMENT, ATTRIBUTE or TEXT
    name: str = ""
    value: str = ""
    children: list["XmlNode"] = field(default_factory=list)


@dataclass
class XmlModel:
    root: XmlNode


@dataclass
class Cell:
    value: str
    column_index: int  # 1-based, strictly increasing within a row


@dataclass
class Worksheet:
    name: str
    rows: list[list[Cell]] = field(default_factory=list)


@dataclass
class SpreadsheetModel:
    worksheets: list[Worksheet] = field(default_factory=list)


def inject_xml(text: str) -> XmlModel:
    """Parse raw XML into a structure-preserving tree.

    Namespace prefixes stay literal; comments, processing instructions and
    whitespace-only text are dropped. DTDs (and with them entity definitions)
    are rejected so output never depends on expansion.
    """
    if not text or not text.strip():
        raise TextParseError("empty input")
    parser = xml.parsers.expat.ParserCreate()
    parser.ordered_attributes = True
    parser.buffer_text = True

    root: list[XmlNode] = []
    stack: list[XmlNode] = []
    pending_text: list[str] = []

    def flush_text() -> None:
        if not pending_text:
            return
        chunk = "".join(pending_text)
        pending_text.clear()
        if chunk.strip() and stack:
            stack[-1].children.append(XmlNode(kind=TEXT, value=chunk))

    def start(name: str, attrs: list[str]) -> None:
        flush_text()
        node = XmlNode(kind=ELEMENT, name=name)
        for i in range(0, len(attrs), 2):
            node.children.append(XmlNode(kind=ATTRIBUTE, name=attrs[i], value=attrs[i + 1]))
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(name: str) -> None:
        flush_text()
        stack.pop()

    def chars(data: str) -> None:
        pending_text.append(data)

    def doctype(*args) -> None:
        raise TextParseError(
            "document type declarations are not allowed",
            parser.CurrentLineNumber,
            parser.CurrentColumnNumber + 1,
        )

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    parser.StartDoctypeDeclHandler = doctype
    try:
        parser.Parse(text, True)
    except xml.parsers.expat.ExpatError as exc:
        message = xml.parsers.expat.errors.messages[exc.code]
        raise TextParseError(f"malformed XML: {message}", exc.lineno, exc.offset + 1) from None
    return XmlModel(root=root[0])


def _count_nodes(node: XmlNode) -> int:
    return 1 + sum(_count_nodes(c) for c in node.children)


def node_count(xml: XmlModel) -> int:
    """Total node count (elements, attributes, text)."""
    return _count_nodes(xml.root)


# Cartography encodings. The ids are positional paths ("x0.3" = fourth child
# of the root) but reconstruction relies on container plus the "pos" ordinal,
# not on id lexicography, which breaks past ten children.

XML_SCHEMA: MetamodelSchema = load_schema(json.dumps({
    "name": "Xml",
    "types": [
        {"name": "XmlElement", "extends": "Container",
         "attributes": [{"name": "pos", "type": "number"}]},
        {"name": "XmlAttribute", "extends": "Entity",
         "attributes": [{"name": "pos", "type": "number"},
                        {"name": "value", "type": "string"}]},
        {"name": "XmlText", "extends": "Entity",
         "attributes": [{"name": "pos", "type": "number"},
                        {"name": "value", "type": "string"}]},
    ],
}))

SPREADSHEET_SCHEMA: MetamodelSchema = load_schema(json.dumps({
    "name": "Spreadsheet",
    "types": [
        {"name": "Worksheet", "extends": "Container"},
        {"name": "Row", "extends": "Entity",
         "attributes": [{"name": "sheet", "type": "string"},
                        {"name": "row", "type": "number"}]},
    ],
}))


def xml_to_model(xml: XmlModel) -> CartographyModel:
    """Encode the XML tree as a cartography model under the "Xml" schema."""
    elements: list[Element] = []

    def walk(node: XmlNode, eid: str, pos: int, parent: str | None) -> None:
        if node.kind == ELEMENT:
            elements.append(Element(
                id=eid, type="XmlElement", name=node.name,
                metadata={"pos": pos}, container=parent,
            ))
            for k, child in enumerate(node.children):
                walk(child, f"{eid}.{k}", k, eid)
        elif node.kind == ATTRIBUTE:
            elements.append(Element(
                id=eid, type="XmlAttribute", name=node.name,
                metadata={"pos": pos, "value": node.value}, container=parent,
            ))
        else:
            elements.append(Element(
                id=eid, type="XmlText", name="#text",
                metadata={"pos": pos, "value": node.value}, container=parent,
            ))

    walk(xml.root, "x0", 0, None)
    return CartographyModel(schema_name="Xml", elements=canonical_order(elements))


def model_to_xml(model: CartographyModel) -> XmlModel:
    """Rebuild the XML tree from its cartography encoding."""
    roots = [e for e in model.elements if e.type == "XmlElement" and e.container is None]
    if len(roots) != 1:
        raise ModelError(f"expected exactly one root XmlElement, found {len(roots)}")
    kids: dict[str, list[Element]] = {}
    for e in model.elements:
        if e.container is not None:
            kids.setdefault(e.container, []).append(e)

    def build(e: Element) -> XmlNode:
        if e.type == "XmlAttribute":
            return XmlNode(kind=ATTRIBUTE, name=e.name, value=str(e.metadata.get("value", "")))
        if e.type == "XmlText":
            return XmlNode(kind=TEXT, value=str(e.metadata.get("value", "")))
        node = XmlNode(kind=ELEMENT, name=e.name)
        ordered = sorted(kids.get(e.id, []), key=lambda c: c.metadata.get("pos", 0))
        node.children = [build(c) for c in ordered]
        return node

    return XmlModel(root=build(roots[0]))


def _local(name: str) -> str:
    return name.rsplit(":", 1)[-1]


def _attr(node: XmlNode, local_name: str) -> str | None:
    for c in node.children:
        if c.kind == ATTRIBUTE and _local(c.name) == local_name:
            return c.value
    return None


def _child_elements(node: XmlNode, local_name: str | None = None) -> list[XmlNode]:
    out = []
    for c in node.children:
        if c.kind == ELEMENT and (local_name is None or _local(c.name) == local_name):
            out.append(c)
    return out


def _text_of(node: XmlNode) -> str:
    return "".join(c.value for c in node.children if c.kind == TEXT)


def xml_to_spreadsheet(xml: XmlModel) -> SpreadsheetModel:
    """Interpret a SpreadsheetML tree: Workbook/Worksheet/Table/Row/Cell/Data.

    Element names match on the local part, so any namespace prefix works.
    `ss:Index` gaps are honored; a cell without it lands one past the last.
    """
    if _local(xml.root.name) != "Workbook":
        raise ModelError(f"root is not Workbook (found '{xml.root.name}')")
    _reject_stray_cells(xml.root, parent_local="")
    sheets: list[Worksheet] = []
    for si, ws in enumerate(_child_elements(xml.root, "Worksheet")):
        name = _attr(ws, "Name") or f"Sheet{si + 1}"
        sheet = Worksheet(name=name)
        for table in _child_elements(ws, "Table"):
            for row_node in _child_elements(table, "Row"):
                row: list[Cell] = []
                next_col = 1
                for cell_node in _child_elements(row_node, "Cell"):
                    idx_text = _attr(cell_node, "Index")
                    col = int(idx_text) if idx_text else next_col
                    if row and col <= row[-1].column_index:
                        raise ModelError(
                            f"cell index {col} not increasing in sheet '{name}'"
                        )
                    datas = _child_elements(cell_node, "Data")
                    value = _text_of(datas[0]) if datas else ""
                    row.append(Cell(value=value, column_index=col))
                    next_col = col + 1
                sheet.rows.append(row)
        sheets.append(sheet)
    return SpreadsheetModel(worksheets=sheets)


def _reject_stray_cells(node: XmlNode, parent_local: str) -> None:
    local = _local(node.name)
    if local == "Cell" and parent_local != "Row":
        raise ModelError("Cell outside Row")
    for c in node.children:
        if c.kind == ELEMENT:
            _reject_stray_cells(c, local)


def spreadsheet_to_model(ss: SpreadsheetModel) -> CartographyModel:
    """Encode a spreadsheet under the "Spreadsheet" schema.

    The first row of each worksheet is treated as a header and consumed: its
    cell values become metadata keys on the data rows, alongside the raw
    "c<column>" keys and the "sheet"/"row" bookkeeping pair. Header-derived
    keys never overwrite an already-set key.
    """
    elements: list[Element] = []
    for si, ws in enumerate(ss.worksheets):
        sheet_id = f"s{si}"
        elements.append(Element(id=sheet_id, type="Worksheet", name=ws.name))
        if not ws.rows:
            continue
        header = {c.column_index: c.value for c in ws.rows[0] if c.value}
        for ri, row in enumerate(ws.rows[1:], start=2):
            meta: dict = {"sheet": ws.name, "row": ri}
            for cell in row:
                meta[f"c{cell.column_index}"] = cell.value
            for cell in row:
                key = header.get(cell.column_index)
                if key and key not in meta:
                    meta[key] = cell.value
            elements.append(Element(
                id=f"{sheet_id}.r{ri}", type="Row", name=f"{ws.name} r{ri}",
                metadata=meta, container=sheet_id,
            ))
    return CartographyModel(schema_name="Spreadsheet", elements=canonical_order(elements))
