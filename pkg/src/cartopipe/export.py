"""Model-to-text extractors: GraphML, KML, DOT and viewer JSON.

Every exporter sorts elements canonically before emitting, so output bytes
are a function of model content alone, never of element-list order.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET

from .model import CartographyModel, Element, GEO, canonical_order
from .schema import CoreKind, MetamodelSchema, core_kind_of, kind_is

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
KML_NS = "http://www.opengis.net/kml/2.2"

XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>\n'


def _split(model: CartographyModel, schema: MetamodelSchema):
    """Canonical (nodes, edges) partition by core kind."""
    nodes: list[Element] = []
    edges: list[Element] = []
    for e in canonical_order(model.elements):
        kind = core_kind_of(schema, e.type)
        (edges if kind_is(kind, CoreKind.RELATIONSHIP) else nodes).append(e)
    return nodes, edges


def _groups_of(nodes: list[Element], schema: MetamodelSchema) -> dict[str, list[str]]:
    """Member element id -> names of groups holding it, in canonical order."""
    out: dict[str, list[str]] = {}
    for g in nodes:
        if core_kind_of(schema, g.type) is not CoreKind.GROUP:
            continue
        for m in g.members:
            out.setdefault(m, []).append(g.name)
    return out


def _weight(e: Element):
    w = e.metadata.get("weight")
    if isinstance(w, (int, float)) and not isinstance(w, bool):
        return w
    return None


def _finish_xml(root: ET.Element) -> str:
    ET.indent(root, space="  ")
    return XML_DECL + ET.tostring(root, encoding="unicode") + "\n"


def to_graphml(model: CartographyModel, schema: MetamodelSchema) -> str:
    nodes, edges = _split(model, schema)
    groups = _groups_of(nodes, schema)
    by_id = model.by_id()

    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    for key_id, domain, attr_type in (
        ("name", "all", "string"),
        ("type", "all", "string"),
        ("group", "node", "string"),
        ("container", "node", "string"),
        ("weight", "node", "double"),
    ):
        ET.SubElement(root, "key", id=key_id, **{
            "for": domain, "attr.name": key_id, "attr.type": attr_type})
    directed_any = any(
        core_kind_of(schema, e.type) is CoreKind.DIRECTED_RELATIONSHIP for e in edges)
    graph = ET.SubElement(root, "graph", id="G",
                          edgedefault="directed" if directed_any else "undirected")

    def data(parent: ET.Element, key: str, value) -> None:
        d = ET.SubElement(parent, "data", key=key)
        d.text = str(value)

    for e in nodes:
        node = ET.SubElement(graph, "node", id=e.id)
        data(node, "name", e.name)
        data(node, "type", e.type)
        if e.id in groups:
            data(node, "group", ";".join(groups[e.id]))
        if e.container is not None:
            data(node, "container", by_id[e.container].name)
        w = _weight(e)
        if w is not None:
            data(node, "weight", w)
    for e in edges:
        directed = core_kind_of(schema, e.type) is CoreKind.DIRECTED_RELATIONSHIP
        edge = ET.SubElement(graph, "edge", id=e.id, source=e.source or "",
                             target=e.target or "",
                             directed="true" if directed else "false")
        if e.name:
            data(edge, "name", e.name)
        data(edge, "type", e.type)
    return _finish_xml(root)


def to_kml(model: CartographyModel, schema: MetamodelSchema) -> str:
    root = ET.Element("kml", xmlns=KML_NS)
    doc = ET.SubElement(root, "Document")
    for e in canonical_order(model.elements):
        if e.locator is None or e.locator.kind != GEO:
            continue
        pm = ET.SubElement(doc, "Placemark")
        ET.SubElement(pm, "name").text = e.name
        desc_lines = [e.type] + [f"{k}={e.metadata[k]}" for k in sorted(e.metadata)]
        ET.SubElement(pm, "description").text = "\n".join(desc_lines)
        point = ET.SubElement(pm, "Point")
        coords = ET.SubElement(point, "coordinates")
        coords.text = f"{e.locator.lon},{e.locator.lat},0"
    return _finish_xml(root)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(model: CartographyModel, schema: MetamodelSchema) -> str:
    nodes, edges = _split(model, schema)
    lines = ["digraph G {"]
    for e in nodes:
        lines.append(
            f'  "{_dot_escape(e.id)}" [label="{_dot_escape(e.name)}", '
            f'tooltip="{_dot_escape(e.type)}"];'
        )
    for e in edges:
        attrs = []
        if core_kind_of(schema, e.type) is not CoreKind.DIRECTED_RELATIONSHIP:
            attrs.append("dir=none")
        if e.name:
            attrs.append(f'label="{_dot_escape(e.name)}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(
            f'  "{_dot_escape(e.source or "")}" -> "{_dot_escape(e.target or "")}"'
            f"{suffix};"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_view_json(model: CartographyModel, schema: MetamodelSchema) -> str:
    nodes, edges = _split(model, schema)
    groups = _groups_of(nodes, schema)
    out_nodes = []
    for e in nodes:
        obj: dict = {
            "id": e.id,
            "name": e.name,
            "type": e.type,
            "kind": core_kind_of(schema, e.type).value,
        }
        if e.id in groups:
            obj["group"] = ";".join(groups[e.id])
        if e.locator is not None and e.locator.kind == GEO:
            obj["lat"] = e.locator.lat
            obj["lon"] = e.locator.lon
        w = _weight(e)
        if w is not None:
            obj["weight"] = w
        out_nodes.append(obj)
    out_edges = []
    for e in edges:
        out_edges.append({
            "id": e.id,
            "source": e.source,
            "target": e.target,
            "type": e.type,
            "directed": core_kind_of(schema, e.type) is CoreKind.DIRECTED_RELATIONSHIP,
            "name": e.name,
        })
    return json.dumps({"nodes": out_nodes, "edges": out_edges},
                      indent=2, ensure_ascii=False) + "\n"


EXPORTERS = {
    "graphml": to_graphml,
    "kml": to_kml,
    "dot": to_dot,
    "viewjson": to_view_json,
}
