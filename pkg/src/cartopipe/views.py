"""View-definition registry and execution.

A view is a registered cartography-to-cartography transformation plus the
exporter its result should feed. `compose_via` is the built-in brute-force
relationship composition that ExtractTools-style transformations are checked
against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CartoError, TextParseError, ViewError
from .export import EXPORTERS
from .model import CartographyModel, Element, canonical_order
from .schema import CoreKind, MetamodelSchema, core_kind_of, kind_is, type_conforms
from .xform import TransformationAst, execute, parse_transformation


@dataclass
class ViewDefinition:
    id: str
    name: str
    transformation_path: str
    exporter: str
    icon_path: str | None = None
    allow_multi: bool = False
    ast: TransformationAst = field(repr=False, default=None)  # type: ignore[assignment]


@dataclass
class ViewRegistry:
    views: list[ViewDefinition] = field(default_factory=list)

    def get(self, view_id: str) -> ViewDefinition:
        for v in self.views:
            if v.id == view_id:
                return v
        raise ViewError(f"unknown view id '{view_id}'")


_REQUIRED = ("id", "name", "transformationPath", "exporter")
_OPTIONAL = ("iconPath", "allowMulti")


def load_view_registry(text: str, base_dir: str | Path = ".") -> ViewRegistry:
    """Parse a registry; transformation files are parsed now, not at run time.

    Relative transformation paths resolve against `base_dir`.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TextParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict) or set(raw) != {"views"} or not isinstance(raw["views"], list):
        raise ViewError('registry must be {"views": [...]}')
    registry = ViewRegistry()
    seen: set[str] = set()
    for i, entry in enumerate(raw["views"]):
        if not isinstance(entry, dict):
            raise ViewError(f"views[{i}] is not an object")
        unknown = set(entry) - set(_REQUIRED) - set(_OPTIONAL)
        if unknown:
            raise ViewError(f"views[{i}]: unknown keys {sorted(unknown)}")
        missing = [k for k in _REQUIRED if k not in entry]
        if missing:
            raise ViewError(f"views[{i}]: missing keys {missing}")
        vid = entry["id"]
        if vid in seen:
            raise ViewError(f"duplicate view id '{vid}'")
        seen.add(vid)
        if entry["exporter"] not in EXPORTERS:
            raise ViewError(f"view '{vid}': unknown exporter '{entry['exporter']}'")
        path = Path(base_dir) / entry["transformationPath"]
        if not path.is_file():
            raise ViewError(f"view '{vid}': missing transformation file '{path}'")
        try:
            ast = parse_transformation(path.read_text(encoding="utf-8"))
        except CartoError as exc:
            raise ViewError(f"view '{vid}': {exc}") from None
        registry.views.append(ViewDefinition(
            id=vid, name=entry["name"], transformation_path=str(path),
            exporter=entry["exporter"], icon_path=entry.get("iconPath"),
            allow_multi=bool(entry.get("allowMulti", False)), ast=ast,
        ))
    return registry


def load_view_registry_file(path: str | Path) -> ViewRegistry:
    p = Path(path)
    return load_view_registry(p.read_text(encoding="utf-8"), p.parent)


def _dedup_relationships(model: CartographyModel,
                         schema: MetamodelSchema) -> CartographyModel:
    """Collapse relationships sharing (type, source, target), keeping the
    first in canonical order."""
    seen: set[tuple[str, str | None, str | None]] = set()
    kept: list[Element] = []
    for e in canonical_order(model.elements):
        if kind_is(core_kind_of(schema, e.type), CoreKind.RELATIONSHIP):
            sig = (e.type, e.source, e.target)
            if sig in seen:
                continue
            seen.add(sig)
        kept.append(e)
    return CartographyModel(schema_name=model.schema_name, elements=kept)


def run_view(
    registry: ViewRegistry,
    view_id: str,
    central: CartographyModel,
    schema: MetamodelSchema,
    strict: bool = True,
    warnings_out: list[str] | None = None,
) -> tuple[CartographyModel, str]:
    """Execute a registered view; returns (result model, exporter id).

    View transformations must stay within the central schema, so the result
    conforms to the same metamodel as the input.
    """
    vd = registry.get(view_id)
    ast = vd.ast
    if ast.source_schema != schema.name or ast.target_schema != schema.name:
        raise ViewError(
            f"view '{view_id}': transformation maps {ast.source_schema} -> "
            f"{ast.target_schema}, expected {schema.name} -> {schema.name}"
        )
    try:
        result = execute(ast, central, (schema, schema), strict=strict,
                         warnings_out=warnings_out)
    except CartoError as exc:
        raise ViewError(f"view '{view_id}': {exc}") from None
    if not vd.allow_multi:
        result = _dedup_relationships(result, schema)
    return result, vd.exporter


def compose_via(
    model: CartographyModel,
    schema: MetamodelSchema,
    via_type: str,
    in_rel_type: str,
    out_rel_type: str,
    link_type: str,
    allow_multi: bool = False,
) -> CartographyModel:
    """Replace via elements and their relationships with direct links.

    For each via element, one link per (incoming in_rel, outgoing out_rel)
    pair: link source = in_rel.source, link target = out_rel.target. This is
    the plain double loop, kept dumb on purpose; it is the oracle the DSL
    version is tested against. Duplicate (source, target) links collapse
    unless allow_multi.
    """
    if core_kind_of(schema, via_type) is not CoreKind.ENTITY:
        raise ViewError(f"via type '{via_type}' is not Entity-kind")
    for t in (in_rel_type, out_rel_type, link_type):
        if core_kind_of(schema, t) is not CoreKind.DIRECTED_RELATIONSHIP:
            raise ViewError(f"type '{t}' is not DirectedRelationship-kind")

    ordered = canonical_order(model.elements)
    vias = [e for e in ordered if type_conforms(schema, e.type, via_type)]
    via_ids = {e.id for e in vias}
    rels = [e for e in ordered
            if kind_is(core_kind_of(schema, e.type), CoreKind.RELATIONSHIP)]
    incident = {r.id for r in rels if r.source in via_ids or r.target in via_ids}

    kept: list[Element] = []
    for e in ordered:
        if e.id in via_ids or e.id in incident:
            continue
        members = [m for m in e.members if m not in via_ids]
        container = None if e.container in via_ids else e.container
        kept.append(Element(
            id=e.id, type=e.type, name=e.name, metadata=dict(e.metadata),
            locator=e.locator, source=e.source, target=e.target,
            members=members, container=container,
        ))

    links: list[Element] = []
    seen_pairs: set[tuple[str, str]] = set()
    for v in vias:
        ins = [r for r in rels
               if type_conforms(schema, r.type, in_rel_type) and r.target == v.id]
        outs = [r for r in rels
                if type_conforms(schema, r.type, out_rel_type) and r.source == v.id]
        for r_in in ins:
            for r_out in outs:
                pair = (r_in.source or "", r_out.target or "")
                if not allow_multi:
                    if pair in seen_pairs:
                        continue
                    seen_pairs.add(pair)
                links.append(Element(
                    id=f"{link_type}/{r_in.id}/{r_out.id}", type=link_type,
                    name=v.name, source=r_in.source, target=r_out.target,
                ))
    return CartographyModel(schema_name=model.schema_name,
                            elements=canonical_order(kept + links))
