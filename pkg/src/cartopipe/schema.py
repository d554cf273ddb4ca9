"""Cartography metamodel: the five core kinds and user schema extensions.

A schema declares domain types that inherit (directly or transitively) from
one of the five core kinds. Visualization code only ever needs the core kind
of an element, which `core_kind_of` resolves reflexively by walking the
inheritance chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import SchemaError, TextParseError

ATTRIBUTE_TYPES = ("string", "number", "boolean")


class CoreKind(Enum):
    ENTITY = "Entity"
    RELATIONSHIP = "Relationship"
    DIRECTED_RELATIONSHIP = "DirectedRelationship"
    GROUP = "Group"
    CONTAINER = "Container"


CORE_KIND_NAMES = {k.value: k for k in CoreKind}

RELATIONSHIP_KINDS = (CoreKind.RELATIONSHIP, CoreKind.DIRECTED_RELATIONSHIP)


def kind_is(kind: CoreKind, query: CoreKind) -> bool:
    """Kind-level subsumption: DirectedRelationship counts as a Relationship."""
    if kind is query:
        return True
    return kind is CoreKind.DIRECTED_RELATIONSHIP and query is CoreKind.RELATIONSHIP


@dataclass
class TypeDef:
    name: str
    extends: str
    attributes: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class MetamodelSchema:
    """A named set of TypeDefs rooted in the core kinds.

    The five core kind names are implicitly declared; `types` holds only the
    user extension. Construct via `load_schema` (or `core_schema`), which
    checks all invariants and precomputes kind/attribute lookups.
    """

    name: str
    types: list[TypeDef] = field(default_factory=list)
    _kinds: dict[str, CoreKind] = field(default_factory=dict, repr=False, compare=False)
    _attrs: dict[str, dict[str, str]] = field(default_factory=dict, repr=False, compare=False)
    _parents: dict[str, str] = field(default_factory=dict, repr=False, compare=False)

    def has_type(self, type_name: str) -> bool:
        return type_name in self._kinds or type_name in CORE_KIND_NAMES

    def attribute_types(self, type_name: str) -> dict[str, str]:
        """Declared attribute name -> scalar type, flattened over the chain."""
        return self._attrs.get(type_name, {})

    def type_names(self) -> list[str]:
        return [t.name for t in self.types]


def core_schema(name: str = "Core") -> MetamodelSchema:
    """The core metamodel with no user types."""
    return MetamodelSchema(name=name)


def _resolve_chain(defs: dict[str, TypeDef], name: str) -> tuple[CoreKind, list[str]]:
    """Walk the extends chain to a core kind; returns (kind, chain incl. name)."""
    chain = []
    seen = set()
    cur = name
    while cur not in CORE_KIND_NAMES:
        if cur in seen:
            raise SchemaError(f"inheritance cycle involving type '{cur}'")
        seen.add(cur)
        td = defs.get(cur)
        if td is None:
            raise SchemaError(f"unknown extends target '{cur}'")
        chain.append(cur)
        cur = td.extends
    return CORE_KIND_NAMES[cur], chain


def load_schema(text: str) -> MetamodelSchema:
    """Parse and check a schema document (the `*.cartoschema.json` format)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise TextParseError(f"schema is not valid JSON: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(doc, dict):
        raise TextParseError("schema document must be a JSON object")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("schema 'name' must be a string")
    raw_types = doc.get("types", [])
    if not isinstance(raw_types, list):
        raise SchemaError("schema 'types' must be a list")

    defs: dict[str, TypeDef] = {}
    order: list[TypeDef] = []
    for raw in raw_types:
        if not isinstance(raw, dict):
            raise SchemaError("each type declaration must be an object")
        tname = raw.get("name")
        extends = raw.get("extends")
        if not isinstance(tname, str) or not tname:
            raise SchemaError("type declaration missing 'name'")
        if tname in CORE_KIND_NAMES:
            raise SchemaError(f"duplicate type name '{tname}' (core kinds may not be redeclared)")
        if tname in defs:
            raise SchemaError(f"duplicate type name '{tname}'")
        if not isinstance(extends, str) or not extends:
            raise SchemaError(f"type '{tname}' missing 'extends'")
        attrs: list[tuple[str, str]] = []
        for rattr in raw.get("attributes", []):
            aname = rattr.get("name") if isinstance(rattr, dict) else None
            atype = rattr.get("type") if isinstance(rattr, dict) else None
            if not isinstance(aname, str) or not aname:
                raise SchemaError(f"type '{tname}': attribute missing 'name'")
            if atype not in ATTRIBUTE_TYPES:
                raise SchemaError(
                    f"type '{tname}': attribute '{aname}' has illegal type {atype!r}"
                )
            attrs.append((aname, atype))
        td = TypeDef(name=tname, extends=extends, attributes=attrs)
        defs[tname] = td
        order.append(td)

    kinds: dict[str, CoreKind] = {}
    flat_attrs: dict[str, dict[str, str]] = {}
    parents: dict[str, str] = {}
    for td in order:
        try:
            kind, chain = _resolve_chain(defs, td.name)
        except SchemaError as e:
            raise SchemaError(f"type '{td.name}': {e}") from None
        kinds[td.name] = kind
        parents[td.name] = td.extends
        merged: dict[str, str] = {}
        for link in reversed(chain):  # base classes first so overrides are detected in order
            for aname, atype in defs[link].attributes:
                if aname in merged:
                    raise SchemaError(
                        f"type '{td.name}': duplicate attribute '{aname}' in inheritance chain"
                    )
                merged[aname] = atype
        flat_attrs[td.name] = merged

    return MetamodelSchema(name=name, types=order, _kinds=kinds, _attrs=flat_attrs, _parents=parents)


def core_kind_of(schema: MetamodelSchema, type_name: str) -> CoreKind:
    """Core kind at the root of the extends chain of `type_name`."""
    if type_name in CORE_KIND_NAMES:
        return CORE_KIND_NAMES[type_name]
    kind = schema._kinds.get(type_name)
    if kind is None:
        raise SchemaError(f"unknown type name '{type_name}' in schema '{schema.name}'")
    return kind


def type_conforms(schema: MetamodelSchema, declared: str, query: str) -> bool:
    """True if `declared` is `query` or a (transitive) subtype of it.

    Core kind queries use kind subsumption, so any relationship type answers
    True for `Relationship` even when declared as a DirectedRelationship
    subtype.
    """
    if not schema.has_type(declared):
        raise SchemaError(f"unknown type name '{declared}' in schema '{schema.name}'")
    if query in CORE_KIND_NAMES:
        return kind_is(core_kind_of(schema, declared), CORE_KIND_NAMES[query])
    cur = declared
    while cur not in CORE_KIND_NAMES:
        if cur == query:
            return True
        cur = schema._parents[cur]
    return False
