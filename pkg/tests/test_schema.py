"""Core-kind resolution, inheritance chains, and schema loading."""

import json
import random

import pytest

from cartopipe.errors import SchemaError, TextParseError
from cartopipe.schema import (
    CORE_KIND_NAMES,
    CoreKind,
    core_kind_of,
    core_schema,
    kind_is,
    load_schema,
    type_conforms,
)

from gen import random_kind_case


def test_core_kind_of_is_reflexive_on_core_kinds():
    schema = core_schema()
    for name, kind in CORE_KIND_NAMES.items():
        assert core_kind_of(schema, name) is kind


def test_directed_relationship_is_a_relationship():
    assert kind_is(CoreKind.DIRECTED_RELATIONSHIP, CoreKind.RELATIONSHIP)
    assert not kind_is(CoreKind.RELATIONSHIP, CoreKind.DIRECTED_RELATIONSHIP)
    for kind in CoreKind:
        assert kind_is(kind, kind)


def test_tools_schema_resolves_to_expected_kinds(tools_schema):
    assert core_kind_of(tools_schema, "Tool") is CoreKind.ENTITY
    assert core_kind_of(tools_schema, "Format") is CoreKind.ENTITY
    assert core_kind_of(tools_schema, "Export") is CoreKind.DIRECTED_RELATIONSHIP
    assert core_kind_of(tools_schema, "Import") is CoreKind.DIRECTED_RELATIONSHIP


def test_multi_step_chain_resolves_through_user_types():
    schema = load_schema(json.dumps({
        "name": "Deep",
        "types": [
            {"name": "Tool", "extends": "Entity"},
            {"name": "Editor", "extends": "Tool"},
            {"name": "TextEditor", "extends": "Editor"},
        ],
    }))
    assert core_kind_of(schema, "TextEditor") is CoreKind.ENTITY
    assert type_conforms(schema, "TextEditor", "Tool")
    assert type_conforms(schema, "TextEditor", "Editor")
    assert not type_conforms(schema, "Tool", "TextEditor")


def test_type_conforms_uses_kind_subsumption_for_core_queries(tools_schema):
    assert type_conforms(tools_schema, "Export", "DirectedRelationship")
    assert type_conforms(tools_schema, "Export", "Relationship")
    assert type_conforms(tools_schema, "Tool", "Entity")
    assert not type_conforms(tools_schema, "Tool", "Relationship")
    assert not type_conforms(tools_schema, "Tool", "Format")


def test_attributes_flatten_over_the_chain():
    schema = load_schema(json.dumps({
        "name": "A",
        "types": [
            {"name": "Base", "extends": "Entity",
             "attributes": [{"name": "weight", "type": "number"}]},
            {"name": "Sub", "extends": "Base",
             "attributes": [{"name": "label", "type": "string"}]},
        ],
    }))
    assert schema.attribute_types("Sub") == {"weight": "number", "label": "string"}
    assert schema.attribute_types("Base") == {"weight": "number"}


def test_duplicate_attribute_in_chain_is_rejected():
    with pytest.raises(SchemaError, match="duplicate attribute"):
        load_schema(json.dumps({
            "name": "A",
            "types": [
                {"name": "Base", "extends": "Entity",
                 "attributes": [{"name": "weight", "type": "number"}]},
                {"name": "Sub", "extends": "Base",
                 "attributes": [{"name": "weight", "type": "string"}]},
            ],
        }))


@pytest.mark.parametrize("types,pattern", [
    ([{"name": "T", "extends": "Entity"}, {"name": "T", "extends": "Entity"}], "duplicate type"),
    ([{"name": "Entity", "extends": "Entity"}], "core kinds"),
    ([{"name": "T", "extends": "Nope"}], "unknown extends"),
    ([{"name": "A", "extends": "B"}, {"name": "B", "extends": "A"}], "cycle"),
    ([{"name": "T", "extends": "Entity",
       "attributes": [{"name": "x", "type": "float"}]}], "illegal type"),
    ([{"name": "", "extends": "Entity"}], "missing 'name'"),
])
def test_malformed_schema_documents_are_rejected(types, pattern):
    with pytest.raises(SchemaError, match=pattern):
        load_schema(json.dumps({"name": "Bad", "types": types}))


def test_schema_json_syntax_error_carries_position():
    with pytest.raises(TextParseError) as e:
        load_schema('{"name": "X", "types": [}')
    assert e.value.line == 1
    assert e.value.column > 1


def test_unknown_type_name_is_an_error():
    with pytest.raises(SchemaError, match="unknown type"):
        core_kind_of(core_schema(), "Mystery")


def test_random_inheritance_chains_match_walk_oracle():
    rng = random.Random(20260814)
    for _ in range(50):
        schema, expected = random_kind_case(rng)
        for tname, kind_name in expected.items():
            assert core_kind_of(schema, tname) is CORE_KIND_NAMES[kind_name]
