"""The central cartography model and its canonical JSON form.

A model is an ordered list of typed elements. The on-disk format
(`*.carto.json`) is canonical: elements sorted by (type, id), fixed key
order, sorted metadata keys, two-space indent, LF line endings. Serializing
any structurally equal model therefore yields byte-identical text, which the
golden tests and the pipeline's determinism guarantees rely on.

Models are treated as immutable after construction; every operation in this
package returns new models rather than mutating inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import ModelError, TextParseError

GEO = "GeoLocator"
PLAIN = "Plain"

Scalar = str | int | float | bool


@dataclass
class Locator:
    """Position facet: either WGS84 coordinates or an opaque string."""

    kind: str  # GEO or PLAIN
    lat: float | None = None
    lon: float | None = None
    value: str | None = None

    @staticmethod
    def geo(lat: float, lon: float) -> "Locator":
        return Locator(kind=GEO, lat=lat, lon=lon)

    @staticmethod
    def plain(value: str) -> "Locator":
        return Locator(kind=PLAIN, value=value)


@dataclass
class Element:
    id: str
    type: str
    name: str = ""
    metadata: dict[str, Scalar] = field(default_factory=dict)
    locator: Locator | None = None
    source: str | None = None
    target: str | None = None
    members: list[str] = field(default_factory=list)
    container: str | None = None


@dataclass
class CartographyModel:
    schema_name: str = ""
    elements: list[Element] = field(default_factory=list)

    def by_id(self) -> dict[str, Element]:
        return {e.id: e for e in self.elements}

    def __len__(self) -> int:
        return len(self.elements)


def canonical_order(elements: list[Element]) -> list[Element]:
    return sorted(elements, key=lambda e: (e.type, e.id))


def _is_scalar(v: Any) -> bool:
    return isinstance(v, (str, int, float, bool))


def _reject_nonfinite(token: str) -> None:
    raise ValueError(f"non-finite number {token!r} not allowed")


def _parse_locator(raw: Any, eid: str) -> Locator:
    if not isinstance(raw, dict):
        raise ModelError(f"element '{eid}': locator must be an object")
    kind = raw.get("kind")
    if kind == GEO:
        extra = set(raw) - {"kind", "lat", "lon"}
        if extra:
            raise ModelError(f"element '{eid}': unknown locator keys {sorted(extra)}")
        lat, lon = raw.get("lat"), raw.get("lon")
        for label, v in (("lat", lat), ("lon", lon)):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ModelError(f"element '{eid}': GeoLocator '{label}' must be a number")
        return Locator.geo(lat, lon)
    if kind == PLAIN:
        extra = set(raw) - {"kind", "value"}
        if extra:
            raise ModelError(f"element '{eid}': unknown locator keys {sorted(extra)}")
        value = raw.get("value")
        if not isinstance(value, str):
            raise ModelError(f"element '{eid}': Plain locator 'value' must be a string")
        return Locator.plain(value)
    raise ModelError(f"element '{eid}': unknown locator kind {kind!r}")


_ELEMENT_KEYS = {"id", "type", "name", "metadata", "locator", "source", "target", "members", "container"}


def _parse_element(raw: Any, index: int) -> Element:
    if not isinstance(raw, dict):
        raise ModelError(f"element #{index} must be an object")
    eid = raw.get("id")
    if not isinstance(eid, str) or not eid:
        raise ModelError(f"element #{index} missing non-empty string 'id'")
    unknown = set(raw) - _ELEMENT_KEYS
    if unknown:
        raise ModelError(f"element '{eid}': unknown keys {sorted(unknown)}")
    etype = raw.get("type")
    if not isinstance(etype, str) or not etype:
        raise ModelError(f"element '{eid}' missing non-empty string 'type'")
    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ModelError(f"element '{eid}': 'name' must be a string")

    metadata: dict[str, Scalar] = {}
    for k, v in (raw.get("metadata") or {}).items():
        if not _is_scalar(v):
            raise ModelError(f"element '{eid}': metadata '{k}' must be a scalar")
        metadata[k] = v

    locator = _parse_locator(raw["locator"], eid) if raw.get("locator") is not None else None

    for ref in ("source", "target", "container"):
        if ref in raw and raw[ref] is not None and not isinstance(raw[ref], str):
            raise ModelError(f"element '{eid}': '{ref}' must be an element id string")
    members = raw.get("members") or []
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise ModelError(f"element '{eid}': 'members' must be a list of element ids")

    return Element(
        id=eid,
        type=etype,
        name=name,
        metadata=metadata,
        locator=locator,
        source=raw.get("source"),
        target=raw.get("target"),
        members=list(members),
        container=raw.get("container"),
    )


def parse_model(text: str) -> CartographyModel:
    """Parse a `*.carto.json` document; structural errors only (see validate)."""
    try:
        doc = json.loads(text, parse_constant=_reject_nonfinite)
    except json.JSONDecodeError as e:
        raise TextParseError(f"model is not valid JSON: {e.msg}", e.lineno, e.colno) from e
    except ValueError as e:
        raise TextParseError(str(e)) from e
    if not isinstance(doc, dict):
        raise TextParseError("model document must be a JSON object")
    schema_name = doc.get("schemaName", "")
    if not isinstance(schema_name, str):
        raise ModelError("'schemaName' must be a string")
    raw_elements = doc.get("elements")
    if not isinstance(raw_elements, list):
        raise ModelError("model document must have an 'elements' list")

    elements = [_parse_element(raw, i) for i, raw in enumerate(raw_elements)]
    seen: set[str] = set()
    for e in elements:
        if e.id in seen:
            raise ModelError(f"duplicate id '{e.id}'")
        seen.add(e.id)
    return CartographyModel(schema_name=schema_name, elements=elements)


def _locator_obj(loc: Locator) -> dict[str, Any]:
    if loc.kind == GEO:
        return {"kind": GEO, "lat": loc.lat, "lon": loc.lon}
    return {"kind": PLAIN, "value": loc.value}


def _element_obj(e: Element) -> dict[str, Any]:
    obj: dict[str, Any] = {"id": e.id, "type": e.type, "name": e.name}
    if e.metadata:
        obj["metadata"] = {k: e.metadata[k] for k in sorted(e.metadata)}
    if e.locator is not None:
        obj["locator"] = _locator_obj(e.locator)
    if e.source is not None:
        obj["source"] = e.source
    if e.target is not None:
        obj["target"] = e.target
    if e.members:
        obj["members"] = list(e.members)
    if e.container is not None:
        obj["container"] = e.container
    return obj


def serialize_model(model: CartographyModel) -> str:
    """Canonical text for a model; deterministic for structurally equal inputs."""
    doc = {
        "schemaName": model.schema_name,
        "elements": [_element_obj(e) for e in canonical_order(model.elements)],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_model(path: str) -> CartographyModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def save_model(model: CartographyModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_model(model))
