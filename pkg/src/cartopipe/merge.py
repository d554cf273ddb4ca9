"""Merging of discovery sub-process outputs into one central model.

Non-relationship elements with the same identity key (type, name) are
unified globally, so merging is idempotent: feeding the same model twice
yields the model once. Relationships are re-pointed through the unification
and deduplicated on (type, source, target, name).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MergeError
from .model import CartographyModel, Element, canonical_order
from .schema import CoreKind, MetamodelSchema, core_kind_of, kind_is


@dataclass
class MergeResult:
    model: CartographyModel
    warnings: list[str] = field(default_factory=list)


def _locators_equal(a, b) -> bool:
    return (a.kind, a.lat, a.lon, a.value) == (b.kind, b.lat, b.lon, b.value)


def merge(models: list[CartographyModel], schema: MetamodelSchema) -> MergeResult:
    """Union models under the identity key (type, name); canonical output order.

    Identity applies to non-relationship elements with a non-empty name.
    Metadata maps are unioned with later models winning on conflicting keys
    (warning recorded); the first occurrence's locator is kept, and a locator
    that differs from an already-set one is a hard error naming both models.
    """
    warnings: list[str] = []
    unified: dict[tuple[str, str], Element] = {}  # identity key -> output element
    origin: dict[tuple[str, str], int] = {}  # identity key -> model index of first occurrence
    out: list[Element] = []
    by_out_id: dict[str, Element] = {}
    # per input model: old id -> output id
    remaps: list[dict[str, str]] = []

    def fresh_id(want: str) -> str:
        if want not in by_out_id and want not in taken_rel_ids:
            return want
        k = 2
        while f"{want}~{k}" in by_out_id or f"{want}~{k}" in taken_rel_ids:
            k += 1
        return f"{want}~{k}"

    taken_rel_ids: set[str] = set()

    # pass 1: non-relationship elements, unified by identity key;
    # members/container are filled in pass 2 once the remap is complete
    for mi, m in enumerate(models):
        remap: dict[str, str] = {}
        remaps.append(remap)
        for e in m.elements:
            kind = core_kind_of(schema, e.type)
            if kind_is(kind, CoreKind.RELATIONSHIP):
                continue
            key = (e.type, e.name) if e.name else None
            if key is not None and key in unified:
                u = unified[key]
                remap[e.id] = u.id
                for mk, mv in e.metadata.items():
                    if mk in u.metadata and u.metadata[mk] != mv:
                        warnings.append(
                            f"{e.type} '{e.name}': metadata '{mk}' conflict, "
                            f"models[{mi}] overrides models[{origin[key]}]"
                        )
                    u.metadata[mk] = mv
                if e.locator is not None:
                    if u.locator is None:
                        u.locator = e.locator
                    elif not _locators_equal(u.locator, e.locator):
                        raise MergeError(
                            f"{e.type} '{e.name}': conflicting locators in "
                            f"models[{origin[key]}] and models[{mi}]"
                        )
                continue
            new = Element(
                id=fresh_id(e.id),
                type=e.type,
                name=e.name,
                metadata=dict(e.metadata),
                locator=e.locator,
            )
            if new.id != e.id:
                warnings.append(f"id '{e.id}' from models[{mi}] renamed to '{new.id}'")
            by_out_id[new.id] = new
            remap[e.id] = new.id
            out.append(new)
            if key is not None:
                unified[key] = new
                origin[key] = mi

    # pass 2: member and container references through the remap
    for mi, m in enumerate(models):
        remap = remaps[mi]
        for e in m.elements:
            kind = core_kind_of(schema, e.type)
            if kind_is(kind, CoreKind.RELATIONSHIP):
                continue
            u = by_out_id[remap[e.id]]
            for x in e.members:
                mapped = remap.get(x, x)
                if mapped not in u.members:
                    u.members.append(mapped)
            if e.container is not None:
                mapped = remap.get(e.container, e.container)
                if u.container is None:
                    u.container = mapped
                elif u.container != mapped:
                    warnings.append(
                        f"{e.type} '{e.name}': container conflict, keeping first occurrence"
                    )

    # pass 3: relationships, re-pointed and deduplicated
    seen_rel: set[tuple[str, str, str, str]] = set()
    for mi, m in enumerate(models):
        remap = remaps[mi]
        for e in m.elements:
            kind = core_kind_of(schema, e.type)
            if not kind_is(kind, CoreKind.RELATIONSHIP):
                continue
            src = remap.get(e.source, e.source)
            tgt = remap.get(e.target, e.target)
            sig = (e.type, src, tgt, e.name)
            if sig in seen_rel:
                continue
            seen_rel.add(sig)
            new = Element(
                id=fresh_id(e.id),
                type=e.type,
                name=e.name,
                metadata=dict(e.metadata),
                source=src,
                target=tgt,
            )
            if new.id != e.id:
                warnings.append(f"id '{e.id}' from models[{mi}] renamed to '{new.id}'")
            taken_rel_ids.add(new.id)
            out.append(new)

    schema_name = models[0].schema_name if models else ""
    merged = CartographyModel(schema_name=schema_name, elements=canonical_order(out))
    return MergeResult(model=merged, warnings=warnings)
