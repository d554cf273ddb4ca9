"""Conformance checking of a model against a (possibly extended) schema.

Problems are reported, never raised: callers inspect the ValidationReport.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import CartographyModel, Element, GEO, PLAIN
from .schema import CoreKind, MetamodelSchema, core_kind_of, kind_is


@dataclass
class Issue:
    severity: str  # "error" | "warning"
    element_id: str
    message: str


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(i.severity == "error" for i in self.issues)

    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    def add(self, severity: str, element_id: str, message: str) -> None:
        self.issues.append(Issue(severity, element_id, message))

    def summary(self) -> str:
        lines = [f"{i.severity}: [{i.element_id}] {i.message}" for i in self.issues]
        status = "OK" if self.ok else "INVALID"
        return "\n".join([status] + lines)


def _attr_matches(value, declared: str) -> bool:
    if declared == "string":
        return isinstance(value, str)
    if declared == "boolean":
        return isinstance(value, bool)
    # number: bool is an int subclass, exclude it
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_locator(e: Element, kind: CoreKind, report: ValidationReport) -> None:
    loc = e.locator
    if loc is None:
        return
    if kind is not CoreKind.ENTITY:
        report.add("error", e.id, f"locator not allowed on {kind.value}-kind element")
        return
    if loc.kind == GEO:
        if not (math.isfinite(loc.lat) and math.isfinite(loc.lon)):
            report.add("error", e.id, "GeoLocator coordinates must be finite")
        elif not (-90.0 <= loc.lat <= 90.0 and -180.0 <= loc.lon <= 180.0):
            report.add("error", e.id, f"GeoLocator out of range: lat={loc.lat}, lon={loc.lon}")
    elif loc.kind == PLAIN:
        if not loc.value:
            report.add("error", e.id, "Plain locator must have a non-empty value")
    else:
        report.add("error", e.id, f"unknown locator kind '{loc.kind}'")


def validate(model: CartographyModel, schema: MetamodelSchema) -> ValidationReport:
    """Report every violated element/model invariant; ok=true iff conformant."""
    report = ValidationReport()
    by_id: dict[str, Element] = {}
    for e in model.elements:
        if e.id in by_id:
            report.add("error", e.id, "duplicate id")
        else:
            by_id[e.id] = e

    kinds: dict[str, CoreKind] = {}
    for e in model.elements:
        if not schema.has_type(e.type):
            report.add("error", e.id, f"unknown type '{e.type}'")
            continue
        kinds[e.id] = core_kind_of(schema, e.type)

    def kind_of(eid: str) -> CoreKind | None:
        return kinds.get(eid)

    for e in model.elements:
        kind = kind_of(e.id)
        if kind is None:
            continue  # unknown type already reported
        is_rel = kind_is(kind, CoreKind.RELATIONSHIP)

        if not is_rel and not e.name:
            report.add("error", e.id, "non-relationship element must have a name")

        if is_rel:
            for label, ref in (("source", e.source), ("target", e.target)):
                if ref is None:
                    report.add("error", e.id, f"relationship missing {label}")
                elif ref not in by_id:
                    report.add("error", e.id, f"dangling {label} '{ref}'")
                else:
                    rk = kind_of(ref)
                    if rk is not None and kind_is(rk, CoreKind.RELATIONSHIP):
                        report.add("error", e.id, f"{label} '{ref}' is a relationship element")
        else:
            for label, ref in (("source", e.source), ("target", e.target)):
                if ref is not None:
                    report.add("error", e.id, f"{label} not allowed on {kind.value}-kind element")

        if e.members:
            if kind is not CoreKind.GROUP:
                report.add("error", e.id, f"members not allowed on {kind.value}-kind element")
            for m in e.members:
                if m not in by_id:
                    report.add("error", e.id, f"dangling member '{m}'")

        if e.container is not None:
            if e.container not in by_id:
                report.add("error", e.id, f"dangling container '{e.container}'")
            else:
                ck = kind_of(e.container)
                if ck is not None and ck is not CoreKind.CONTAINER:
                    report.add("error", e.id, f"container '{e.container}' is not Container-kind")

        _check_locator(e, kind, report)

        declared = schema.attribute_types(e.type)
        for key, value in e.metadata.items():
            want = declared.get(key)
            if want is not None and not _attr_matches(value, want):
                report.add(
                    "error", e.id, f"metadata '{key}' must be {want} per schema, got {value!r}"
                )

    # containment must be acyclic; walk chains with memoized status
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def walk(eid: str, trail: list[str]) -> None:
        if state.get(eid) == 1:
            return
        if state.get(eid) == 0:
            report.add("error", eid, "containment cycle: " + " -> ".join(trail + [eid]))
            return
        state[eid] = 0
        e = by_id[eid]
        if e.container is not None and e.container in by_id:
            walk(e.container, trail + [eid])
        state[eid] = 1

    for e in model.elements:
        if e.id in by_id and state.get(e.id) is None:
            walk(e.id, [])

    return report
