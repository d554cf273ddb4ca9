"""Two-phase interpreter for parsed transformations.

Phase 1 matches rules against source elements and instantiates empty targets,
recording trace links. Phase 2 evaluates bindings; any binding value that is
a source element resolves through the trace to that element's primary target,
which is what makes relationship re-pointing work. Because phase 1 completes
before phase 2 starts, the output is independent of source element order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TransformError
from ..model import CartographyModel, Element, Locator, Scalar, canonical_order
from ..schema import CoreKind, MetamodelSchema, core_kind_of, kind_is, type_conforms
from ..validate import validate
from .parse import (
    BUILTINS,
    Binary,
    Call,
    Expr,
    Field,
    Lit,
    Not,
    Rule,
    TransformationAst,
    Var,
)


@dataclass
class TraceMap:
    """Phase-1 record: matched source element -> primary target ids.

    A foreach rule records one primary per iteration; resolving a reference
    through such a rule is only well-defined when it produced exactly one.
    """

    by_rule: dict[tuple[str, str], list[str]] = field(default_factory=dict)
    default: dict[str, list[str]] = field(default_factory=dict)

    def record(self, source_id: str, rule_name: str, target_id: str) -> None:
        self.by_rule.setdefault((source_id, rule_name), []).append(target_id)
        self.default.setdefault(source_id, []).append(target_id)

    def resolve(self, source_id: str) -> str | None:
        """Primary target id, None if the element matched no rule."""
        ids = self.default.get(source_id)
        if ids is None:
            return None
        if len(ids) != 1:
            raise TransformError(
                f"reference to '{source_id}' is ambiguous: its rule produced "
                f"{len(ids)} targets"
            )
        return ids[0]


class _Ctx:
    def __init__(self, model: CartographyModel, schema: MetamodelSchema):
        self.model = model
        self.schema = schema
        self.by_id = model.by_id()
        self.canonical = canonical_order(model.elements)

    def element(self, eid: str) -> Element:
        e = self.by_id.get(eid)
        if e is None:
            raise TransformError(f"dangling reference '{eid}'")
        return e

    def of_type(self, type_name: str) -> list[Element]:
        if not self.schema.has_type(type_name):
            raise TransformError(
                f"unknown type '{type_name}' in schema '{self.schema.name}'"
            )
        return [e for e in self.canonical if type_conforms(self.schema, e.type, type_name)]


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _eq(a, b) -> bool:
    if isinstance(a, Element) and isinstance(b, Element):
        return a.id == b.id
    if isinstance(a, Element) or isinstance(b, Element):
        raise TransformError("cannot compare an element with a plain value")
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if _is_number(a) != _is_number(b):
        return False
    return a == b


def _want_bool(v, where: str) -> bool:
    if not isinstance(v, bool):
        raise TransformError(f"{where} must be a boolean, got {type(v).__name__}")
    return v


def _rel_end(ctx: _Ctx, e: Element, which: str) -> Element:
    kind = core_kind_of(ctx.schema, e.type)
    if not kind_is(kind, CoreKind.RELATIONSHIP):
        raise TransformError(f"'.{which}' on non-relationship element '{e.id}'")
    eid = e.source if which == "source" else e.target
    if eid is None:
        raise TransformError(f"element '{e.id}' has no {which}")
    return ctx.element(eid)


def _call(ctx: _Ctx, name: str, exprs: list[Expr], env: dict) -> object:
    type_positions = BUILTINS[name][1]
    args: list[object] = []
    for i, ex in enumerate(exprs):
        if i in type_positions:
            args.append(ex.name)  # type: ignore[union-attr]  # parser guarantees Var
        else:
            args.append(_eval(ctx, ex, env))

    def elem(i: int) -> Element:
        v = args[i]
        if not isinstance(v, Element):
            raise TransformError(
                f"argument {i + 1} of '{name}' must be an element, "
                f"got {type(v).__name__}"
            )
        return v

    if name == "allOf":
        return ctx.of_type(str(args[0]))
    if name == "sourceOf":
        return _rel_end(ctx, elem(0), "source")
    if name == "targetOf":
        return _rel_end(ctx, elem(0), "target")
    if name in ("incoming", "outgoing"):
        e = elem(0)
        end = "target" if name == "incoming" else "source"
        return [r for r in ctx.of_type(str(args[1]))
                if getattr(r, end) == e.id]
    if name == "meta":
        e = elem(0)
        key = args[1]
        if not isinstance(key, str):
            raise TransformError("metadata key must be a string")
        if key not in e.metadata:
            raise TransformError(f"no metadata '{key}' on element '{e.id}'")
        return e.metadata[key]
    if name == "kindOf":
        return type_conforms(ctx.schema, elem(0).type, str(args[1]))
    if name == "pairs":
        a, b = args
        if not isinstance(a, list) or not isinstance(b, list):
            raise TransformError("'pairs' takes two collections")
        return [(x, y) for x in a for y in b]
    if name in ("first", "second"):
        p = args[0]
        if not isinstance(p, tuple) or len(p) != 2:
            raise TransformError(f"'{name}' takes a pair")
        return p[0] if name == "first" else p[1]
    if name == "byMeta":
        key, want = args[1], args[2]
        if not isinstance(key, str):
            raise TransformError("metadata key must be a string")
        hits = [e for e in ctx.of_type(str(args[0]))
                if key in e.metadata and _eq(e.metadata[key], want)]
        if len(hits) != 1:
            raise TransformError(
                f"byMeta({args[0]}, {key!r}, {want!r}) matched {len(hits)} elements"
            )
        return hits[0]
    if name == "byName":
        hits = [e for e in ctx.of_type(str(args[0])) if e.name == args[1]]
        if len(hits) != 1:
            raise TransformError(
                f"byName({args[0]}, {args[1]!r}) matched {len(hits)} elements"
            )
        return hits[0]
    if name == "membersOf":
        return [ctx.element(m) for m in elem(0).members]
    if name == "num":
        v = args[0]
        if _is_number(v):
            return v
        if isinstance(v, str):
            try:
                return int(v)
            except ValueError:
                try:
                    return float(v)
                except ValueError:
                    raise TransformError(f"num({v!r}) is not numeric") from None
        raise TransformError(f"num() takes a string or number, got {type(v).__name__}")
    raise AssertionError(name)


def _eval(ctx: _Ctx, expr: Expr, env: dict) -> object:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Var):
        if expr.name not in env:
            raise TransformError(f"unbound variable '{expr.name}'")
        return env[expr.name]
    if isinstance(expr, Field):
        obj = _eval(ctx, expr.obj, env)
        if not isinstance(obj, Element):
            raise TransformError(
                f"'.{expr.field}' on non-element value ({type(obj).__name__})"
            )
        if expr.field in ("source", "target"):
            return _rel_end(ctx, obj, expr.field)
        return getattr(obj, expr.field)
    if isinstance(expr, Call):
        return _call(ctx, expr.func, expr.args, env)
    if isinstance(expr, Not):
        return not _want_bool(_eval(ctx, expr.operand, env), "'not' operand")
    if isinstance(expr, Binary):
        if expr.op in ("and", "or"):
            left = _want_bool(_eval(ctx, expr.left, env), f"'{expr.op}' operand")
            if expr.op == "and" and not left:
                return False
            if expr.op == "or" and left:
                return True
            return _want_bool(_eval(ctx, expr.right, env), f"'{expr.op}' operand")
        left = _eval(ctx, expr.left, env)
        right = _eval(ctx, expr.right, env)
        if expr.op == "=":
            return _eq(left, right)
        if expr.op == "!=":
            return not _eq(left, right)
        if isinstance(left, str) and isinstance(right, str):
            return left + right
        if _is_number(left) and _is_number(right):
            return left + right  # type: ignore[operator]
        raise TransformError("'+' needs two strings or two numbers")
    raise AssertionError(type(expr))


def evaluate(expr: Expr, env: dict, model: CartographyModel,
             schema: MetamodelSchema) -> object:
    """Evaluate one expression against a model; exposed for testing."""
    return _eval(_Ctx(model, schema), expr, env)


@dataclass
class _Pending:
    element: Element
    rule: Rule
    target_index: int
    env: dict


def _auto_id(rule: Rule, source_id: str, k: int | None, target_index: int,
             target_var: str) -> str:
    parts = [rule.name, source_id]
    if k is not None:
        parts.append(str(k))
    if target_index > 0:
        parts.append(target_var)
    return "/".join(parts)


def execute(
    ast: TransformationAst,
    source: CartographyModel,
    schemas: tuple[MetamodelSchema, MetamodelSchema],
    strict: bool = True,
    warnings_out: list[str] | None = None,
) -> CartographyModel:
    """Run a transformation; the output validates against the target schema.

    In strict mode a reference binding whose value matched no rule is an
    error; in lenient mode the target element being built is dropped (for
    `members`, just the entry) with a warning.
    """
    src_schema, tgt_schema = schemas
    warnings = warnings_out if warnings_out is not None else []
    ctx = _Ctx(source, src_schema)
    trace = TraceMap()
    pending: list[_Pending] = []
    for rule in ast.rules:
        if not src_schema.has_type(rule.source_type):
            raise TransformError(
                f"rule '{rule.name}': unknown source type '{rule.source_type}' "
                f"in schema '{src_schema.name}'"
            )

    # phase 1: match, instantiate, trace
    for e in ctx.canonical:
        matched: list[Rule] = []
        for rule in ast.rules:
            if not type_conforms(src_schema, e.type, rule.source_type):
                continue
            if rule.guard is not None:
                try:
                    ok = _want_bool(_eval(ctx, rule.guard, {rule.source_var: e}), "guard")
                except TransformError as exc:
                    raise TransformError(
                        f"rule '{rule.name}' guard on '{e.id}': {exc}"
                    ) from None
                if not ok:
                    continue
            matched.append(rule)
        if not matched:
            continue
        if len(matched) > 1:
            names = "', '".join(r.name for r in matched)
            raise TransformError(f"element '{e.id}' matches rules '{names}'")
        rule = matched[0]
        env_base = {rule.source_var: e}
        if rule.foreach is not None:
            var, coll_expr = rule.foreach
            coll = _eval(ctx, coll_expr, env_base)
            if not isinstance(coll, list):
                raise TransformError(
                    f"rule '{rule.name}': foreach needs a collection, "
                    f"got {type(coll).__name__}"
                )
            iterations = [({**env_base, var: item}, k) for k, item in enumerate(coll)]
        else:
            iterations = [(env_base, None)]
        for env, k in iterations:
            for ti, tspec in enumerate(rule.targets):
                explicit = next((b for b in tspec.bindings if b.field == "id"), None)
                if explicit is not None:
                    tid = _eval(ctx, explicit.expr, env)
                    if not isinstance(tid, str) or not tid:
                        raise TransformError(
                            f"rule '{rule.name}': id binding must produce a "
                            f"non-empty string"
                        )
                else:
                    tid = _auto_id(rule, e.id, k, ti, tspec.var)
                pending.append(_Pending(
                    element=Element(id=tid, type=tspec.type), rule=rule,
                    target_index=ti, env=env,
                ))
                if ti == 0:
                    trace.record(e.id, rule.name, tid)

    # phase 2: bindings, with source-element values resolved through the trace
    def resolve_ref(value: object, where: str) -> str | None:
        """Target-model id for a reference binding value; None = drop."""
        if isinstance(value, str):
            return value
        if not isinstance(value, Element):
            raise TransformError(
                f"{where}: reference binding needs an element, "
                f"got {type(value).__name__}"
            )
        resolved = trace.resolve(value.id)
        if resolved is None:
            if strict:
                raise TransformError(
                    f"{where}: '{value.id}' matched no rule (strict mode)"
                )
            return None
        return resolved

    out: list[Element] = []
    seen_ids: set[str] = set()
    for p in pending:
        el = p.element
        where = f"rule '{p.rule.name}', target '{el.id}'"
        loc: dict[str, object] = {}
        dropped = False
        for b in p.rule.targets[p.target_index].bindings:
            if b.field == "id":
                continue
            try:
                value = _eval(ctx, b.expr, p.env)
            except TransformError as exc:
                raise TransformError(f"{where}, '{b.field}': {exc}") from None
            head = b.field.split(".")[0]
            if head in ("source", "target", "container"):
                ref = resolve_ref(value, f"{where}, '{b.field}'")
                if ref is None:
                    warnings.append(f"{where} dropped: unresolved '{b.field}'")
                    dropped = True
                    break
                setattr(el, head, ref)
            elif head == "members":
                if not isinstance(value, list):
                    raise TransformError(f"{where}: members needs a collection")
                for m in value:
                    ref = resolve_ref(m, f"{where}, 'members'")
                    if ref is None:
                        warnings.append(f"{where}: unresolved member dropped")
                    elif ref not in el.members:
                        el.members.append(ref)
            elif head == "locator":
                loc[b.field.split(".")[1]] = value
            elif head == "metadata":
                key = b.field.split(".", 1)[1]
                if isinstance(value, Element) or value is None:
                    raise TransformError(f"{where}: metadata values must be scalars")
                el.metadata[key] = value  # type: ignore[assignment]
            elif head == "name":
                if not isinstance(value, str):
                    raise TransformError(f"{where}: name must be a string")
                el.name = value
        if dropped:
            continue
        if loc:
            if set(loc) == {"lat", "lon"}:
                if not (_is_number(loc["lat"]) and _is_number(loc["lon"])):
                    raise TransformError(f"{where}: locator lat/lon must be numbers")
                el.locator = Locator.geo(float(loc["lat"]), float(loc["lon"]))  # type: ignore[arg-type]
            elif set(loc) == {"value"}:
                if not isinstance(loc["value"], str):
                    raise TransformError(f"{where}: locator value must be a string")
                el.locator = Locator.plain(loc["value"])
            else:
                raise TransformError(
                    f"{where}: locator needs lat+lon or value, got {sorted(loc)}"
                )
        if el.id in seen_ids:
            raise TransformError(f"duplicate target id '{el.id}'")
        seen_ids.add(el.id)
        out.append(el)

    result = CartographyModel(schema_name=ast.target_schema,
                              elements=canonical_order(out))
    report = validate(result, tgt_schema)
    if not report.ok:
        raise TransformError(
            f"transformation '{ast.name}' produced an invalid model: "
            f"{report.summary()}"
        )
    return result
