"""Command-line front end.

Exit codes: 0 success, 1 operational failure (failed step, invalid model,
view error), 2 unusable input (bad arguments, unparseable config or file).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CartoError, TextParseError
from .export import EXPORTERS
from .model import load_model
from .pipeline import run_pipeline
from .schema import load_schema
from .server import serve
from .validate import validate
from .views import load_view_registry_file, run_view


def _fail(exc: object, code: int) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return code


def _load_schema_file(path: str):
    return load_schema(Path(path).read_text(encoding="utf-8"))


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        report = run_pipeline(args.config, workspace=args.workspace,
                              strict=not args.lenient)
    except (CartoError, OSError) as exc:
        return _fail(exc, 2)
    for step in report.steps:
        line = f"{step.status:6s} {step.kind} ({step.wall_ms:.1f} ms)"
        if step.error:
            line += f": {step.error}"
        print(line)
        for w in step.warnings:
            print(f"       warning: {w}")
    if not report.ok:
        return 1
    print(f"{len(report.steps)} step(s) ok")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        schema = _load_schema_file(args.schema)
        model = load_model(args.model)
    except (CartoError, OSError) as exc:
        return _fail(exc, 2)
    report = validate(model, schema)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_export(args: argparse.Namespace) -> int:
    try:
        schema = _load_schema_file(args.schema)
        model = load_model(args.model)
    except (CartoError, OSError) as exc:
        return _fail(exc, 2)
    report = validate(model, schema)
    if not report.ok:
        return _fail(f"model does not validate: {report.summary()}", 1)
    text = EXPORTERS[args.exporter](model, schema)
    try:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        return _fail(exc, 1)
    print(f"wrote {args.out}")
    return 0


def _cmd_view(args: argparse.Namespace) -> int:
    try:
        schema = _load_schema_file(args.schema)
        model = load_model(args.model)
        registry = load_view_registry_file(args.registry)
    except (CartoError, OSError) as exc:
        return _fail(exc, 2)
    try:
        result, exporter = run_view(registry, args.id, model, schema,
                                    strict=not args.lenient)
    except CartoError as exc:
        return _fail(exc, 1)
    text = EXPORTERS[exporter](result, schema)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        serve(args.model, args.registry, args.schema, port=args.port,
              ui_dir=args.ui, strict=not args.lenient)
    except (CartoError, OSError) as exc:
        return _fail(exc, 2)
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartopipe",
        description="data-to-visualization pipeline toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a pipeline config")
    run.add_argument("config")
    run.add_argument("--workspace", default=None,
                     help="artifact directory (default: config field, then "
                          "$CARTOPIPE_WORKSPACE, then the config's directory)")
    run.add_argument("--lenient", action="store_true",
                     help="drop targets with unresolved references instead of failing")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="check a model against a schema")
    val.add_argument("model")
    val.add_argument("schema")
    val.set_defaults(func=_cmd_validate)

    exp = sub.add_parser("export", help="write one exporter's document")
    exp.add_argument("exporter", choices=sorted(EXPORTERS))
    exp.add_argument("model")
    exp.add_argument("schema")
    exp.add_argument("out")
    exp.set_defaults(func=_cmd_export)

    view = sub.add_parser("view", help="run a registered view")
    view.add_argument("registry")
    view.add_argument("id")
    view.add_argument("model")
    view.add_argument("schema")
    view.add_argument("--out", default=None, help="write here instead of stdout")
    view.add_argument("--lenient", action="store_true")
    view.set_defaults(func=_cmd_view)

    srv = sub.add_parser("serve", help="serve the viewer API")
    srv.add_argument("model")
    srv.add_argument("registry")
    srv.add_argument("schema")
    srv.add_argument("--port", type=int, default=8080)
    srv.add_argument("--ui", default=None, help="directory with the viewer bundle")
    srv.add_argument("--lenient", action="store_true")
    srv.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
