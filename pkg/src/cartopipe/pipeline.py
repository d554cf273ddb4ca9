"""Pipeline orchestration: run declared step chains from a config file.

Steps execute strictly in order; the first failure halts the run. All
relative paths resolve against the workspace directory, which makes reruns
reproducible: same config + same inputs = byte-identical artifacts.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CartoError, PipelineError, TextParseError
from .export import EXPORTERS
from .inject import (
    SPREADSHEET_SCHEMA,
    XML_SCHEMA,
    inject_xml,
    model_to_xml,
    spreadsheet_to_model,
    xml_to_model,
    xml_to_spreadsheet,
)
from .merge import merge
from .model import CartographyModel, load_model, save_model
from .schema import MetamodelSchema, core_schema, load_schema
from .validate import validate
from .views import load_view_registry_file, run_view
from .xform import execute, parse_transformation

_STEP_FIELDS: dict[str, set[str]] = {
    "inject_xml": {"in", "out"},
    "xml_to_spreadsheet": {"in", "out"},
    "transform": {"tx", "in", "out"},
    "merge": {"in", "out"},
    "view": {"registry", "id", "in", "outModel", "outDoc"},
    "export": {"exporter", "in", "out"},
}

_BUILTIN_SCHEMAS: dict[str, MetamodelSchema] = {
    "Core": core_schema(),
    "Xml": XML_SCHEMA,
    "Spreadsheet": SPREADSHEET_SCHEMA,
}


@dataclass
class Step:
    kind: str
    params: dict

    def inputs(self) -> list[str]:
        if self.kind == "merge":
            return list(self.params["in"])
        if self.kind == "view":
            return [self.params["registry"], self.params["in"]]
        if self.kind == "transform":
            return [self.params["tx"], self.params["in"]]
        return [self.params["in"]]

    def outputs(self) -> list[str]:
        if self.kind == "view":
            return [self.params["outModel"], self.params["outDoc"]]
        return [self.params["out"]]


@dataclass
class PipelineConfig:
    path: Path
    workspace: Path
    schema_path: Path
    steps: list[Step]


@dataclass
class StepReport:
    kind: str
    status: str  # "ok" or "failed"
    wall_ms: float
    outputs: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    error: str | None = None


@dataclass
class RunReport:
    config_path: str
    workspace: str
    steps: list[StepReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.status == "ok" for s in self.steps)

    def to_json(self) -> str:
        obj = {
            "ok": self.ok,
            "configPath": self.config_path,
            "workspace": self.workspace,
            "steps": [
                {
                    "kind": s.kind,
                    "status": s.status,
                    "wallMs": round(s.wall_ms, 3),
                    "outputs": s.outputs,
                    "warnings": s.warnings,
                    **({"error": s.error} if s.error else {}),
                }
                for s in self.steps
            ],
        }
        return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_pipeline_config(path: str | Path,
                         workspace: str | Path | None = None) -> PipelineConfig:
    """Parse and statically check a `*.pipeline.json` file.

    Workspace precedence: explicit argument, then the config's own field,
    then $CARTOPIPE_WORKSPACE, then the config file's directory.
    """
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise PipelineError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise TextParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise PipelineError("config must be a JSON object")
    unknown = set(raw) - {"workspace", "schema", "steps"}
    if unknown:
        raise PipelineError(f"unknown config keys {sorted(unknown)}")
    for req in ("schema", "steps"):
        if req not in raw:
            raise PipelineError(f"config missing '{req}'")

    if workspace is not None:
        ws = Path(workspace)
    elif "workspace" in raw:
        ws = p.parent / raw["workspace"]
    elif os.environ.get("CARTOPIPE_WORKSPACE"):
        ws = Path(os.environ["CARTOPIPE_WORKSPACE"])
    else:
        ws = p.parent

    if not isinstance(raw["steps"], list):
        raise PipelineError("'steps' must be a list")
    steps: list[Step] = []
    for i, s in enumerate(raw["steps"]):
        if not isinstance(s, dict) or "kind" not in s:
            raise PipelineError(f"steps[{i}]: missing 'kind'")
        kind = s["kind"]
        if kind not in _STEP_FIELDS:
            raise PipelineError(f"steps[{i}]: unknown step kind '{kind}'")
        fields = set(s) - {"kind"}
        if fields != _STEP_FIELDS[kind]:
            raise PipelineError(
                f"steps[{i}] ({kind}): expected fields "
                f"{sorted(_STEP_FIELDS[kind])}, got {sorted(fields)}"
            )
        if kind == "transform" and not isinstance(s["in"], str):
            raise PipelineError(
                f"steps[{i}]: transform takes one input; merge models first"
            )
        if kind == "merge":
            if not isinstance(s["in"], list) or not s["in"]:
                raise PipelineError(f"steps[{i}]: merge 'in' must be a non-empty list")
        if kind == "export" and s["exporter"] not in EXPORTERS:
            raise PipelineError(f"steps[{i}]: unknown exporter '{s['exporter']}'")
        steps.append(Step(kind=kind, params={k: v for k, v in s.items() if k != "kind"}))

    all_outputs: set[str] = set()
    for i, step in enumerate(steps):
        for out in step.outputs():
            if out in all_outputs:
                raise PipelineError(f"steps[{i}]: duplicate output path '{out}'")
            all_outputs.add(out)
    produced: set[str] = set()
    for i, step in enumerate(steps):
        for inp in step.inputs():
            if inp in all_outputs and inp not in produced:
                raise PipelineError(
                    f"steps[{i}]: input '{inp}' is produced by a later step"
                )
        produced.update(step.outputs())

    return PipelineConfig(path=p, workspace=ws, schema_path=Path(raw["schema"]),
                          steps=steps)


def _resolve_schema(name: str, config_schema: MetamodelSchema) -> MetamodelSchema:
    """Schema for a model's declared name: the pipeline schema or a built-in.

    Models with an empty schemaName (core-only) live under the pipeline's
    schema.
    """
    if name == "" or name == config_schema.name:
        return config_schema
    if name in _BUILTIN_SCHEMAS:
        return _BUILTIN_SCHEMAS[name]
    raise PipelineError(f"no schema named '{name}' available to this pipeline")


def _validated(model: CartographyModel, schema: MetamodelSchema,
               what: str) -> CartographyModel:
    report = validate(model, schema)
    if not report.ok:
        raise PipelineError(f"{what} is invalid: {report.summary()}")
    return model


def run_pipeline(config_path: str | Path, workspace: str | Path | None = None,
                 strict: bool = True) -> RunReport:
    """Execute a pipeline config; the report also lands in run-report.json.

    Raises for config-level problems; step-level failures are recorded in the
    returned report (`report.ok` false) after halting the run.
    """
    config = load_pipeline_config(config_path, workspace)
    config.workspace.mkdir(parents=True, exist_ok=True)
    produced = {out for step in config.steps for out in step.outputs()}

    def resolve_out(p: str | Path) -> Path:
        q = Path(p)
        return q if q.is_absolute() else config.workspace / q

    def resolve_in(p: str | Path) -> Path:
        # step artifacts live in the workspace, source files next to the config
        q = Path(p)
        if q.is_absolute():
            return q
        if str(p) in produced:
            return config.workspace / q
        return config.path.parent / q

    schema_file = resolve_in(config.schema_path)
    try:
        config_schema = load_schema(schema_file.read_text(encoding="utf-8"))
    except OSError as exc:
        raise PipelineError(f"cannot read schema: {exc}") from None

    report = RunReport(config_path=str(config.path), workspace=str(config.workspace))

    def run_step(step: Step, warnings: list[str]) -> None:
        params = step.params
        if step.kind == "inject_xml":
            text = resolve_in(params["in"]).read_text(encoding="utf-8")
            model = xml_to_model(inject_xml(text))
            save_model(_validated(model, XML_SCHEMA, "injected model"),
                       str(resolve_out(params["out"])))
        elif step.kind == "xml_to_spreadsheet":
            model = load_model(str(resolve_in(params["in"])))
            _validated(model, XML_SCHEMA, "input model")
            sheet = xml_to_spreadsheet(model_to_xml(model))
            out = spreadsheet_to_model(sheet)
            save_model(_validated(out, SPREADSHEET_SCHEMA, "spreadsheet model"),
                       str(resolve_out(params["out"])))
        elif step.kind == "transform":
            tx_text = resolve_in(params["tx"]).read_text(encoding="utf-8")
            names = parse_transformation(tx_text)
            src = _resolve_schema(names.source_schema, config_schema)
            tgt = _resolve_schema(names.target_schema, config_schema)
            ast = parse_transformation(tx_text, (src, tgt))
            model = load_model(str(resolve_in(params["in"])))
            _validated(model, src, "transform input")
            out = execute(ast, model, (src, tgt), strict=strict,
                          warnings_out=warnings)
            save_model(out, str(resolve_out(params["out"])))
        elif step.kind == "merge":
            models = [load_model(str(resolve_in(p))) for p in params["in"]]
            names = {m.schema_name for m in models}
            if len(names) > 1:
                raise PipelineError(f"merge inputs disagree on schema: {sorted(names)}")
            schema = _resolve_schema(names.pop() if names else "", config_schema)
            for k, m in enumerate(models):
                _validated(m, schema, f"merge input #{k}")
            result = merge(models, schema)
            warnings.extend(result.warnings)
            save_model(_validated(result.model, schema, "merged model"),
                       str(resolve_out(params["out"])))
        elif step.kind == "view":
            registry = load_view_registry_file(resolve_in(params["registry"]))
            model = load_model(str(resolve_in(params["in"])))
            schema = _resolve_schema(model.schema_name, config_schema)
            _validated(model, schema, "view input")
            result, exporter = run_view(registry, params["id"], model, schema,
                                        strict=strict, warnings_out=warnings)
            save_model(result, str(resolve_out(params["outModel"])))
            text = EXPORTERS[exporter](result, schema)
            resolve_out(params["outDoc"]).write_text(text, encoding="utf-8",
                                                     newline="\n")
        elif step.kind == "export":
            model = load_model(str(resolve_in(params["in"])))
            schema = _resolve_schema(model.schema_name, config_schema)
            _validated(model, schema, "export input")
            text = EXPORTERS[params["exporter"]](model, schema)
            resolve_out(params["out"]).write_text(text, encoding="utf-8",
                                                  newline="\n")
        else:  # pragma: no cover - load_pipeline_config rejects unknown kinds
            raise PipelineError(f"unknown step kind '{step.kind}'")

    for step in config.steps:
        warnings: list[str] = []
        started = time.perf_counter()
        try:
            run_step(step, warnings)
        except (CartoError, OSError) as exc:
            report.steps.append(StepReport(
                kind=step.kind, status="failed",
                wall_ms=(time.perf_counter() - started) * 1000,
                warnings=warnings, error=str(exc),
            ))
            break
        report.steps.append(StepReport(
            kind=step.kind, status="ok",
            wall_ms=(time.perf_counter() - started) * 1000,
            outputs=[str(p) for p in step.outputs()], warnings=warnings,
        ))

    (config.workspace / "run-report.json").write_text(
        report.to_json(), encoding="utf-8", newline="\n")
    return report
