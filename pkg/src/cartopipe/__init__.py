"""cartopipe: typed-graph data pipeline with a transformation DSL and exporters."""

from .errors import (
    CartoError,
    MergeError,
    ModelError,
    PipelineError,
    SchemaError,
    TextParseError,
    TransformError,
    ViewError,
)
from .export import EXPORTERS, to_dot, to_graphml, to_kml, to_view_json
from .inject import (
    SPREADSHEET_SCHEMA,
    XML_SCHEMA,
    SpreadsheetModel,
    XmlModel,
    XmlNode,
    inject_xml,
    model_to_xml,
    spreadsheet_to_model,
    xml_to_model,
    xml_to_spreadsheet,
)
from .merge import MergeResult, merge
from .model import (
    CartographyModel,
    Element,
    Locator,
    canonical_order,
    load_model,
    parse_model,
    save_model,
    serialize_model,
)
from .pipeline import PipelineConfig, RunReport, load_pipeline_config, run_pipeline
from .schema import (
    CoreKind,
    MetamodelSchema,
    TypeDef,
    core_kind_of,
    core_schema,
    kind_is,
    load_schema,
    type_conforms,
)
from .server import build_server, serve
from .validate import Issue, ValidationReport, validate
from .views import (
    ViewDefinition,
    ViewRegistry,
    compose_via,
    load_view_registry,
    load_view_registry_file,
    run_view,
)
from .xform import TransformationAst, evaluate, execute, parse_transformation

__version__ = "0.1.0"
