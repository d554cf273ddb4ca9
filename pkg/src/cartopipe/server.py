"""Read-only HTTP service over one central model and its view registry.

Everything is loaded once at startup into an immutable snapshot; view runs
are pure computations over it, so equal requests get byte-identical bodies.
Reloading data means restarting the process.
"""

from __future__ import annotations

import json
import mimetypes
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import CartoError, PipelineError, ViewError
from .export import to_view_json
from .model import load_model
from .schema import load_schema
from .validate import validate
from .views import load_view_registry_file, run_view

_FALLBACK_PAGE = b"""<!doctype html>
<html><head><title>cartopipe</title></head>
<body><p>No viewer bundle installed. The JSON API lives under /api/.</p></body></html>
"""


class CartoServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, model, schema, schema_bytes: bytes, registry,
                 strict: bool = True, ui_dir: Path | None = None):
        self.model = model
        self.schema = schema
        self.schema_bytes = schema_bytes
        self.registry = registry
        self.strict = strict
        self.ui_dir = ui_dir.resolve() if ui_dir is not None else None
        self.model_bytes = to_view_json(model, schema).encode("utf-8")
        self.views_bytes = (json.dumps(
            [{"id": v.id, "name": v.name, "iconPath": v.icon_path}
             for v in registry.views],
            indent=2, ensure_ascii=False) + "\n").encode("utf-8")
        super().__init__(address, _Handler)


class _Handler(BaseHTTPRequestHandler):
    server: CartoServer

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib name
        pass

    def _send(self, status: int, content_type: str, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, body: bytes) -> None:
        self._send(status, "application/json", body)

    def _error(self, status: int, message: str) -> None:
        self._json(status, (json.dumps({"error": message}) + "\n").encode("utf-8"))

    def _run_view(self, view_id: str) -> None:
        srv = self.server
        try:
            srv.registry.get(view_id)
        except ViewError:
            self._error(404, f"unknown view id '{view_id}'")
            return
        try:
            result, _ = run_view(srv.registry, view_id, srv.model, srv.schema,
                                 strict=srv.strict)
        except CartoError as exc:
            self._error(500, str(exc))
            return
        self._json(200, to_view_json(result, srv.schema).encode("utf-8"))

    def _static(self, path: str) -> None:
        srv = self.server
        if srv.ui_dir is None:
            if path == "/":
                self._send(200, "text/html; charset=utf-8", _FALLBACK_PAGE)
            else:
                self._error(404, "not found")
            return
        rel = "index.html" if path == "/" else path.lstrip("/")
        target = (srv.ui_dir / rel).resolve()
        if not str(target).startswith(str(srv.ui_dir) + os.sep) and target != srv.ui_dir:
            self._error(404, "not found")
            return
        if not target.is_file():
            self._error(404, "not found")
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        if ctype.startswith("text/") or ctype in ("application/javascript",
                                                  "application/json"):
            ctype += "; charset=utf-8"
        self._send(200, ctype, target.read_bytes())

    def _route(self, method: str) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/api/model":
            self._json(200, self.server.model_bytes)
        elif path == "/api/schema":
            self._json(200, self.server.schema_bytes)
        elif path == "/api/views":
            self._json(200, self.server.views_bytes)
        elif path.startswith("/api/views/") and path.endswith("/run"):
            view_id = path[len("/api/views/"):-len("/run")]
            self._run_view(view_id)
        elif path.startswith("/api/"):
            self._error(404, "not found")
        elif method == "GET":
            self._static(path)
        else:
            self._error(404, "not found")

    def do_GET(self) -> None:  # noqa: N802 - http.server API
        self._route("GET")

    def do_POST(self) -> None:  # noqa: N802 - http.server API
        self._route("POST")


def build_server(model_path: str | Path, registry_path: str | Path,
                 schema_path: str | Path, port: int = 8080,
                 ui_dir: str | Path | None = None,
                 strict: bool = True) -> CartoServer:
    """Load and validate everything, bind the socket, return the server."""
    schema_bytes = Path(schema_path).read_bytes()
    schema = load_schema(schema_bytes.decode("utf-8"))
    model = load_model(str(model_path))
    report = validate(model, schema)
    if not report.ok:
        raise PipelineError(f"model does not validate: {report.summary()}")
    registry = load_view_registry_file(registry_path)
    ui = Path(ui_dir) if ui_dir is not None else None
    if ui is not None and not ui.is_dir():
        raise PipelineError(f"ui directory '{ui}' does not exist")
    return CartoServer(("", port), model, schema, schema_bytes, registry,
                       strict=strict, ui_dir=ui)


def serve(model_path: str | Path, registry_path: str | Path,
          schema_path: str | Path, port: int = 8080,
          ui_dir: str | Path | None = None, strict: bool = True) -> None:
    """Blocking entry point used by the CLI."""
    server = build_server(model_path, registry_path, schema_path, port,
                          ui_dir, strict)
    host, actual_port = server.server_address[:2]
    print(f"serving on http://127.0.0.1:{actual_port}/ (Ctrl-C to stop)")
    try:
        server.serve_forever()
    finally:
        server.server_close()
