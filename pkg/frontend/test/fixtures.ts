// Payloads captured from the live server over the shipped fixture models.

import { GraphPayload } from "../src/types.js";

export const EMPTY: GraphPayload = { nodes: [], edges: [] };

// GET /api/model over the tool/format registry central model.
export const TOOLS: GraphPayload = {
    nodes: [
        { id: "format/CSV", name: "CSV", type: "Format", kind: "Entity" },
        { id: "format/JSON", name: "JSON", type: "Format", kind: "Entity" },
        { id: "format/SVG", name: "SVG", type: "Format", kind: "Entity" },
        { id: "tool/Gridbase", name: "Gridbase", type: "Tool", kind: "Entity" },
        { id: "tool/Inkview", name: "Inkview", type: "Tool", kind: "Entity" },
        { id: "tool/Plotter", name: "Plotter", type: "Tool", kind: "Entity" },
        { id: "tool/Tabula", name: "Tabula", type: "Tool", kind: "Entity" },
    ],
    edges: [
        { id: "ExportRow/s2.r2", source: "tool/Inkview", target: "format/SVG",
          type: "Export", directed: true, name: "" },
        { id: "ExportRow/s2.r3", source: "tool/Gridbase", target: "format/CSV",
          type: "Export", directed: true, name: "" },
        { id: "ExportRow/s2.r4", source: "tool/Gridbase", target: "format/JSON",
          type: "Export", directed: true, name: "" },
        { id: "ExportRow/s2.r5", source: "tool/Tabula", target: "format/CSV",
          type: "Export", directed: true, name: "" },
        { id: "ImportRow/s3.r2", source: "format/SVG", target: "tool/Plotter",
          type: "Import", directed: true, name: "" },
        { id: "ImportRow/s3.r3", source: "format/CSV", target: "tool/Plotter",
          type: "Import", directed: true, name: "" },
        { id: "ImportRow/s3.r4", source: "format/JSON", target: "tool/Tabula",
          type: "Import", directed: true, name: "" },
        { id: "ImportRow/s3.r5", source: "format/JSON", target: "tool/Plotter",
          type: "Import", directed: true, name: "" },
    ],
};

// POST /api/views/extract-tools/run over the minimal two-tool model.
export const EXTRACT_TOOLS: GraphPayload = {
    nodes: [
        { id: "CopyTool/t1", name: "Alpha", type: "Tool", kind: "Entity" },
        { id: "CopyTool/t2", name: "Beta", type: "Tool", kind: "Entity" },
    ],
    edges: [
        { id: "Compose/f1/0", source: "CopyTool/t1", target: "CopyTool/t2",
          type: "Link", directed: true, name: "CSV" },
    ],
};

// GET /api/model over the co-authorship model: geo points, groups, weights.
export const COLLAB: GraphPayload = {
    nodes: [
        { id: "ada", name: "Ada", type: "Entity", kind: "Entity",
          group: "Compilers", lat: 51.5, lon: -0.12, weight: 12 },
        { id: "alan", name: "Alan", type: "Entity", kind: "Entity",
          group: "Compilers", lat: 53.48, lon: -2.24, weight: 5 },
        { id: "grace", name: "Grace", type: "Entity", kind: "Entity",
          group: "Compilers", lat: 40.71, lon: -74.0, weight: 8 },
        { id: "team", name: "Compilers", type: "Group", kind: "Group" },
    ],
    edges: [
        { id: "c1", source: "ada", target: "grace", type: "Relationship",
          directed: false, name: "co-authored" },
        { id: "c2", source: "grace", target: "alan", type: "Relationship",
          directed: false, name: "co-authored" },
    ],
};

export function clone(payload: GraphPayload): GraphPayload {
    return JSON.parse(JSON.stringify(payload));
}
