import { forceLayout } from "./layout.js";
import { GraphPayload, ViewNode } from "./types.js";

export interface RenderCounts {
    nodes: number;
    edges: number;
}

const SVG_NS = "http://www.w3.org/2000/svg";

const PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

function colorKey(node: ViewNode): string {
    return node.group !== undefined && node.group !== "" ? node.group : node.type;
}

export function colorFor(node: ViewNode): string {
    const key = colorKey(node);
    let h = 0;
    for (let i = 0; i < key.length; i++) {
        h = (h * 31 + key.charCodeAt(i)) >>> 0;
    }
    return PALETTE[h % PALETTE.length];
}

export function radiusFor(node: ViewNode): number {
    if (typeof node.weight === "number" && node.weight > 0) {
        return Math.min(8 + 2 * Math.sqrt(node.weight), 30);
    }
    return 8;
}

export function geoNodes(payload: GraphPayload): ViewNode[] {
    return payload.nodes.filter(
        (n) => typeof n.lat === "number" && typeof n.lon === "number",
    );
}

function el(name: string, attrs: Record<string, string>): SVGElement {
    const node = document.createElementNS(SVG_NS, name);
    for (const [k, v] of Object.entries(attrs)) {
        node.setAttribute(k, v);
    }
    return node;
}

/**
 * Replace the svg content with the payload's graph. Reads the payload only;
 * the returned counts come from querying what actually landed in the DOM.
 */
export function renderGraph(
    svg: SVGSVGElement,
    payload: GraphPayload,
    seed = 42,
): RenderCounts {
    const width = Number(svg.getAttribute("width")) || 900;
    const height = Number(svg.getAttribute("height")) || 600;
    const pos = forceLayout(payload.nodes, payload.edges, width, height, seed);
    const fallback = { x: width / 2, y: height / 2 };

    while (svg.firstChild) {
        svg.removeChild(svg.firstChild);
    }

    const defs = el("defs", {});
    const marker = el("marker", {
        id: "arrow", viewBox: "0 0 10 10", refX: "18", refY: "5",
        markerWidth: "7", markerHeight: "7", orient: "auto-start-reverse",
    });
    marker.appendChild(el("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#666" }));
    defs.appendChild(marker);
    svg.appendChild(defs);

    const edgeGroup = el("g", { class: "edges" });
    for (const e of payload.edges) {
        const a = pos.get(e.source) ?? fallback;
        const b = pos.get(e.target) ?? fallback;
        const line = el("line", {
            class: "edge",
            x1: String(a.x), y1: String(a.y),
            x2: String(b.x), y2: String(b.y),
            stroke: "#999", "stroke-width": "1.5",
            "data-edge-id": e.id,
        });
        if (e.directed) {
            line.setAttribute("marker-end", "url(#arrow)");
        }
        edgeGroup.appendChild(line);
        if (e.name !== "") {
            const label = el("text", {
                class: "edge-label",
                x: String((a.x + b.x) / 2), y: String((a.y + b.y) / 2 - 4),
                "text-anchor": "middle",
            });
            label.textContent = e.name;
            edgeGroup.appendChild(label);
        }
    }
    svg.appendChild(edgeGroup);

    const nodeGroup = el("g", { class: "nodes" });
    for (const n of payload.nodes) {
        const p = pos.get(n.id) ?? fallback;
        nodeGroup.appendChild(el("circle", {
            class: "node",
            cx: String(p.x), cy: String(p.y),
            r: String(radiusFor(n)),
            fill: colorFor(n), stroke: "#333",
            "data-node-id": n.id,
        }));
        const label = el("text", {
            class: "node-label",
            x: String(p.x), y: String(p.y - radiusFor(n) - 4),
            "text-anchor": "middle",
        });
        label.textContent = n.name;
        nodeGroup.appendChild(label);
    }
    svg.appendChild(nodeGroup);

    return {
        nodes: svg.querySelectorAll("circle.node").length,
        edges: svg.querySelectorAll("line.edge").length,
    };
}
