import { describe, expect, it } from "vitest";

import { colorFor, geoNodes, radiusFor, renderGraph } from "../src/render.js";
import { COLLAB, EMPTY, EXTRACT_TOOLS, TOOLS, clone } from "./fixtures.js";

function canvas(): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("width", "900");
    svg.setAttribute("height", "600");
    document.body.appendChild(svg);
    return svg as SVGSVGElement;
}

describe("renderGraph", () => {
    it("renders exactly the payload counts", () => {
        const counts = renderGraph(canvas(), TOOLS);
        expect(counts).toEqual({ nodes: 7, edges: 8 });
    });

    it("renders nothing for an empty model", () => {
        const counts = renderGraph(canvas(), EMPTY);
        expect(counts).toEqual({ nodes: 0, edges: 0 });
    });

    it("replaces previous content instead of accumulating", () => {
        const svg = canvas();
        renderGraph(svg, TOOLS);
        const counts = renderGraph(svg, EXTRACT_TOOLS);
        expect(counts).toEqual({ nodes: 2, edges: 1 });
        expect(svg.querySelectorAll("circle.node").length).toBe(2);
    });

    it("puts arrowheads only on directed edges", () => {
        const svg = canvas();
        renderGraph(svg, COLLAB);
        for (const line of svg.querySelectorAll("line.edge")) {
            expect(line.hasAttribute("marker-end")).toBe(false);
        }
        renderGraph(svg, EXTRACT_TOOLS);
        const directed = svg.querySelector("line.edge")!;
        expect(directed.getAttribute("marker-end")).toBe("url(#arrow)");
    });

    it("labels nodes and named edges", () => {
        const svg = canvas();
        renderGraph(svg, EXTRACT_TOOLS);
        const texts = [...svg.querySelectorAll("text")].map((t) => t.textContent);
        expect(texts).toContain("Alpha");
        expect(texts).toContain("Beta");
        expect(texts).toContain("CSV");
    });

    it("is deterministic: same payload, same markup", () => {
        const a = canvas();
        const b = canvas();
        renderGraph(a, TOOLS);
        renderGraph(b, TOOLS);
        expect(a.innerHTML).toBe(b.innerHTML);
    });

    it("does not mutate the payload", () => {
        const payload = clone(COLLAB);
        const before = JSON.stringify(payload);
        renderGraph(canvas(), payload);
        expect(JSON.stringify(payload)).toBe(before);
    });
});

describe("visual attributes", () => {
    it("keys color on group, falling back to type", () => {
        const grouped = COLLAB.nodes[0];
        const plain = TOOLS.nodes[0];
        expect(colorFor(grouped)).toBe(colorFor({ ...grouped, type: "Other" }));
        expect(colorFor(plain)).toBe(colorFor({ ...plain, name: "renamed" }));
    });

    it("scales radius by weight when present", () => {
        const [ada, alan] = COLLAB.nodes;
        expect(radiusFor(ada)).toBeGreaterThan(radiusFor(alan));
        expect(radiusFor(TOOLS.nodes[0])).toBe(8);
    });

    it("lists geo-located nodes only", () => {
        expect(geoNodes(COLLAB).map((n) => n.id)).toEqual(["ada", "alan", "grace"]);
        expect(geoNodes(TOOLS)).toEqual([]);
    });
});
