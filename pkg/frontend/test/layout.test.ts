import { describe, expect, it } from "vitest";

import { forceLayout, mulberry32 } from "../src/layout.js";
import { COLLAB, EXTRACT_TOOLS, TOOLS, clone } from "./fixtures.js";

describe("mulberry32", () => {
    it("is deterministic for a given seed", () => {
        const a = mulberry32(7);
        const b = mulberry32(7);
        for (let i = 0; i < 100; i++) {
            expect(a()).toBe(b());
        }
    });

    it("stays in [0, 1)", () => {
        const r = mulberry32(123);
        for (let i = 0; i < 1000; i++) {
            const v = r();
            expect(v).toBeGreaterThanOrEqual(0);
            expect(v).toBeLessThan(1);
        }
    });
});

describe("forceLayout", () => {
    it("positions every node inside the viewport", () => {
        const pos = forceLayout(TOOLS.nodes, TOOLS.edges, 900, 600, 42);
        expect(pos.size).toBe(TOOLS.nodes.length);
        for (const p of pos.values()) {
            expect(Number.isFinite(p.x)).toBe(true);
            expect(Number.isFinite(p.y)).toBe(true);
            expect(p.x).toBeGreaterThanOrEqual(0);
            expect(p.x).toBeLessThanOrEqual(900);
            expect(p.y).toBeGreaterThanOrEqual(0);
            expect(p.y).toBeLessThanOrEqual(600);
        }
    });

    it("gives identical results for the same seed", () => {
        const a = forceLayout(TOOLS.nodes, TOOLS.edges, 900, 600, 42);
        const b = forceLayout(TOOLS.nodes, TOOLS.edges, 900, 600, 42);
        expect([...a.entries()]).toEqual([...b.entries()]);
    });

    it("does not write into the payload objects", () => {
        const payload = clone(COLLAB);
        const before = JSON.stringify(payload);
        forceLayout(payload.nodes, payload.edges, 900, 600, 1);
        expect(JSON.stringify(payload)).toBe(before);
    });

    it("handles an empty graph", () => {
        const pos = forceLayout([], [], 900, 600, 42);
        expect(pos.size).toBe(0);
    });

    it("separates connected nodes by roughly the rest length", () => {
        const pos = forceLayout(EXTRACT_TOOLS.nodes, EXTRACT_TOOLS.edges, 900, 600, 42);
        const a = pos.get("CopyTool/t1")!;
        const b = pos.get("CopyTool/t2")!;
        const d = Math.hypot(a.x - b.x, a.y - b.y);
        expect(d).toBeGreaterThan(20);
        expect(d).toBeLessThan(600);
    });
});
