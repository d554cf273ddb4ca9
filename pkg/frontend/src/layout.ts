import { ViewEdge, ViewNode } from "./types.js";

export interface Point {
    x: number;
    y: number;
}

// mulberry32: tiny deterministic PRNG so the same payload always lands in
// the same place (no Math.random anywhere in the layout path).
export function mulberry32(seed: number): () => number {
    let a = seed >>> 0;
    return () => {
        a = (a + 0x6d2b79f5) >>> 0;
        let t = a;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

const ITERATIONS = 150;
const PADDING = 30;

/**
 * Plain spring/repulsion layout. Positions never touch the payload objects;
 * callers get a fresh id -> point map.
 */
export function forceLayout(
    nodes: ViewNode[],
    edges: ViewEdge[],
    width: number,
    height: number,
    seed = 42,
): Map<string, Point> {
    const rand = mulberry32(seed);
    const pos = new Map<string, Point>();
    const cx = width / 2;
    const cy = height / 2;
    const ring = Math.min(width, height) / 3;
    nodes.forEach((n, i) => {
        const angle = (2 * Math.PI * i) / Math.max(nodes.length, 1);
        pos.set(n.id, {
            x: cx + ring * Math.cos(angle) + (rand() - 0.5) * 20,
            y: cy + ring * Math.sin(angle) + (rand() - 0.5) * 20,
        });
    });

    const ids = nodes.map((n) => n.id);
    const springs = edges
        .filter((e) => pos.has(e.source) && pos.has(e.target))
        .map((e) => [e.source, e.target] as const);
    const repel = 60 * 60;
    const rest = Math.min(120, ring);

    for (let iter = 0; iter < ITERATIONS; iter++) {
        const cool = 1 - iter / ITERATIONS;
        const disp = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));

        for (let i = 0; i < ids.length; i++) {
            for (let j = i + 1; j < ids.length; j++) {
                const a = pos.get(ids[i])!;
                const b = pos.get(ids[j])!;
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                let d2 = dx * dx + dy * dy;
                if (d2 < 0.01) {
                    // coincident nodes get a deterministic nudge apart
                    dx = rand() - 0.5;
                    dy = rand() - 0.5;
                    d2 = dx * dx + dy * dy;
                }
                const f = repel / d2;
                const da = disp.get(ids[i])!;
                const db = disp.get(ids[j])!;
                da.x += dx * f * 0.01;
                da.y += dy * f * 0.01;
                db.x -= dx * f * 0.01;
                db.y -= dy * f * 0.01;
            }
        }

        for (const [s, t] of springs) {
            const a = pos.get(s)!;
            const b = pos.get(t)!;
            const dx = b.x - a.x;
            const dy = b.y - a.y;
            const d = Math.sqrt(dx * dx + dy * dy) || 1;
            const f = (d - rest) / d * 0.05;
            const da = disp.get(s)!;
            const db = disp.get(t)!;
            da.x += dx * f;
            da.y += dy * f;
            db.x -= dx * f;
            db.y -= dy * f;
        }

        for (const id of ids) {
            const p = pos.get(id)!;
            const d = disp.get(id)!;
            d.x += (cx - p.x) * 0.005;
            d.y += (cy - p.y) * 0.005;
            p.x += Math.max(-10, Math.min(10, d.x)) * cool;
            p.y += Math.max(-10, Math.min(10, d.y)) * cool;
            p.x = Math.max(PADDING, Math.min(width - PADDING, p.x));
            p.y = Math.max(PADDING, Math.min(height - PADDING, p.y));
        }
    }
    return pos;
}
