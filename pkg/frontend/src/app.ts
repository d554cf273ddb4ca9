import { Api, ApiError } from "./api.js";
import { geoNodes, renderGraph } from "./render.js";
import { GraphPayload, ViewEntry } from "./types.js";

const LAYOUT_SEED = 42;

/**
 * Single-page viewer: a bar with one button per registered view plus
 * "Full Model", the graph canvas, a geo point panel, and a status bar.
 *
 * Errors (API down, stale view id) show a banner and leave whatever is on
 * the canvas untouched. At most one request is in flight; buttons are
 * disabled while waiting.
 */
export class ViewerApp {
    private api: Api;
    private pending = false;

    private viewBar: HTMLDivElement;
    private banner: HTMLDivElement;
    private canvas: SVGSVGElement;
    private geoList: HTMLUListElement;
    private status: HTMLDivElement;

    constructor(root: HTMLElement, apiBase = "") {
        this.api = new Api(apiBase);
        root.innerHTML = `
          <div class="viewbar"></div>
          <div class="banner hidden" role="alert"></div>
          <div class="layout">
            <svg class="canvas" width="900" height="600"></svg>
            <aside class="geo-panel">
              <h2>Geo points</h2>
              <ul class="geo-list"></ul>
            </aside>
          </div>
          <div class="status"></div>`;
        this.viewBar = root.querySelector<HTMLDivElement>(".viewbar")!;
        this.banner = root.querySelector<HTMLDivElement>(".banner")!;
        this.canvas = root.querySelector<SVGSVGElement>("svg.canvas")!;
        this.geoList = root.querySelector<HTMLUListElement>(".geo-list")!;
        this.status = root.querySelector<HTMLDivElement>(".status")!;
    }

    async start(): Promise<void> {
        try {
            const views = await this.api.views();
            this.buildButtons(views);
        } catch (err) {
            this.buildButtons([]);
            this.showError(err);
            return;
        }
        await this.loadFullModel();
    }

    async loadFullModel(): Promise<void> {
        await this.withPending(async () => {
            const payload = await this.api.model();
            this.show(payload);
        });
    }

    async runView(id: string): Promise<void> {
        await this.withPending(async () => {
            const payload = await this.api.runView(id);
            this.show(payload);
        });
    }

    private buildButtons(views: ViewEntry[]): void {
        const full = document.createElement("button");
        full.textContent = "Full Model";
        full.dataset.viewId = "";
        full.addEventListener("click", () => { void this.loadFullModel(); });
        this.viewBar.appendChild(full);
        for (const v of views) {
            const btn = document.createElement("button");
            btn.textContent = v.name;
            btn.dataset.viewId = v.id;
            btn.addEventListener("click", () => { void this.runView(v.id); });
            this.viewBar.appendChild(btn);
        }
    }

    private async withPending(work: () => Promise<void>): Promise<void> {
        if (this.pending) {
            return;
        }
        this.setPending(true);
        try {
            await work();
        } catch (err) {
            this.showError(err);
        } finally {
            this.setPending(false);
        }
    }

    private setPending(on: boolean): void {
        this.pending = on;
        for (const btn of this.viewBar.querySelectorAll("button")) {
            btn.disabled = on;
        }
    }

    private show(payload: GraphPayload): void {
        const counts = renderGraph(this.canvas, payload, LAYOUT_SEED);
        this.status.textContent = `${counts.nodes} nodes, ${counts.edges} edges`;
        this.banner.classList.add("hidden");
        this.banner.textContent = "";
        this.geoList.textContent = "";
        for (const n of geoNodes(payload)) {
            const item = document.createElement("li");
            item.textContent = `${n.name} (${n.lat}, ${n.lon})`;
            this.geoList.appendChild(item);
        }
    }

    private showError(err: unknown): void {
        const message = err instanceof ApiError
            ? err.message
            : `unexpected error: ${err}`;
        this.banner.textContent = message;
        this.banner.classList.remove("hidden");
    }
}
