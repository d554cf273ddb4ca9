import { GraphPayload, ViewEntry } from "./types.js";

export class ApiError extends Error {
    constructor(message: string, readonly status?: number) {
        super(message);
        this.name = "ApiError";
    }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
        resp = await fetch(url, init);
    } catch (err) {
        throw new ApiError(`cannot reach the server: ${err}`);
    }
    if (!resp.ok) {
        let message = `request failed (${resp.status})`;
        try {
            const body = await resp.json();
            if (body && typeof body.error === "string") {
                message = body.error;
            }
        } catch {
            // non-JSON error body; keep the status message
        }
        throw new ApiError(message, resp.status);
    }
    return resp.json() as Promise<T>;
}

export class Api {
    constructor(private base = "") {}

    model(): Promise<GraphPayload> {
        return request<GraphPayload>(`${this.base}/api/model`);
    }

    views(): Promise<ViewEntry[]> {
        return request<ViewEntry[]>(`${this.base}/api/views`);
    }

    runView(id: string): Promise<GraphPayload> {
        return request<GraphPayload>(
            `${this.base}/api/views/${encodeURIComponent(id)}/run`,
            { method: "POST" },
        );
    }
}
