// Shapes mirror the server's JSON exactly; the client never adds or
// removes fields, it only reads them.

export interface ViewNode {
    id: string;
    name: string;
    type: string;
    kind: string;
    group?: string;
    lat?: number;
    lon?: number;
    weight?: number;
}

export interface ViewEdge {
    id: string;
    source: string;
    target: string;
    type: string;
    directed: boolean;
    name: string;
}

export interface GraphPayload {
    nodes: ViewNode[];
    edges: ViewEdge[];
}

export interface ViewEntry {
    id: string;
    name: string;
    iconPath: string | null;
}
