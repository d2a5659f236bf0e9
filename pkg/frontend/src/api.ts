// Typed client for the question-answering service (POST /ask, GET /health).
// Response shapes mirror the server's trace JSON field-for-field; nothing
// here reinterprets or recomputes what the server sent.

export interface ContextTable {
  header: string[];
  rows: string[][];
  truncated: boolean;
  totalRows: number;
}

export interface Answer {
  text: string;
  backendId: string;
  latencyMs: number;
  tokenUsage: Record<string, number> | null;
}

export interface AskResponse {
  v: number;
  question: string;
  mode: "rag" | "nonRag";
  backendId: string;
  intentId: string | null;
  slots: Record<string, string>;
  queryText: string | null;
  contextTable: ContextTable | null;
  renderedPrompt: string;
  answer: Answer;
  stageTimings: Record<string, number>;
  warnings: string[];
}

export interface AskRequest {
  question: string;
  rag: boolean;
  backendId: string;
}

export interface Health {
  status: string;
  tripleCount: number;
  backends: string[];
}

/** Non-2xx reply; carries the server's stable error code when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function throwApiError(response: Response): Promise<never> {
  let code = "HttpError";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (typeof body.error === "string") code = body.error;
    if (typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export async function postAsk(baseUrl: string, request: AskRequest): Promise<AskResponse> {
  const response = await fetch(`${baseUrl}/ask`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  if (!response.ok) await throwApiError(response);
  return await response.json();
}

export async function fetchHealth(baseUrl: string): Promise<Health> {
  const response = await fetch(`${baseUrl}/health`);
  if (!response.ok) await throwApiError(response);
  return await response.json();
}

declare global {
  interface Window {
    ELECTWIN_API_BASE?: string;
  }
}

/**
 * Where the service lives. An optional config.js next to index.html may
 * set window.ELECTWIN_API_BASE; otherwise requests go same-origin.
 */
export function apiBase(): string {
  const configured = window.ELECTWIN_API_BASE;
  if (typeof configured === "string") return configured.replace(/\/$/, "");
  return "";
}
