// Client-side session state. The pipeline is stateless per question, so
// chat history lives only in this tab; traces are kept verbatim keyed by
// the id stamped on the assistant message that produced them.

import type { AskResponse } from "./api.js";

export interface ChatMessage {
  role: "user" | "assistant";
  text: string;
  /** Set on assistant messages answered via /ask; keys into traces. */
  traceRef?: string;
  /** Set on assistant messages that report a failed ask. */
  error?: { code: string; question: string; rag: boolean };
}

export interface Session {
  messages: ChatMessage[];
  traces: Map<string, AskResponse>;
  pending: boolean;
  ragEnabled: boolean;
  backendId: string;
  nextTraceId: number;
}

export function newSession(): Session {
  return {
    messages: [],
    traces: new Map(),
    pending: false,
    ragEnabled: true,
    backendId: "extractive-mock",
    nextTraceId: 1,
  };
}

export function canSubmit(session: Session, draft: string): boolean {
  return !session.pending && draft.trim().length > 0;
}

export function beginAsk(session: Session, question: string): void {
  session.messages.push({ role: "user", text: question });
  session.pending = true;
}

/** Record a successful /ask reply. Returns the new trace ref. */
export function completeAsk(session: Session, response: AskResponse): string {
  const ref = `t${session.nextTraceId++}`;
  session.traces.set(ref, response);
  session.messages.push({ role: "assistant", text: response.answer.text, traceRef: ref });
  session.pending = false;
  return ref;
}

export function failAsk(
  session: Session,
  question: string,
  rag: boolean,
  code: string,
  message: string,
): void {
  session.messages.push({
    role: "assistant",
    text: message,
    error: { code, question, rag },
  });
  session.pending = false;
}
