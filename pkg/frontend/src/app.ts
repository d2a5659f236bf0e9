// Wires the chat surface together: health-driven backend dropdown, RAG
// toggle, submit flow with one in-flight ask at a time, error bubbles
// with retry, and a collapsed trace panel under every grounded answer.

import { ApiError, apiBase, fetchHealth, postAsk } from "./api.js";
import type { AskResponse } from "./api.js";
import {
  beginAsk,
  canSubmit,
  completeAsk,
  failAsk,
  newSession,
  type Session,
} from "./state.js";
import { renderTracePanel } from "./trace.js";

interface Controls {
  log: HTMLElement;
  form: HTMLFormElement;
  input: HTMLInputElement;
  submit: HTMLButtonElement;
  ragToggle: HTMLInputElement;
  backendSelect: HTMLSelectElement;
  status: HTMLElement;
}

function mount(root: HTMLElement): Controls {
  root.innerHTML = `
    <header>
      <h1>electwin</h1>
      <span id="status" class="status">connecting…</span>
    </header>
    <main id="log" class="chat-log" aria-live="polite"></main>
    <form id="ask-form" class="composer">
      <label class="rag-toggle"><input type="checkbox" id="rag" checked> RAG</label>
      <select id="backend" aria-label="backend"></select>
      <input id="question" type="text" autocomplete="off"
             placeholder="Ask about the electricity datasets…" aria-label="question">
      <button id="submit" type="submit" disabled>Ask</button>
    </form>
  `;
  return {
    log: root.querySelector("#log") as HTMLElement,
    form: root.querySelector("#ask-form") as HTMLFormElement,
    input: root.querySelector("#question") as HTMLInputElement,
    submit: root.querySelector("#submit") as HTMLButtonElement,
    ragToggle: root.querySelector("#rag") as HTMLInputElement,
    backendSelect: root.querySelector("#backend") as HTMLSelectElement,
    status: root.querySelector("#status") as HTMLElement,
  };
}

function appendBubble(controls: Controls, role: "user" | "assistant", text: string): HTMLElement {
  const bubble = document.createElement("div");
  bubble.className = `bubble ${role}`;
  const body = document.createElement("p");
  body.textContent = text;
  bubble.appendChild(body);
  controls.log.appendChild(bubble);
  bubble.scrollIntoView?.({ block: "end" });
  return bubble;
}

function syncControls(session: Session, controls: Controls): void {
  controls.submit.disabled = !canSubmit(session, controls.input.value);
  controls.input.disabled = session.pending;
}

async function runAsk(session: Session, controls: Controls, question: string, rag: boolean): Promise<void> {
  beginAsk(session, question);
  appendBubble(controls, "user", question);
  syncControls(session, controls);

  let response: AskResponse;
  try {
    response = await postAsk(apiBase(), {
      question,
      rag,
      backendId: session.backendId,
    });
  } catch (error) {
    const code = error instanceof ApiError ? error.code : "NetworkError";
    const message = error instanceof Error ? error.message : String(error);
    failAsk(session, question, rag, code, message);
    renderErrorBubble(session, controls, question, rag, code, message);
    syncControls(session, controls);
    return;
  }

  completeAsk(session, response);
  const bubble = appendBubble(controls, "assistant", response.answer.text);
  // grounding details only exist in rag mode; nonRag answers get no affordance
  if (response.mode === "rag") {
    bubble.appendChild(renderTracePanel(response));
  }
  syncControls(session, controls);
}

function renderErrorBubble(
  session: Session,
  controls: Controls,
  question: string,
  rag: boolean,
  code: string,
  message: string,
): void {
  const bubble = appendBubble(controls, "assistant", `${code}: ${message}`);
  bubble.classList.add("error");
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "retry";
  retry.textContent = "Retry";
  retry.onclick = () => {
    if (session.pending) return;
    retry.disabled = true;
    void runAsk(session, controls, question, rag);
  };
  bubble.appendChild(retry);
}

function populateBackends(session: Session, controls: Controls, backends: string[]): void {
  controls.backendSelect.replaceChildren();
  for (const id of backends) {
    const option = document.createElement("option");
    option.value = id;
    option.textContent = id;
    controls.backendSelect.appendChild(option);
  }
  if (backends.includes(session.backendId)) {
    controls.backendSelect.value = session.backendId;
  } else if (backends.length > 0) {
    session.backendId = backends[0] as string;
    controls.backendSelect.value = session.backendId;
  }
}

export function initApp(root: HTMLElement): Session {
  const session = newSession();
  const controls = mount(root);

  controls.ragToggle.checked = session.ragEnabled;
  controls.ragToggle.onchange = () => {
    session.ragEnabled = controls.ragToggle.checked;
  };
  controls.backendSelect.onchange = () => {
    session.backendId = controls.backendSelect.value;
  };
  controls.input.oninput = () => syncControls(session, controls);

  controls.form.onsubmit = (event) => {
    event.preventDefault();
    const question = controls.input.value.trim();
    if (!canSubmit(session, question)) return;
    controls.input.value = "";
    void runAsk(session, controls, question, session.ragEnabled);
  };

  void fetchHealth(apiBase())
    .then((health) => {
      controls.status.textContent = `${health.tripleCount} triples · ${health.status}`;
      populateBackends(session, controls, health.backends);
    })
    .catch(() => {
      controls.status.textContent = "service unreachable";
      populateBackends(session, controls, [session.backendId]);
    });

  syncControls(session, controls);
  return session;
}
