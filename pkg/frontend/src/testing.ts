// Canned server replies for tests. Mirrors the seed-graph answer to the
// UK-datasets question so assertions can be exact.

import type { AskResponse } from "./api.js";

export const UK_QUESTION =
  "Enumerate in one short sentence the electricity consumption datasets collected in the UK?";

export const UK_ANSWER =
  "The electricity consumption datasets collected in the UK include IDEAL, REFIT, and UKDALE.";

export const UK_QUERY = `PREFIX schema: <https://schema.org/>
SELECT DISTINCT ?prefix ?countryName WHERE {
  ?house schema:containedInPlace ?city .
  ?city schema:containedInPlace ?country .
  ?country schema:name ?countryName .
  ?house schema:name ?houseName .
  BIND(STRBEFORE(STR(?houseName), "_") AS ?prefix)
  FILTER(?countryName = "United Kingdom")
}`;

export function groundedResponse(overrides: Partial<AskResponse> = {}): AskResponse {
  return {
    v: 1,
    question: UK_QUESTION,
    mode: "rag",
    backendId: "extractive-mock",
    intentId: "DatasetsByCountry",
    slots: { country: "United Kingdom" },
    queryText: UK_QUERY,
    contextTable: {
      header: ["prefix", "countryName"],
      rows: [
        ["IDEAL", "United Kingdom"],
        ["REFIT", "United Kingdom"],
        ["UKDALE", "United Kingdom"],
      ],
      truncated: false,
      totalRows: 3,
    },
    renderedPrompt: "Question:\n...\n\nQuery:\n...\n\nEnhanced Context:\n...",
    answer: {
      text: UK_ANSWER,
      backendId: "extractive-mock",
      latencyMs: 0.4,
      tokenUsage: null,
    },
    stageTimings: {
      transformMs: 0.2,
      retrieveMs: 0.5,
      renderMs: 0.1,
      generateMs: 0.4,
      totalMs: 1.2,
    },
    warnings: [],
    ...overrides,
  };
}

export function ungroundedResponse(overrides: Partial<AskResponse> = {}): AskResponse {
  return groundedResponse({
    mode: "nonRag",
    intentId: null,
    slots: {},
    queryText: null,
    contextTable: null,
    renderedPrompt: UK_QUESTION,
    answer: {
      text: "No idea; the model is on its own here.",
      backendId: "extractive-mock",
      latencyMs: 0.2,
      tokenUsage: null,
    },
    ...overrides,
  });
}

export function jsonReply(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
