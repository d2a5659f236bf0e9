// Renders one trace as an expandable panel: the generated query, the
// retrieved context table, the prompt the backend saw, and stage timings.
// Every visible value is copied straight from the AskResponse; the only
// client-side parsing is re-reading the 24 hourly values out of the
// prompt's own Load Profile section to draw a sparkline.

import type { AskResponse } from "./api.js";

const SPARQL_KEYWORDS = [
  "PREFIX", "SELECT", "DISTINCT", "WHERE", "FILTER", "BIND", "AS",
  "STRBEFORE", "STR",
];

const KEYWORD_PATTERN = new RegExp(`\\b(${SPARQL_KEYWORDS.join("|")})\\b`, "g");

/** Keyword-only highlighting, built with text nodes so nothing is injected. */
export function highlightSparql(query: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  let last = 0;
  for (const match of query.matchAll(KEYWORD_PATTERN)) {
    const at = match.index ?? 0;
    if (at > last) fragment.appendChild(document.createTextNode(query.slice(last, at)));
    const keyword = document.createElement("span");
    keyword.className = "kw";
    keyword.textContent = match[0];
    fragment.appendChild(keyword);
    last = at + match[0].length;
  }
  if (last < query.length) fragment.appendChild(document.createTextNode(query.slice(last)));
  return fragment;
}

/**
 * Pull the hour,value pairs back out of the rendered prompt's
 * "Load Profile:" section. Returns null unless exactly 24 parse.
 */
export function parseLoadProfile(renderedPrompt: string): number[] | null {
  const marker = "\n\nLoad Profile:\n";
  const at = renderedPrompt.indexOf(marker);
  if (at < 0) return null;
  const lines = renderedPrompt.slice(at + marker.length).trim().split("\n");
  if (lines.length !== 24) return null;
  const values: number[] = [];
  for (const line of lines) {
    const [hour, value] = line.split(",");
    if (hour === undefined || value === undefined) return null;
    if (Number(hour) !== values.length) return null;
    const parsed = Number(value);
    if (!Number.isFinite(parsed)) return null;
    values.push(parsed);
  }
  return values;
}

function sparkline(values: number[]): SVGSVGElement {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  const width = 240;
  const height = 48;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "sparkline");
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", "24-hour load profile");
  const peak = Math.max(...values, Number.MIN_VALUE);
  const step = width / (values.length - 1);
  const points = values
    .map((v, i) => `${(i * step).toFixed(1)},${(height - 2 - (v / peak) * (height - 6)).toFixed(1)}`)
    .join(" ");
  const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
  line.setAttribute("points", points);
  line.setAttribute("fill", "none");
  svg.appendChild(line);
  return svg;
}

export function renderContextTable(header: string[], rows: string[][]): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "context-table";
  const head = table.createTHead().insertRow();
  for (const name of header) {
    const cell = document.createElement("th");
    cell.textContent = name;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    for (const value of row) tr.insertCell().textContent = value;
  }
  return table;
}

function section(title: string, ...children: Node[]): HTMLElement {
  const wrap = document.createElement("section");
  const heading = document.createElement("h4");
  heading.textContent = title;
  wrap.appendChild(heading);
  for (const child of children) wrap.appendChild(child);
  return wrap;
}

/** Collapsed by default; groundedness is one click away, not forced. */
export function renderTracePanel(trace: AskResponse): HTMLDetailsElement {
  const panel = document.createElement("details");
  panel.className = "trace-panel";

  const summary = document.createElement("summary");
  summary.textContent = trace.intentId === null ? "trace" : `trace · ${trace.intentId}`;
  for (const warning of trace.warnings) {
    const badge = document.createElement("span");
    badge.className = "warning-badge";
    badge.textContent = warning.split(":")[0] ?? warning;
    badge.title = warning;
    summary.appendChild(badge);
  }
  panel.appendChild(summary);

  if (trace.queryText !== null) {
    const pre = document.createElement("pre");
    pre.className = "query";
    pre.appendChild(highlightSparql(trace.queryText));
    panel.appendChild(section("Query", pre));
  }

  if (trace.contextTable !== null) {
    const table = renderContextTable(trace.contextTable.header, trace.contextTable.rows);
    const caption = document.createElement("p");
    caption.className = "row-count";
    caption.textContent = trace.contextTable.truncated
      ? `${trace.contextTable.rows.length} of ${trace.contextTable.totalRows} rows`
      : `${trace.contextTable.totalRows} rows`;
    panel.appendChild(section("Enhanced Context", table, caption));
  }

  const profile = parseLoadProfile(trace.renderedPrompt);
  if (profile !== null) {
    panel.appendChild(section("Load Profile", sparkline(profile)));
  }

  const prompt = document.createElement("pre");
  prompt.className = "prompt";
  prompt.textContent = trace.renderedPrompt;
  panel.appendChild(section("Prompt", prompt));

  const timings = document.createElement("dl");
  timings.className = "timings";
  for (const [stage, ms] of Object.entries(trace.stageTimings)) {
    const dt = document.createElement("dt");
    dt.textContent = stage;
    const dd = document.createElement("dd");
    dd.textContent = `${ms.toFixed(1)} ms`;
    timings.appendChild(dt);
    timings.appendChild(dd);
  }
  panel.appendChild(section("Timings", timings));

  return panel;
}
