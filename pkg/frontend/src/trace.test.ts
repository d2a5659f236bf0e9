import { describe, expect, it } from "vitest";

import {
  highlightSparql,
  parseLoadProfile,
  renderContextTable,
  renderTracePanel,
} from "./trace.js";
import { groundedResponse, UK_QUERY } from "./testing.js";

describe("highlightSparql", () => {
  it("wraps keywords in spans without losing any text", () => {
    const host = document.createElement("pre");
    host.appendChild(highlightSparql(UK_QUERY));
    expect(host.textContent).toBe(UK_QUERY);
    const keywords = [...host.querySelectorAll("span.kw")].map((s) => s.textContent);
    expect(keywords).toContain("STRBEFORE");
    expect(keywords).toContain("SELECT");
    expect(keywords).toContain("FILTER");
  });

  it("treats query text as text, not markup", () => {
    const host = document.createElement("pre");
    host.appendChild(highlightSparql('FILTER(?x = "<script>alert(1)</script>")'));
    expect(host.querySelector("script")).toBeNull();
    expect(host.textContent).toContain("<script>");
  });

  it("leaves lowercase identifiers alone", () => {
    const host = document.createElement("pre");
    host.appendChild(highlightSparql("?selector strbefore_col"));
    expect(host.querySelectorAll("span.kw")).toHaveLength(0);
  });
});

describe("parseLoadProfile", () => {
  const profilePrompt = (lines: string[]) =>
    "Question:\nq\n\nQuery:\nQ\n\nEnhanced Context:\nc\n\nLoad Profile:\n" + lines.join("\n");

  it("recovers the 24 hourly values", () => {
    const lines = Array.from({ length: 24 }, (_, h) => `${h},${(h * 0.01).toFixed(3)}`);
    const values = parseLoadProfile(profilePrompt(lines));
    expect(values).toHaveLength(24);
    expect(values?.[0]).toBe(0);
    expect(values?.[23]).toBeCloseTo(0.23);
  });

  it("returns null when the prompt has no profile section", () => {
    expect(parseLoadProfile("Question:\nq")).toBeNull();
  });

  it("returns null on a short or misnumbered section", () => {
    expect(parseLoadProfile(profilePrompt(["0,1.0", "1,2.0"]))).toBeNull();
    const wrongOrder = Array.from({ length: 24 }, (_, h) => `${23 - h},0.5`);
    expect(parseLoadProfile(profilePrompt(wrongOrder))).toBeNull();
  });
});

describe("renderContextTable", () => {
  it("renders cell-for-cell what the trace carried", () => {
    const table = renderContextTable(
      ["prefix", "countryName"],
      [
        ["IDEAL", "United Kingdom"],
        ["REFIT", "United Kingdom"],
      ],
    );
    const headers = [...table.querySelectorAll("th")].map((c) => c.textContent);
    expect(headers).toEqual(["prefix", "countryName"]);
    const cells = [...table.querySelectorAll("tbody td")].map((c) => c.textContent);
    expect(cells).toEqual(["IDEAL", "United Kingdom", "REFIT", "United Kingdom"]);
  });
});

describe("renderTracePanel", () => {
  it("starts collapsed and shows query, context and timings when expanded", () => {
    const trace = groundedResponse();
    const panel = renderTracePanel(trace);
    expect(panel.open).toBe(false);
    expect(panel.querySelector("pre.query")?.textContent).toBe(UK_QUERY);
    expect(panel.querySelectorAll(".context-table tbody tr")).toHaveLength(3);
    expect(panel.querySelector(".row-count")?.textContent).toBe("3 rows");
    expect(panel.textContent).toContain("transformMs");
    expect(panel.querySelector("summary")?.textContent).toContain("DatasetsByCountry");
  });

  it("marks truncated tables with shown-of-total counts", () => {
    const trace = groundedResponse({
      contextTable: {
        header: ["prefix"],
        rows: [["IDEAL"], ["REFIT"]],
        truncated: true,
        totalRows: 9,
      },
    });
    const panel = renderTracePanel(trace);
    expect(panel.querySelector(".row-count")?.textContent).toBe("2 of 9 rows");
  });

  it("renders warning badges from the trace", () => {
    const trace = groundedResponse({
      intentId: null,
      queryText: null,
      contextTable: null,
      warnings: ["NoIntentMatched: no intent matched the question"],
    });
    const panel = renderTracePanel(trace);
    const badge = panel.querySelector(".warning-badge");
    expect(badge?.textContent).toBe("NoIntentMatched");
    expect(panel.querySelector("pre.query")).toBeNull();
    expect(panel.querySelector(".context-table")).toBeNull();
  });

  it("draws a sparkline only when the prompt carries a load profile", () => {
    const bare = renderTracePanel(groundedResponse());
    expect(bare.querySelector("svg.sparkline")).toBeNull();

    const lines = Array.from({ length: 24 }, (_, h) => `${h},0.1`);
    const withProfile = renderTracePanel(
      groundedResponse({
        renderedPrompt: "Question:\nq\n\nQuery:\nQ\n\nEnhanced Context:\nc\n\nLoad Profile:\n" + lines.join("\n"),
      }),
    );
    expect(withProfile.querySelector("svg.sparkline")).not.toBeNull();
  });
});
