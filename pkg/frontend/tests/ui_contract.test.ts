// UI contract against the recorded fixture server: submitting the search
// form renders exactly what a direct GET /search returns, field for
// field, and a repeat submission shows the cache-hit badge.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SearchController } from "../src/controller.js";
import { renderResults } from "../src/render.js";
import type { SearchResponse } from "../src/types.js";
import { loadFixture, recordedFetch } from "./helpers.js";

const FORM = { entity: "John Major", categories: [], sources: [], max: 10 };

interface RowFields {
  description: string;
  kind: string;
  frequency: number;
  categories: string;
  source: string;
  date: string;
  origin: string;
}

function extractRows(html: string): RowFields[] {
  const rows = html.match(/<tr class="result"[^>]*>/g) ?? [];
  return rows.map((row) => {
    const field = (name: string) =>
      new RegExp(`data-${name}="([^"]*)"`).exec(row)?.[1] ?? "";
    return {
      description: field("description"),
      kind: field("kind"),
      frequency: Number(field("frequency")),
      categories: field("categories"),
      source: field("source"),
      date: field("date"),
      origin: field("origin"),
    };
  });
}

describe("search form contract", () => {
  it("renders the same ranked descriptions as a direct GET /search", async () => {
    const miss = loadFixture("search_john_major_miss");
    const { fetchImpl } = recordedFetch([miss, loadFixture("search_john_major_hit")]);
    const controller = new SearchController(new ApiClient("", fetchImpl));

    const { response, cacheHit } = await controller.submit(FORM);
    const html = renderResults(response, cacheHit);
    const rendered = extractRows(html);

    const direct = (miss.body as SearchResponse).results;
    expect(rendered).toEqual(direct.map((r) => ({
      description: r.description,
      kind: r.kind ?? "",
      frequency: r.frequency,
      categories: r.categories.map((c) => c.category).join(","),
      source: r.source ?? "",
      date: r.last_seen ?? "",
      origin: r.origin,
    })));
  });

  it("repeat submission displays the cache-hit badge", async () => {
    const { fetchImpl, requested } = recordedFetch([
      loadFixture("search_john_major_miss"),
      loadFixture("search_john_major_hit"),
    ]);
    const controller = new SearchController(new ApiClient("", fetchImpl));

    const first = await controller.submit(FORM);
    expect(renderResults(first.response, first.cacheHit))
      .toContain('data-cache="miss"');

    const second = await controller.submit(FORM);
    expect(requested[1]).toBe(requested[0]); // same canonical query
    expect(renderResults(second.response, second.cacheHit))
      .toContain('data-cache="hit"');
    expect(second.response).toEqual(first.response);
  });
});
