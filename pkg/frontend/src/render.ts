import type { ProfileResponse, SearchResponse, SearchResult } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderCacheBadge(cacheHit: boolean): string {
  return cacheHit
    ? '<span class="badge badge-hit" data-cache="hit">cached</span>'
    : '<span class="badge badge-miss" data-cache="miss">fresh</span>';
}

function categoryLabels(result: SearchResult): string {
  return result.categories
    .map((c) => `${c.category} (${c.trigger})`)
    .join(", ");
}

/** One result row. Every cell traces to a response field, echoed in
 * data-* attributes so contract tests can compare field-for-field. */
export function renderResultRow(result: SearchResult, rank: number): string {
  const cats = categoryLabels(result);
  return [
    `<tr class="result" data-rank="${rank}"`,
    ` data-description="${escapeHtml(result.description)}"`,
    ` data-kind="${escapeHtml(result.kind ?? "")}"`,
    ` data-frequency="${result.frequency}"`,
    ` data-categories="${escapeHtml(result.categories.map((c) => c.category).join(","))}"`,
    ` data-source="${escapeHtml(result.source ?? "")}"`,
    ` data-date="${escapeHtml(result.last_seen ?? "")}"`,
    ` data-origin="${result.origin}">`,
    `<td class="rank">${rank}</td>`,
    `<td class="description">${escapeHtml(result.description)}</td>`,
    `<td class="kind">${escapeHtml(result.kind ?? "?")}</td>`,
    `<td class="categories">${escapeHtml(cats)}</td>`,
    `<td class="frequency">${result.frequency}</td>`,
    `<td class="source">${escapeHtml(result.source ?? "?")}</td>`,
    `<td class="date">${escapeHtml(result.last_seen ?? "?")}</td>`,
    `<td class="origin">${result.origin}</td>`,
    `</tr>`,
  ].join("");
}

export function renderEmptyState(response: SearchResponse): string {
  const filters = response.categories.length
    ? ` in categories ${response.categories.join(", ")}`
    : "";
  return `<p class="empty" data-empty="true">No descriptions found for ` +
    `&quot;${escapeHtml(response.entity)}&quot;${escapeHtml(filters)}.</p>`;
}

export function renderWarnings(warnings: string[]): string {
  if (warnings.length === 0) return "";
  const items = warnings.map((w) => `<li>${escapeHtml(w)}</li>`).join("");
  return `<ul class="warnings">${items}</ul>`;
}

export function renderResults(response: SearchResponse, cacheHit: boolean): string {
  const badge = renderCacheBadge(cacheHit);
  const heading =
    `<h2>Descriptions for &quot;${escapeHtml(response.entity)}&quot; ${badge}</h2>`;
  if (response.results.length === 0) {
    return heading + renderWarnings(response.warnings) + renderEmptyState(response);
  }
  const rows = response.results.map((r, i) => renderResultRow(r, i + 1)).join("\n");
  return [
    heading,
    renderWarnings(response.warnings),
    '<table class="results">',
    "<thead><tr><th>#</th><th>description</th><th>kind</th><th>categories</th>",
    "<th>frequency</th><th>source</th><th>date</th><th>origin</th></tr></thead>",
    `<tbody>${rows}</tbody>`,
    "</table>",
  ].join("\n");
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderProfile(profile: ProfileResponse, textHref: string): string {
  const rows = profile.entries.map((e, i) => renderResultRow(e, i + 1)).join("\n");
  return [
    `<h2>Profile: ${escapeHtml(profile.key)}</h2>`,
    `<p class="meta">source ${escapeHtml(profile.source)}` +
      (profile.created ? `, created ${escapeHtml(profile.created)}` : "") + `</p>`,
    `<p><a class="export" href="${escapeHtml(textHref)}" ` +
      `data-accept="text/plain">Download text block</a></p>`,
    '<table class="results">',
    "<thead><tr><th>#</th><th>description</th><th>kind</th><th>categories</th>",
    "<th>frequency</th><th>source</th><th>date</th><th>origin</th></tr></thead>",
    `<tbody>${rows}</tbody>`,
    "</table>",
  ].join("\n");
}

export function renderNotFound(key: string): string {
  return `<div class="banner notice">No profile stored for ` +
    `&quot;${escapeHtml(key)}&quot;. Ingest a source or search with ` +
    `sources selected to fetch it.</div>`;
}

export function renderCheckboxList(
  name: string, values: string[], checked: string[],
): string {
  return values
    .map((v) => {
      const mark = checked.includes(v) ? " checked" : "";
      return `<label><input type="checkbox" name="${escapeHtml(name)}" ` +
        `value="${escapeHtml(v)}"${mark}> ${escapeHtml(v)}</label>`;
    })
    .join("\n");
}
