import type { SearchFormState } from "./types.js";

/** Lowercase, single-spaced entity key; must match the server's key
 * normalization so repeated submissions land on the same cache entry. */
export function normalizeEntity(entity: string): string {
  return entity.trim().split(/\s+/).join(" ").toLowerCase();
}

/** Canonical /search query string: normalized entity, sorted category and
 * source lists, empty parameters omitted. Mirrors the server's cache key
 * (entity, sorted categories, max, sorted sources). */
export function canonicalSearchQuery(form: SearchFormState): string {
  const params: Array<[string, string]> = [
    ["entity", normalizeEntity(form.entity)],
  ];
  if (form.categories.length > 0) {
    params.push(["categories", [...form.categories].sort().join(",")]);
  }
  if (form.max !== null) {
    params.push(["max", String(form.max)]);
  }
  if (form.sources.length > 0) {
    params.push(["sources", [...form.sources].sort().join(",")]);
  }
  return params
    .map(([k, v]) => `${k}=${encodeURIComponent(v)}`)
    .join("&");
}

export function canValidlySubmit(form: SearchFormState): boolean {
  return normalizeEntity(form.entity).length > 0 &&
    (form.max === null || form.max >= 1);
}
