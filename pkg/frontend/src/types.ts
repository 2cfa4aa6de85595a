/** Response shapes of the profile service endpoints. */

export interface CategoryHit {
  category: string;
  trigger: string;
  anchor: string;
}

export interface SearchResult {
  description: string;
  tagged: string;
  kind: string | null;
  frequency: number;
  categories: CategoryHit[];
  source: string | null;
  first_seen: string | null;
  last_seen: string | null;
  origin: "store" | "fetched";
}

export interface SearchResponse {
  entity: string;
  categories: string[];
  max: number | null;
  sources: string[];
  results: SearchResult[];
  warnings: string[];
  fetched: number;
}

export interface ProfileResponse {
  key: string;
  source: string;
  created: string | null;
  entries: SearchResult[];
}

export interface SourceInfo {
  name: string;
  kind: string;
  location: string;
  format: string;
}

/** State of the search form; submit stays disabled while entity is empty. */
export interface SearchFormState {
  entity: string;
  categories: string[];
  sources: string[];
  max: number | null;
}

export interface SearchOutcome {
  response: SearchResponse;
  cacheHit: boolean;
}
