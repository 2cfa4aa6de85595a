import { canonicalSearchQuery, normalizeEntity } from "./canonical.js";
import type {
  ProfileResponse,
  SearchFormState,
  SearchOutcome,
  SourceInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin client over the documented service endpoints. Every datum the UI
 * shows comes from these responses; the client adds nothing. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<{ body: T; headers: Headers }> {
    const response = await this.fetchImpl(this.baseUrl + path, { signal });
    const body = (await response.json()) as T & { error?: string };
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? `request failed (${response.status})`);
    }
    return { body, headers: response.headers };
  }

  async categories(): Promise<string[]> {
    const { body } = await this.getJson<{ categories: string[] }>("/categories");
    return body.categories;
  }

  async sources(): Promise<SourceInfo[]> {
    const { body } = await this.getJson<{ sources: SourceInfo[] }>("/sources");
    return body.sources;
  }

  searchPath(form: SearchFormState): string {
    return `/search?${canonicalSearchQuery(form)}`;
  }

  async search(form: SearchFormState, signal?: AbortSignal): Promise<SearchOutcome> {
    const { body, headers } = await this.getJson<SearchOutcome["response"]>(
      this.searchPath(form), signal);
    return { response: body, cacheHit: headers.get("X-Cache") === "hit" };
  }

  async profile(key: string): Promise<ProfileResponse> {
    const path = `/profiles/${encodeURIComponent(normalizeEntity(key))}`;
    const { body } = await this.getJson<ProfileResponse>(path);
    return body;
  }

  /** Link target for the plain-text profile block download. */
  profileTextPath(key: string): string {
    return `/profiles/${encodeURIComponent(normalizeEntity(key))}`;
  }
}
