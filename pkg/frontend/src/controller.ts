import type { ApiClient } from "./api.js";
import { canValidlySubmit } from "./canonical.js";
import type { SearchFormState, SearchOutcome } from "./types.js";

/** Runs searches one at a time: a newer submission aborts the one in
 * flight, so the results view always reflects the latest form state. */
export class SearchController {
  private inFlight: AbortController | null = null;

  constructor(private readonly api: ApiClient) {}

  async submit(form: SearchFormState): Promise<SearchOutcome> {
    if (!canValidlySubmit(form)) {
      throw new Error("entity must be non-empty");
    }
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    try {
      return await this.api.search(form, controller.signal);
    } finally {
      if (this.inFlight === controller) {
        this.inFlight = null;
      }
    }
  }
}
