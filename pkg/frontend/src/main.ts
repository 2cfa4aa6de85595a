import { ApiClient, ApiError } from "./api.js";
import { SearchController } from "./controller.js";
import { canValidlySubmit } from "./canonical.js";
import {
  renderCheckboxList,
  renderErrorBanner,
  renderNotFound,
  renderProfile,
  renderResults,
} from "./render.js";
import type { SearchFormState } from "./types.js";

const api = new ApiClient("");
const controller = new SearchController(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readForm(): SearchFormState {
  const entity = el<HTMLInputElement>("entity").value;
  const maxRaw = el<HTMLInputElement>("max").value;
  const picked = (name: string) =>
    Array.from(document.querySelectorAll<HTMLInputElement>(
      `input[name="${name}"]:checked`)).map((c) => c.value);
  return {
    entity,
    categories: picked("categories"),
    sources: picked("sources"),
    max: maxRaw === "" ? null : Number(maxRaw),
  };
}

function syncSubmitState(): void {
  el<HTMLButtonElement>("submit").disabled = !canValidlySubmit(readForm());
}

async function runSearch(event: Event): Promise<void> {
  event.preventDefault();
  const results = el<HTMLElement>("results");
  const form = readForm();
  try {
    const { response, cacheHit } = await controller.submit(form);
    results.innerHTML = renderResults(response, cacheHit);
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") {
      return; // superseded by a newer submission
    }
    const message = error instanceof Error ? error.message : String(error);
    results.insertAdjacentHTML("afterbegin", renderErrorBanner(message));
  }
}

async function openProfile(key: string): Promise<void> {
  const view = el<HTMLElement>("profile");
  try {
    const profile = await api.profile(key);
    view.innerHTML = renderProfile(profile, api.profileTextPath(key));
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      view.innerHTML = renderNotFound(key);
    } else {
      const message = error instanceof Error ? error.message : String(error);
      view.innerHTML = renderErrorBanner(message);
    }
  }
}

async function init(): Promise<void> {
  try {
    const [categories, sources] = await Promise.all([api.categories(), api.sources()]);
    el<HTMLElement>("category-choices").innerHTML =
      renderCheckboxList("categories", categories, []);
    el<HTMLElement>("source-choices").innerHTML =
      renderCheckboxList("sources", sources.map((s) => s.name), []);
  } catch (error) {
    const message = error instanceof Error ? error.message : String(error);
    el<HTMLElement>("results").innerHTML = renderErrorBanner(message);
  }
  el<HTMLFormElement>("search-form").addEventListener("submit", runSearch);
  el<HTMLInputElement>("entity").addEventListener("input", syncSubmitState);
  el<HTMLButtonElement>("inspect").addEventListener("click", () => {
    void openProfile(el<HTMLInputElement>("entity").value);
  });
  syncSubmitState();
}

document.addEventListener("DOMContentLoaded", () => {
  void init();
});
