import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface Recorded {
  path: string;
  status: number;
  xCache: string | null;
  body: unknown;
}

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture(name: string): Recorded {
  return JSON.parse(readFileSync(join(fixturesDir, `${name}.json`), "utf-8"));
}

function toResponse(record: Recorded): Response {
  const headers = new Headers({ "Content-Type": "application/json" });
  if (record.xCache) headers.set("X-Cache", record.xCache);
  return new Response(JSON.stringify(record.body), {
    status: record.status,
    headers,
  });
}

/** Fetch stub that replays recorded responses and logs every requested
 * URL. Multiple fixtures for the same path are served in order (the
 * server's cache-miss-then-hit behaviour). */
export function recordedFetch(records: Recorded[]) {
  const queues = new Map<string, Recorded[]>();
  for (const record of records) {
    const queue = queues.get(record.path) ?? [];
    queue.push(record);
    queues.set(record.path, queue);
  }
  const requested: string[] = [];
  const fetchImpl = async (url: string): Promise<Response> => {
    requested.push(url);
    const queue = queues.get(url);
    if (!queue || queue.length === 0) {
      throw new Error(`no fixture recorded for ${url}`);
    }
    const record = queue.length > 1 ? queue.shift()! : queue[0];
    return toResponse(record);
  };
  return { fetchImpl, requested };
}
