#!/usr/bin/env python3
"""Record service responses into tests/fixtures/ for the UI contract
tests. Run from the repo root with the profiledb package installed."""

import json
import sys
import tempfile
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from profiledb.service import ServiceConfig, SourceConfig, serve  # noqa: E402

ROOT = Path(__file__).resolve().parents[2]
OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def capture(base, path):
    req = urllib.request.Request(base + path)
    try:
        with urllib.request.urlopen(req) as resp:
            status, headers, body = resp.status, dict(resp.headers), resp.read()
    except urllib.error.HTTPError as exc:
        status, headers, body = exc.code, dict(exc.headers), exc.read()
    return {
        "path": path,
        "status": status,
        "xCache": headers.get("X-Cache"),
        "body": json.loads(body),
    }


def main():
    with tempfile.TemporaryDirectory() as tmp:
        config = ServiceConfig(
            address="127.0.0.1:0", store_path=f"{tmp}/store", cache_size=64,
            sources=[
                SourceConfig("seed", "local-directory", str(ROOT / "fixtures/corpus"), "tagged"),
                SourceConfig("extra", "local-directory", str(ROOT / "fixtures/extra"), "tagged"),
            ])
        handle = serve(config)
        base = f"http://{handle.host}:{handle.port}"
        try:
            req = urllib.request.Request(base + "/ingest", method="POST",
                                         data=json.dumps({"source": "seed"}).encode())
            urllib.request.urlopen(req).read()

            records = {
                "categories": capture(base, "/categories"),
                "sources": capture(base, "/sources"),
                "search_john_major_miss": capture(base, "/search?entity=john%20major&max=10"),
                "search_john_major_hit": capture(base, "/search?entity=john%20major&max=10"),
                "search_age_filter_empty": capture(base, "/search?entity=john%20major&categories=age"),
                "profile_john_major": capture(base, "/profiles/john%20major"),
                "profile_missing": capture(base, "/profiles/nobody%20here"),
            }
            OUT.mkdir(parents=True, exist_ok=True)
            for name, record in records.items():
                (OUT / f"{name}.json").write_text(
                    json.dumps(record, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
                print("wrote", name, "status", record["status"], "x-cache", record["xCache"])
        finally:
            handle.shutdown()


if __name__ == "__main__":
    main()
