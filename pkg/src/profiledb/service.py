"""HTTP query service over the profile store.

Endpoints: GET /health, GET /profiles/{key}, GET /search, POST /ingest,
GET /sources, GET /categories. Responses are JSON (one canonical schema,
documented in the README); GET /profiles/{key} also answers the classic
KEY/SOURCE/DESCRIPTION/FREQUENCY text block under ``Accept: text/plain``.

Search consults a bounded LRU cache first (the X-Cache header reports
hit or miss). On a miss it queries the store; when the store has no
suitable entry and the request names sources, it fetches those sources,
extracts descriptions for the entity on the fly, stores them, and
re-queries. Upserts invalidate every cache entry for the touched key.
"""

import hashlib
import json
import logging
import os
import threading
import time
import urllib.request
from collections import OrderedDict
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from .errors import BindError, ConfigError, FetchError, UnknownCategory
from .extract import (Description, extract_descriptions, normalize_key,
                      run_pipeline)
from .lexicon import LexDB
from .resources import default_lexdb, default_np_grammar, default_tagger_resources
from .store import ProfileStore, export_profile_text
from .text import TaggedDoc, read_corpus_dir, read_corpus_file, tag, tokenize

log = logging.getLogger(__name__)

ENV_ADDRESS = "PROFILEDB_ADDRESS"
ENV_STORE = "PROFILEDB_STORE"


@dataclass(frozen=True)
class SourceConfig:
    name: str
    kind: str  # "local-directory" | "http-fetch"
    location: str
    format: str = "tagged"  # "tagged" | "plain"


@dataclass
class ServiceConfig:
    address: str = "127.0.0.1:8000"
    store_path: str | None = None
    cache_size: int = 256
    fetch_limit: int = 50
    sources: list[SourceConfig] = field(default_factory=list)
    webui_dir: str | None = None

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.address.rpartition(":")
        if not host or not port.isdigit():
            raise ConfigError(f"bad address {self.address!r}")
        return host, int(port)


def load_config(path: str | Path) -> ServiceConfig:
    """Read a JSON config file and apply environment overrides."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_config(raw)


def build_config(raw: dict) -> ServiceConfig:
    known_kinds = ("local-directory", "http-fetch")
    sources = []
    names = set()
    for item in raw.get("sources", []):
        src = SourceConfig(name=item["name"], kind=item["kind"],
                           location=item["location"],
                           format=item.get("format", "tagged"))
        if src.name in names:
            raise ConfigError(f"duplicate source {src.name!r}")
        if src.kind not in known_kinds:
            raise ConfigError(f"source {src.name!r}: unknown kind {src.kind!r}")
        if src.format not in ("tagged", "plain"):
            raise ConfigError(f"source {src.name!r}: unknown format {src.format!r}")
        names.add(src.name)
        sources.append(src)
    config = ServiceConfig(
        address=os.environ.get(ENV_ADDRESS) or raw.get("address", "127.0.0.1:8000"),
        store_path=os.environ.get(ENV_STORE) or raw.get("store_path"),
        cache_size=int(raw.get("cache_size", 256)),
        fetch_limit=int(raw.get("fetch_limit", 50)),
        sources=sources,
        webui_dir=raw.get("webui_dir"))
    config.host_port()
    return config


@dataclass(frozen=True)
class QueryRecord:
    """One cached query: canonicalized parameters, the rendered response,
    and when it was answered."""

    key: str
    category_filter: tuple[str, ...]
    max: int | None
    sources: tuple[str, ...]
    issued_at: float
    result_hash: str
    body: bytes

    def cache_key(self) -> tuple:
        return (self.key, self.category_filter, self.max, self.sources)


def _make_record(cache_key: tuple, body: bytes) -> QueryRecord:
    key, categories, max_results, sources = cache_key
    return QueryRecord(key=key, category_filter=categories, max=max_results,
                       sources=sources, issued_at=time.time(),
                       result_hash=hashlib.sha256(body).hexdigest(), body=body)


class QueryCache:
    """Bounded LRU of answered queries, invalidated per entity key."""

    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._items: OrderedDict[tuple, QueryRecord] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: tuple) -> QueryRecord | None:
        with self._lock:
            record = self._items.get(key)
            if record is not None:
                self._items.move_to_end(key)
            return record

    def put(self, key: tuple, body: bytes) -> QueryRecord:
        record = _make_record(key, body)
        with self._lock:
            self._items[key] = record
            self._items.move_to_end(key)
            while len(self._items) > self.maxsize:
                self._items.popitem(last=False)
        return record

    def invalidate_entity(self, entity_key: str) -> int:
        with self._lock:
            stale = [k for k in self._items if k[0] == entity_key]
            for k in stale:
                del self._items[k]
            return len(stale)

    def __len__(self):
        return len(self._items)


def fetch_and_extract(entity_words: list[str], sources: list[SourceConfig],
                      fetch_limit: int = 50) -> tuple[list[Description], list[str]]:
    """Pull articles from the given sources, extract descriptions for one
    entity, and collect per-source failures as warnings (never fatal)."""
    grammar = default_np_grammar()
    descriptions: list[Description] = []
    warnings: list[str] = []
    budget = fetch_limit
    for src in sources:
        try:
            docs = _load_source_docs(src)
        except FetchError as exc:
            warnings.append(str(exc))
            continue
        if budget is not None:
            docs = docs[:budget]
            budget -= len(docs)
        descriptions.extend(extract_descriptions(entity_words, docs, grammar))
    return descriptions, warnings


def _load_source_docs(src: SourceConfig) -> list[TaggedDoc]:
    if src.kind == "local-directory":
        try:
            return read_corpus_dir(src.location, source=src.name)
        except OSError as exc:
            raise FetchError(src.name, str(exc)) from exc
    if src.kind == "http-fetch":
        try:
            with urllib.request.urlopen(src.location, timeout=10) as resp:
                text = resp.read().decode("utf-8")
        except (OSError, ValueError) as exc:
            raise FetchError(src.name, str(exc)) from exc
        return _docs_from_text(text, src)
    raise FetchError(src.name, f"unknown kind {src.kind!r}")


def _docs_from_text(text: str, src: SourceConfig) -> list[TaggedDoc]:
    import datetime

    from .text import parse_corpus
    if text.lstrip().startswith("#DOC"):
        return parse_corpus(text)
    lexicon, rules = default_tagger_resources()
    tokens = tag(tokenize(text), lexicon, rules)
    return [TaggedDoc(id=src.name, source=src.name,
                      date=datetime.date.today(), tokens=tokens)]


class ServiceApp:
    """Request handling and shared state, independent of the HTTP layer."""

    def __init__(self, config: ServiceConfig, lex: LexDB | None = None):
        self.config = config
        self.lex = lex or default_lexdb()
        self.grammar = default_np_grammar()
        self.store = ProfileStore(config.store_path, categories=self.lex.categories())
        self.cache = QueryCache(config.cache_size)
        self.sources = {src.name: src for src in config.sources}
        self.ingest_lock = threading.Lock()

    # ------------------------------------------------------------------

    def health(self):
        return 200, {"status": "ok"}, {}

    def categories(self):
        return 200, {"categories": self.lex.categories()}, {}

    def list_sources(self):
        return 200, {"sources": [vars(s) for s in self.config.sources]}, {}

    def profile(self, key: str, accept: str = ""):
        profile = self.store.get(key)
        if profile is None:
            return 404, {"error": f"no profile for {normalize_key(key)!r}"}, {}
        if "text/plain" in accept:
            return 200, export_profile_text(profile), {"content_type": "text/plain; charset=utf-8"}
        return 200, _profile_json(profile), {}

    def search(self, params: dict):
        entity = (params.get("entity") or "").strip()
        if not entity:
            return 400, {"error": "entity parameter is required"}, {}
        try:
            max_results = _int_param(params, "max")
            fetch_limit = _int_param(params, "fetch_limit") or self.config.fetch_limit
        except ValueError as exc:
            return 400, {"error": str(exc)}, {}
        if max_results is not None and max_results < 1:
            return 400, {"error": "max must be >= 1"}, {}
        categories = _list_param(params, "categories")
        source_names = _list_param(params, "sources")
        for name in source_names:
            if name not in self.sources:
                return 400, {"error": f"unknown source {name!r}"}, {}

        key = normalize_key(entity)
        cache_key = (key, tuple(sorted(categories)), max_results,
                     tuple(sorted(source_names)))
        cached = self.cache.get(cache_key)
        if cached is not None:
            return 200, cached.body, {"cache": "hit"}

        try:
            entries = self.store.query(key, categories or None, max_results)
        except UnknownCategory as exc:
            return 400, {"error": f"unknown category: {exc}"}, {}

        warnings: list[str] = []
        fetched_surfaces: set[str] = set()
        if not entries and source_names:
            descs, warnings = fetch_and_extract(
                entity.split(), [self.sources[n] for n in source_names], fetch_limit)
            for desc in descs:
                cats = self.lex.categorize(list(desc.tokens))
                self.store.upsert(desc, cats)
                fetched_surfaces.add(" ".join(w.lower() for w in
                                              [t.word for t in desc.tokens]))
            if descs:
                self.cache.invalidate_entity(key)
            entries = self.store.query(key, categories or None, max_results)
            if not entries and warnings and not descs:
                return 502, {"error": "all sources failed", "warnings": warnings}, {}

        body = {
            "entity": key,
            "categories": sorted(categories),
            "max": max_results,
            "sources": sorted(source_names),
            "results": [_entry_json(e, fetched_surfaces) for e in entries],
            "warnings": warnings,
            "fetched": len(fetched_surfaces),
        }
        encoded = _encode(body)
        self.cache.put(cache_key, encoded)
        return 200, encoded, {"cache": "miss"}

    def ingest(self, source_name: str):
        src = self.sources.get(source_name)
        if src is None:
            return 404, {"error": f"unknown source {source_name!r}"}, {}
        if not self.ingest_lock.acquire(blocking=False):
            return 409, {"error": "ingest already running"}, {}
        try:
            try:
                docs = _load_source_docs(src)
            except FetchError as exc:
                return 502, {"error": str(exc)}, {}
            result = run_pipeline(docs, self.lex, self.grammar)
            touched = set()
            for item in result.descriptions:
                self.store.upsert(item.description, item.categories)
                touched.add(item.description.entity_key)
            for key in touched:
                self.cache.invalidate_entity(key)
            self.store.commit()
            report = {
                "source": source_name,
                "documents": len(docs),
                "descriptions": len(result.descriptions),
                "profiles": len(touched),
                "report": result.report.to_dict(),
            }
            return 200, report, {}
        finally:
            self.ingest_lock.release()


def _int_param(params: dict, name: str) -> int | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer") from None


def _list_param(params: dict, name: str) -> list[str]:
    raw = params.get(name) or ""
    return [item.strip() for item in raw.split(",") if item.strip()]


def _entry_json(entry, fetched_surfaces: set[str]) -> dict:
    from .text import render_tagged
    surface_words = " ".join(t.word.lower() for t in entry.description)
    return {
        "description": entry.surface,
        "tagged": render_tagged(list(entry.description)),
        "kind": entry.kind,
        "frequency": entry.frequency,
        "categories": [{"category": c.category, "trigger": c.trigger,
                        "anchor": c.anchor} for c in entry.categories],
        "source": entry.source,
        "first_seen": entry.first_seen.isoformat() if entry.first_seen else None,
        "last_seen": entry.last_seen.isoformat() if entry.last_seen else None,
        "origin": "fetched" if surface_words in fetched_surfaces else "store",
    }


def _profile_json(profile) -> dict:
    return {
        "key": profile.key,
        "source": profile.source,
        "created": profile.created.isoformat() if profile.created else None,
        "entries": [_entry_json(e, set()) for e in profile.ranked_entries()],
    }


def _encode(body) -> bytes:
    return json.dumps(body, ensure_ascii=False).encode("utf-8")


# --------------------------------------------------------------------------
# HTTP layer

_STATIC_TYPES = {".html": "text/html; charset=utf-8",
                 ".js": "text/javascript; charset=utf-8",
                 ".css": "text/css; charset=utf-8",
                 ".json": "application/json",
                 ".ico": "image/x-icon"}


class _Handler(BaseHTTPRequestHandler):
    app: ServiceApp = None  # set by serve()

    def log_message(self, fmt, *args):
        log.debug("%s " + fmt, self.address_string(), *args)

    def _reply(self, status: int, body, extra: dict):
        if isinstance(body, bytes):
            payload = body
            content_type = extra.get("content_type", "application/json")
        elif isinstance(body, str):
            payload = body.encode("utf-8")
            content_type = extra.get("content_type", "text/plain; charset=utf-8")
        else:
            payload = _encode(body)
            content_type = extra.get("content_type", "application/json")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        if "cache" in extra:
            self.send_header("X-Cache", extra["cache"])
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        url = urlparse(self.path)
        path = url.path
        params = {k: v[0] for k, v in parse_qs(url.query).items()}
        if path == "/health":
            return self._reply(*self.app.health())
        if path == "/categories":
            return self._reply(*self.app.categories())
        if path == "/sources":
            return self._reply(*self.app.list_sources())
        if path == "/search":
            return self._reply(*self.app.search(params))
        if path.startswith("/profiles/"):
            key = unquote(path[len("/profiles/"):])
            return self._reply(*self.app.profile(key, self.headers.get("Accept", "")))
        if self._serve_static(path):
            return
        self._reply(404, {"error": f"no such endpoint {path!r}"}, {})

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/ingest":
            return self._reply(404, {"error": f"no such endpoint {url.path!r}"}, {})
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            body = json.loads(raw.decode("utf-8") or "{}")
        except ValueError:
            return self._reply(400, {"error": "request body must be JSON"}, {})
        source = body.get("source", "")
        if not source:
            return self._reply(400, {"error": "source is required"}, {})
        self._reply(*self.app.ingest(source))

    def _serve_static(self, path: str) -> bool:
        root = self.app.config.webui_dir
        if not root:
            return False
        root = Path(root).resolve()
        target = (root / (path.lstrip("/") or "index.html")).resolve()
        if root not in target.parents and target != root:
            return False
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return False
        payload = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type",
                         _STATIC_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)
        return True


class ServiceHandle:
    def __init__(self, server: ThreadingHTTPServer, app: ServiceApp):
        self.server = server
        self.app = app
        self.host, self.port = server.server_address[:2]
        self._thread = threading.Thread(target=server.serve_forever, daemon=True)

    @property
    def address(self) -> str:
        return f"{self.host}:{self.port}"

    def start(self):
        self._thread.start()
        return self

    def shutdown(self):
        self.server.shutdown()
        self.server.server_close()
        self.app.store.close()

    def wait(self):
        self._thread.join()


def serve(config: ServiceConfig, lex: LexDB | None = None) -> ServiceHandle:
    """Start the service in a background thread and return its handle."""
    app = ServiceApp(config, lex)
    handler = type("BoundHandler", (_Handler,), {"app": app})
    host, port = config.host_port()
    try:
        server = ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise BindError(f"cannot bind {config.address}: {exc}") from exc
    return ServiceHandle(server, app).start()
