"""Persistent per-entity profile database.

A profile keys an entity string to its descriptions, with frequencies,
categories, and provenance. Persistence is an append-only journal of
upsert records plus a compacted snapshot written by :meth:`commit`;
reopening replays snapshot + journal, so committed state survives a
restart and replaying a corpus doubles every frequency.
"""

import datetime
import json
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import FormatError, StorageError, UnknownCategory
from .extract import Description, normalize_key
from .lexicon import Categorization
from .text import Token, detokenize, parse_tagged, render_tagged

DEFAULT_CATEGORIES = ("age", "location", "nationality", "occupation", "organization")

_SNAPSHOT_HEADER = "PROFILEDB v1"


@dataclass
class ProfileEntry:
    description: tuple[Token, ...]
    surface: str
    frequency: int
    kind: str | None
    categories: list[Categorization] = field(default_factory=list)
    first_seen: datetime.date | None = None
    last_seen: datetime.date | None = None
    source: str | None = None

    def category_labels(self) -> set[str]:
        return {c.category for c in self.categories}


@dataclass
class Profile:
    key: str
    source: str
    created: datetime.date | None = None
    entries: list[ProfileEntry] = field(default_factory=list)

    def ranked_entries(self) -> list[ProfileEntry]:
        return sorted(self.entries, key=lambda e: (-e.frequency, e.surface))


def _entry_surface(tokens) -> str:
    return detokenize([t.word.lower() for t in tokens])


class ProfileStore:
    """Profile database with exact-key lookup and ranked queries.

    Writes are serialized by an internal lock; reads return copies so
    callers never observe a profile mid-update. With a directory path the
    store journals every upsert and loads snapshot + journal on open; with
    ``path=None`` it is memory-only.
    """

    def __init__(self, path: str | Path | None = None,
                 categories=DEFAULT_CATEGORIES):
        self._profiles: dict[str, Profile] = {}
        self._lock = threading.RLock()
        self.categories = tuple(categories)
        self.path = Path(path) if path is not None else None
        self._journal = None
        if self.path is not None:
            try:
                self.path.mkdir(parents=True, exist_ok=True)
                self._load()
                self._journal = open(self._journal_path(), "a", encoding="utf-8")
            except OSError as exc:
                raise StorageError(f"cannot open store at {self.path}: {exc}") from exc

    # ------------------------------------------------------------------
    # Core operations

    def upsert(self, desc: Description, categories: list[Categorization] | None = None) -> Profile:
        """Record one description occurrence and return the post-state
        profile. New keys create a profile; repeated descriptions bump
        the frequency; dates widen first_seen/last_seen."""
        with self._lock:
            profile = self._apply_upsert(desc, list(categories or []))
            if self._journal is not None:
                try:
                    self._journal.write(json.dumps(
                        _upsert_record(desc, categories or [])) + "\n")
                    self._journal.flush()
                except OSError as exc:
                    raise StorageError(f"journal write failed: {exc}") from exc
            return _copy_profile(profile)

    def _apply_upsert(self, desc: Description, categories: list[Categorization]) -> Profile:
        key = normalize_key(desc.entity_key)
        profile = self._profiles.get(key)
        if profile is None:
            profile = Profile(key=key, source=desc.source, created=desc.date)
            self._profiles[key] = profile
        surface = _entry_surface(desc.tokens)
        for entry in profile.entries:
            if entry.surface == surface:
                entry.frequency += 1
                if desc.date is not None:
                    if entry.first_seen is None or desc.date < entry.first_seen:
                        entry.first_seen = desc.date
                    if entry.last_seen is None or desc.date > entry.last_seen:
                        entry.last_seen = desc.date
                for cat in categories:
                    if cat not in entry.categories:
                        entry.categories.append(cat)
                return profile
        profile.entries.append(ProfileEntry(
            description=tuple(desc.tokens), surface=surface, frequency=1,
            kind=desc.kind, categories=list(categories),
            first_seen=desc.date, last_seen=desc.date, source=desc.source))
        return profile

    def batch_upsert(self, items) -> int:
        """Sequential upserts of (description, categories) pairs."""
        n = 0
        for desc, categories in items:
            self.upsert(desc, categories)
            n += 1
        return n

    def get(self, key: str) -> Profile | None:
        """Exact lookup on the normalized key; no fuzzy matching."""
        with self._lock:
            profile = self._profiles.get(normalize_key(key))
            return _copy_profile(profile) if profile is not None else None

    def keys(self) -> list[str]:
        with self._lock:
            return sorted(self._profiles)

    def query(self, key: str, category_filter=None, max: int | None = None) -> list[ProfileEntry]:
        """Entries for a key, restricted to categories in the filter when
        given, ranked by frequency (ties broken by surface), truncated
        to ``max``."""
        if max is not None and max < 1:
            raise ValueError("max must be >= 1")
        if category_filter:
            unknown = set(category_filter) - set(self.categories)
            if unknown:
                raise UnknownCategory(", ".join(sorted(unknown)))
        profile = self.get(key)
        if profile is None:
            return []
        entries = profile.ranked_entries()
        if category_filter:
            wanted = set(category_filter)
            entries = [e for e in entries if e.category_labels() & wanted]
        return entries[:max] if max is not None else entries

    # ------------------------------------------------------------------
    # Figure-style text blocks

    def export_text(self, key: str) -> str:
        """KEY / SOURCE / DESCRIPTION / FREQUENCY block for one profile,
        descriptions in frequency-descending order."""
        profile = self.get(key)
        if profile is None:
            raise KeyError(key)
        return export_profile_text(profile)

    # ------------------------------------------------------------------
    # Persistence

    def commit(self) -> None:
        """Write a compacted snapshot and truncate the journal."""
        if self.path is None:
            return
        with self._lock:
            try:
                tmp = self._snapshot_path().with_suffix(".tmp")
                with open(tmp, "w", encoding="utf-8") as fh:
                    fh.write(_SNAPSHOT_HEADER + "\n")
                    for key in sorted(self._profiles):
                        fh.write(json.dumps(_profile_record(self._profiles[key])) + "\n")
                tmp.replace(self._snapshot_path())
                if self._journal is not None:
                    self._journal.close()
                self._journal = open(self._journal_path(), "w", encoding="utf-8")
            except OSError as exc:
                raise StorageError(f"commit failed: {exc}") from exc

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()
            self._journal = None

    def _snapshot_path(self) -> Path:
        return self.path / "profiles.db"

    def _journal_path(self) -> Path:
        return self.path / "journal.log"

    def _load(self) -> None:
        snapshot = self._snapshot_path()
        if snapshot.exists():
            lines = snapshot.read_text(encoding="utf-8").splitlines()
            if not lines or lines[0] != _SNAPSHOT_HEADER:
                raise StorageError(f"{snapshot}: missing {_SNAPSHOT_HEADER!r} header")
            for line in lines[1:]:
                if line.strip():
                    profile = _profile_from_record(json.loads(line))
                    self._profiles[profile.key] = profile
        journal = self._journal_path()
        if journal.exists():
            for line in journal.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    desc, categories = _upsert_from_record(json.loads(line))
                    self._apply_upsert(desc, categories)


# --------------------------------------------------------------------------
# Record (de)serialization

def _categorization_record(c: Categorization) -> dict:
    return {"category": c.category, "trigger": c.trigger, "anchor": c.anchor}


def _categorization_from_record(d: dict) -> Categorization:
    return Categorization(d["category"], d["trigger"], d["anchor"])


def _upsert_record(desc: Description, categories) -> dict:
    return {
        "key": desc.entity_key,
        "tagged": render_tagged(list(desc.tokens)),
        "kind": desc.kind,
        "source": desc.source,
        "date": desc.date.isoformat() if desc.date else None,
        "doc_id": desc.doc_id,
        "categories": [_categorization_record(c) for c in categories],
    }


def _upsert_from_record(d: dict) -> tuple[Description, list[Categorization]]:
    desc = Description(
        entity_key=d["key"], tokens=tuple(parse_tagged(d["tagged"])),
        kind=d["kind"], source=d["source"],
        date=datetime.date.fromisoformat(d["date"]) if d["date"] else None,
        doc_id=d["doc_id"])
    return desc, [_categorization_from_record(c) for c in d["categories"]]


def _entry_record(e: ProfileEntry) -> dict:
    return {
        "tagged": render_tagged(list(e.description)),
        "surface": e.surface,
        "frequency": e.frequency,
        "kind": e.kind,
        "categories": [_categorization_record(c) for c in e.categories],
        "first_seen": e.first_seen.isoformat() if e.first_seen else None,
        "last_seen": e.last_seen.isoformat() if e.last_seen else None,
        "source": e.source,
    }


def _entry_from_record(d: dict) -> ProfileEntry:
    return ProfileEntry(
        description=tuple(parse_tagged(d["tagged"])),
        surface=d["surface"], frequency=d["frequency"], kind=d["kind"],
        categories=[_categorization_from_record(c) for c in d["categories"]],
        first_seen=datetime.date.fromisoformat(d["first_seen"]) if d["first_seen"] else None,
        last_seen=datetime.date.fromisoformat(d["last_seen"]) if d["last_seen"] else None,
        source=d.get("source"))


def _profile_record(p: Profile) -> dict:
    return {
        "key": p.key,
        "source": p.source,
        "created": p.created.isoformat() if p.created else None,
        "entries": [_entry_record(e) for e in p.entries],
    }


def _profile_from_record(d: dict) -> Profile:
    return Profile(
        key=d["key"], source=d["source"],
        created=datetime.date.fromisoformat(d["created"]) if d["created"] else None,
        entries=[_entry_from_record(e) for e in d["entries"]])


def _copy_profile(p: Profile) -> Profile:
    return Profile(key=p.key, source=p.source, created=p.created,
                   entries=[replace(e, categories=list(e.categories))
                            for e in p.entries])


# --------------------------------------------------------------------------
# Figure-style text export/import

def export_profile_text(profile: Profile) -> str:
    lines = [f"KEY: {profile.key}", f"SOURCE: {profile.source}"]
    for entry in profile.ranked_entries():
        lines.append(f"DESCRIPTION: {entry.surface}")
        lines.append(f"FREQUENCY: {entry.frequency}")
    return "\n".join(lines) + "\n"


def import_profile_text(text: str) -> Profile:
    """Parse a KEY/SOURCE/DESCRIPTION/FREQUENCY block. Imported entries
    carry surface and frequency only (tokens are untagged words; kind and
    dates are unknown)."""
    from .text import Tag, tokenize

    key = source = None
    entries: list[ProfileEntry] = []
    pending_surface = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"line {lineno}: expected FIELD: value")
        name, _, value = line.partition(":")
        value = value.strip()
        if name == "KEY":
            key = value
        elif name == "SOURCE":
            source = value
        elif name == "DESCRIPTION":
            if pending_surface is not None:
                raise FormatError(f"line {lineno}: DESCRIPTION without FREQUENCY")
            pending_surface = value
        elif name == "FREQUENCY":
            if pending_surface is None:
                raise FormatError(f"line {lineno}: FREQUENCY without DESCRIPTION")
            try:
                freq = int(value)
            except ValueError:
                raise FormatError(f"line {lineno}: bad frequency {value!r}") from None
            tokens = tuple(Token(w, Tag.UNK) for w in tokenize(pending_surface))
            entries.append(ProfileEntry(description=tokens, surface=pending_surface,
                                        frequency=freq, kind=None))
            pending_surface = None
        else:
            raise FormatError(f"line {lineno}: unknown field {name!r}")
    if key is None or source is None:
        raise FormatError("block must carry KEY and SOURCE")
    if pending_surface is not None:
        raise FormatError("trailing DESCRIPTION without FREQUENCY")
    return Profile(key=key, source=source, entries=entries)
