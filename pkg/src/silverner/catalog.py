"""Entity catalog: loading, lookup tables, and the name-matching index.

The catalog file is JSON Lines, one entity per line, with "#" comment lines.
Names and titles are NFC-normalized with whitespace runs collapsed; titles
additionally get underscores replaced and MediaWiki first-letter casing.
Names shared by entities of two or more classes are ambiguous and never enter
a name index.
"""

from __future__ import annotations

import io
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple, Union

from .matching import AhoCorasick

logger = logging.getLogger(__name__)

_WS_RUN = re.compile(r"\s+")

# Above this many patterns a compiled regex alternation stops being practical
# and the automaton takes over.  Both backends produce identical hits.
_REGEX_BACKEND_MAX = 128


class EntityClass(Enum):
    """Closed set of entity classes; values match the catalog file format."""

    PER = "PER"
    ORG = "ORG"
    LOC = "LOC"


class CatalogError(ValueError):
    """Unrecoverable catalog problem, e.g. a duplicate entity id."""


def normalize_name(name: str) -> str:
    """NFC-normalize, collapse whitespace runs, strip. Case is preserved."""
    return _WS_RUN.sub(" ", unicodedata.normalize("NFC", name)).strip()


def normalize_title(title: str) -> str:
    """normalize_name plus underscore-to-space and first-letter uppercasing.

    MediaWiki titles are case-insensitive in their first character only, so
    "rio de Janeiro" and "Rio_de_Janeiro" normalize to the same key.
    """
    t = normalize_name(title.replace("_", " "))
    return t[:1].upper() + t[1:] if t else t


@dataclass(frozen=True)
class EntityRecord:
    """One catalog entity.  `names` is deduplicated and always holds the title."""

    entity_id: str
    entity_class: EntityClass
    wiki_id: int
    title: str
    names: tuple[str, ...]


@dataclass
class CatalogLoadReport:
    """Counts and per-line diagnostics collected while loading a catalog."""

    records: int = 0
    names: int = 0
    ambiguous_names: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)
    duplicate_titles: list[str] = field(default_factory=list)
    duplicate_wiki_ids: list[int] = field(default_factory=list)


@dataclass
class EntityCatalog:
    """Loaded catalog with id, title, and wiki-id lookup tables."""

    records: tuple[EntityRecord, ...]
    by_id: dict[str, EntityRecord]
    by_title: dict[str, str]
    by_wiki_id: dict[int, str]
    ambiguous_names: frozenset[str]
    load_report: CatalogLoadReport

    def __len__(self) -> int:
        return len(self.records)

    def get(self, entity_id: str) -> EntityRecord:
        return self.by_id[entity_id]


class NameHit(NamedTuple):
    """A word-aligned occurrence of an indexed name."""

    start: int
    end: int
    name: str
    entity_id: str
    entity_class: EntityClass


class NameIndex:
    """Immutable name matcher over a pattern-to-entity mapping.

    scan() returns, for each start offset with at least one word-aligned
    occurrence, the longest aligned candidate at that offset, ordered by
    start.  A boundary is word-aligned when the neighbouring character (if
    any) is neither a letter nor a digit.

    Small pattern sets use a compiled regex alternation (sorted longest
    first, with per-alternative boundary lookarounds); large ones fall back
    to the Aho-Corasick automaton with an explicit post-filter.  The two
    backends are interchangeable.
    """

    __slots__ = ("_patterns", "_backend", "_rx", "_automaton", "_names")

    def __init__(
        self,
        patterns: dict[str, tuple[str, EntityClass]],
        backend: str | None = None,
    ):
        for name in patterns:
            if not name:
                raise ValueError("empty name cannot be indexed")
        self._patterns = dict(patterns)
        self._names = sorted(self._patterns)
        if backend is None:
            backend = "regex" if len(self._patterns) <= _REGEX_BACKEND_MAX else "aho"
        if backend not in ("regex", "aho"):
            raise ValueError(f"unknown backend: {backend}")
        self._backend = backend
        self._rx = None
        self._automaton = None
        if not self._patterns:
            return
        if backend == "regex":
            # [^\W_] is "letter or digit": \w minus the underscore.
            alts = sorted(self._patterns, key=len, reverse=True)
            body = "|".join(f"{re.escape(n)}(?![^\\W_])" for n in alts)
            self._rx = re.compile(f"(?<![^\\W_])(?=({body}))")
        else:
            self._automaton = AhoCorasick(self._names)

    def __len__(self) -> int:
        return len(self._patterns)

    def __contains__(self, name: str) -> bool:
        return name in self._patterns

    @property
    def patterns(self) -> dict[str, tuple[str, EntityClass]]:
        return dict(self._patterns)

    @property
    def backend(self) -> str:
        return self._backend

    def scan(self, text: str) -> list[NameHit]:
        if not self._patterns or not text:
            return []
        if self._rx is not None:
            hits = []
            for m in self._rx.finditer(text):
                name = m.group(1)
                eid, cls = self._patterns[name]
                hits.append(NameHit(m.start(), m.start() + len(name), name, eid, cls))
            return hits
        return self._scan_automaton(text)

    def _scan_automaton(self, text: str) -> list[NameHit]:
        n = len(text)
        best: dict[int, int] = {}
        for start, end, _ in self._automaton.find_all(text):
            if start > 0 and text[start - 1].isalnum():
                continue
            if end < n and text[end].isalnum():
                continue
            prev = best.get(start)
            if prev is None or end > prev:
                best[start] = end
        hits = []
        for start in sorted(best):
            end = best[start]
            name = text[start:end]
            eid, cls = self._patterns[name]
            hits.append(NameHit(start, end, name, eid, cls))
        return hits


CatalogSource = Union[str, Path, io.TextIOBase, Iterable[str]]


def _parse_record(obj: object) -> EntityRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    for key in ("id", "class", "wiki_id", "title", "names"):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
    entity_id = obj["id"]
    if not isinstance(entity_id, str) or not entity_id:
        raise ValueError("field 'id' must be a non-empty string")
    try:
        entity_class = EntityClass(obj["class"])
    except ValueError:
        raise ValueError(f"unknown class {obj['class']!r}") from None
    wiki_id = obj["wiki_id"]
    if isinstance(wiki_id, bool) or not isinstance(wiki_id, int) or wiki_id < 0:
        raise ValueError("field 'wiki_id' must be a non-negative integer")
    title_raw = obj["title"]
    if not isinstance(title_raw, str):
        raise ValueError("field 'title' must be a string")
    title = normalize_title(title_raw)
    if not title:
        raise ValueError("field 'title' is empty after normalization")
    raw_names = obj["names"]
    if not isinstance(raw_names, list) or not all(isinstance(n, str) for n in raw_names):
        raise ValueError("field 'names' must be a list of strings")
    names: list[str] = []
    seen: set[str] = set()
    for raw in [title_raw] + raw_names:
        name = normalize_name(raw)
        if name and name not in seen:
            seen.add(name)
            names.append(name)
    return EntityRecord(entity_id, entity_class, wiki_id, title, tuple(names))


def load_catalog(source: CatalogSource) -> EntityCatalog:
    """Load a JSON Lines catalog from a path, text stream, or line iterable.

    Malformed lines are rejected individually and reported with their line
    numbers; a duplicate entity id is fatal.  Duplicate titles and wiki ids
    keep the first record and are logged.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return _load_lines(fh)
    return _load_lines(source)


def _load_lines(lines: Iterable[str]) -> EntityCatalog:
    report = CatalogLoadReport()
    records: list[EntityRecord] = []
    by_id: dict[str, EntityRecord] = {}
    by_title: dict[str, str] = {}
    by_wiki_id: dict[int, str] = {}
    name_classes: dict[str, set[EntityClass]] = {}

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            obj = json.loads(stripped)
            record = _parse_record(obj)
        except (json.JSONDecodeError, ValueError) as exc:
            report.rejected.append((lineno, str(exc)))
            logger.warning("catalog line %d rejected: %s", lineno, exc)
            continue
        if record.entity_id in by_id:
            raise CatalogError(
                f"catalog line {lineno}: duplicate entity id {record.entity_id!r}"
            )
        by_id[record.entity_id] = record
        records.append(record)
        if record.title in by_title:
            report.duplicate_titles.append(record.title)
            logger.warning(
                "catalog line %d: duplicate title %r kept for %s",
                lineno,
                record.title,
                by_title[record.title],
            )
        else:
            by_title[record.title] = record.entity_id
        if record.wiki_id in by_wiki_id:
            report.duplicate_wiki_ids.append(record.wiki_id)
            logger.warning(
                "catalog line %d: duplicate wiki id %d kept for %s",
                lineno,
                record.wiki_id,
                by_wiki_id[record.wiki_id],
            )
        else:
            by_wiki_id[record.wiki_id] = record.entity_id
        for name in record.names:
            name_classes.setdefault(name, set()).add(record.entity_class)

    ambiguous = frozenset(n for n, cs in name_classes.items() if len(cs) > 1)
    report.records = len(records)
    report.names = sum(len(r.names) for r in records)
    report.ambiguous_names = len(ambiguous)
    return EntityCatalog(
        records=tuple(records),
        by_id=by_id,
        by_title=by_title,
        by_wiki_id=by_wiki_id,
        ambiguous_names=ambiguous,
        load_report=report,
    )


def build_name_index(
    catalog: EntityCatalog,
    restrict_to: Iterable[str] | None = None,
    backend: str | None = None,
) -> NameIndex:
    """Index the names of all (or a restricted subset of) catalog entities.

    Ambiguous names are excluded.  When two same-class entities share a name,
    the entity loaded first wins.  Unknown ids in restrict_to are an error;
    an empty restriction yields an empty index.
    """
    selected: Iterable[EntityRecord]
    if restrict_to is None:
        selected = catalog.records
    else:
        wanted = set(restrict_to)
        unknown = wanted - catalog.by_id.keys()
        if unknown:
            raise CatalogError(f"unknown entity ids: {sorted(unknown)!r}")
        selected = [r for r in catalog.records if r.entity_id in wanted]
    patterns: dict[str, tuple[str, EntityClass]] = {}
    for record in selected:
        for name in record.names:
            if name in catalog.ambiguous_names:
                continue
            patterns.setdefault(name, (record.entity_id, record.entity_class))
    return NameIndex(patterns, backend=backend)
