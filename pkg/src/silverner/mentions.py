"""Mention construction: exact-match tagging and the merge rules.

Two origins exist.  Annotated mentions come from catalog name matches and
interlink anchors; predicted ones from the auxiliary tagger.  On conflict an
anchor wins over an exact match, and an annotated mention always wins over a
predicted one: the predicted mention is discarded entirely.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .aux import WorkerError
from .catalog import EntityCatalog, EntityClass, NameIndex
from .linking import ArticleEntityContext
from .spans import Span

logger = logging.getLogger(__name__)


class Origin(Enum):
    """How a mention entered the corpus; values match the origin column."""

    ANNOTATED = "Anot"
    PREDICTED = "Pred"


@dataclass(frozen=True)
class Mention:
    """A classified, non-empty span of clean article text."""

    span: Span
    entity_class: EntityClass
    origin: Origin

    def __post_init__(self):
        if self.span.start >= self.span.end:
            raise ValueError(f"empty mention span {self.span}")


def _bump(counters: Counter | None, key: str) -> None:
    if counters is not None:
        counters[key] += 1


def match_mentions(text: str, index: NameIndex) -> list[Mention]:
    """Greedy leftmost-longest word-aligned catalog matches, as annotated mentions.

    The scan considers every word-aligned occurrence of an indexed name; at
    each position the longest candidate wins and the scan resumes after it,
    so the result is ordered and disjoint.
    """
    out: list[Mention] = []
    cursor = 0
    for hit in index.scan(text):
        if hit.start < cursor:
            continue
        out.append(Mention(Span(hit.start, hit.end), hit.entity_class, Origin.ANNOTATED))
        cursor = hit.end
    return out


def mentions_from_anchors(
    context: ArticleEntityContext, catalog: EntityCatalog
) -> list[Mention]:
    """Interlink anchors as annotated mentions, classed via the catalog."""
    out = []
    for span, entity_id in context.anchor_mentions:
        cls = catalog.get(entity_id).entity_class
        out.append(Mention(span, cls, Origin.ANNOTATED))
    out.sort(key=lambda m: m.span)
    return out


def merge_annotated(
    exact: Iterable[Mention], anchors: Sequence[Mention]
) -> list[Mention]:
    """Combine exact matches with anchor mentions; anchors win overlaps.

    Both inputs must be internally disjoint.  The result is ordered and
    disjoint and preserves every anchor mention.
    """
    anchor_list = sorted(anchors, key=lambda m: m.span)
    kept = list(anchor_list)
    for mention in exact:
        if any(mention.span.overlaps(a.span) for a in anchor_list):
            continue
        kept.append(mention)
    kept.sort(key=lambda m: m.span)
    return kept


def merge_predicted(
    annotated: Sequence[Mention],
    predicted: Iterable[Mention],
    counters: Counter | None = None,
) -> list[Mention]:
    """Add predicted mentions that conflict with no annotated one.

    A predicted mention overlapping any annotated mention is discarded
    entirely; annotated mentions are never modified or removed.
    """
    kept = list(annotated)
    for mention in predicted:
        if any(mention.span.overlaps(a.span) for a in annotated):
            _bump(counters, "predicted_conflicts")
            continue
        kept.append(mention)
    kept.sort(key=lambda m: m.span)
    return kept


def _is_offset(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def run_aux_tagger(text: str, worker, counters: Counter | None = None) -> list[Mention]:
    """Query the aux channel for one text and sanitize its response.

    Responses with invalid spans or classes are dropped span-by-span;
    overlaps within the response are resolved leftmost-longest.  A worker
    failure yields no predictions and is counted, never raised.
    """
    try:
        raw = worker.request(text)
    except WorkerError as exc:
        logger.warning("aux tagger request failed: %s", exc)
        _bump(counters, "aux_failures")
        return []
    n = len(text)
    spans: list[tuple[int, int, EntityClass]] = []
    for item in raw:
        if (
            not isinstance(item, dict)
            or not _is_offset(item.get("start"))
            or not _is_offset(item.get("end"))
            or not isinstance(item.get("class"), str)
        ):
            _bump(counters, "aux_invalid_spans")
            continue
        start, end = item["start"], item["end"]
        try:
            cls = EntityClass(item["class"])
        except ValueError:
            _bump(counters, "aux_invalid_spans")
            continue
        if not (0 <= start < end <= n):
            _bump(counters, "aux_invalid_spans")
            continue
        # trim whitespace edges so spans stay token-alignable
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start >= end:
            _bump(counters, "aux_invalid_spans")
            continue
        spans.append((start, end, cls))
    spans.sort(key=lambda t: (t[0], t[0] - t[1], t[2].value))
    out: list[Mention] = []
    cursor = 0
    for start, end, cls in spans:
        if start < cursor:
            _bump(counters, "aux_overlap_spans")
            continue
        out.append(Mention(Span(start, end), cls, Origin.PREDICTED))
        cursor = end
    return out
